#pragma once

#include <cctype>
#include <functional>
#include <string>
#include <string_view>

#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/rdf/term.hpp"

namespace ontodraft::rdf {

namespace detail {

inline bool valid_pn_local(std::string_view s) {
    if (s.empty()) return true;  // "ex:" is a legal prefixed name
    if (s.front() == '.' || s.back() == '.') return false;
    if (s.front() == '-') return false;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
            static_cast<unsigned char>(c) >= 0x80)
            continue;
        return false;
    }
    return true;
}

inline bool valid_blank_label(std::string_view s) {
    if (s.empty() || s.front() == '-' || s.front() == '.' || s.back() == '.') return false;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
            static_cast<unsigned char>(c) >= 0x80)
            continue;
        return false;
    }
    return true;
}

inline std::string escape_string(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

inline bool numeric_lexical_ok(std::string_view lex, std::string_view datatype) {
    if (lex.empty()) return false;
    size_t i = 0;
    if (lex[0] == '+' || lex[0] == '-') i = 1;
    bool digits = false, dot = false, exp = false, exp_digits = false;
    for (; i < lex.size(); ++i) {
        char c = lex[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            (exp ? exp_digits : digits) = true;
        } else if (c == '.' && !dot && !exp) {
            dot = true;
        } else if ((c == 'e' || c == 'E') && !exp && digits) {
            exp = true;
            if (i + 1 < lex.size() && (lex[i + 1] == '+' || lex[i + 1] == '-')) ++i;
        } else {
            return false;
        }
    }
    if (datatype == vocab::XSD_INTEGER) return digits && !dot && !exp;
    if (datatype == vocab::XSD_DECIMAL) return digits && dot && !exp;
    if (datatype == vocab::XSD_DOUBLE) return digits && exp && exp_digits;
    return false;
}

inline std::string render_iri(const std::string& iri, const Ontology& o) {
    // longest declared namespace match wins
    const std::string* best_name = nullptr;
    size_t best_len = 0;
    for (const auto& [name, ns] : o.prefixes) {
        if (ns.size() > best_len && iri.size() >= ns.size() && iri.compare(0, ns.size(), ns) == 0) {
            std::string_view local(iri.data() + ns.size(), iri.size() - ns.size());
            if (valid_pn_local(local)) {
                best_name = &name;
                best_len = ns.size();
            }
        }
    }
    if (best_name) return *best_name + ":" + iri.substr(best_len);
    return "<" + iri + ">";
}

inline std::string render_term(const Term& t, const Ontology& o, bool predicate_position) {
    switch (t.kind) {
        case Term::Kind::iri:
            if (predicate_position && t.value == vocab::RDF_TYPE) return "a";
            return render_iri(t.value, o);
        case Term::Kind::blank:
            if (valid_blank_label(t.value)) return "_:" + t.value;
            return "_:b" + std::to_string(std::hash<std::string>{}(t.value));  // last resort
        case Term::Kind::literal:
            if (t.datatype == vocab::XSD_BOOLEAN && (t.value == "true" || t.value == "false"))
                return t.value;
            if (numeric_lexical_ok(t.value, t.datatype)) return t.value;
            if (t.datatype == vocab::RDF_LANG_STRING && !t.lang.empty())
                return "\"" + escape_string(t.value) + "\"@" + t.lang;
            if (t.datatype == vocab::XSD_STRING || t.datatype.empty())
                return "\"" + escape_string(t.value) + "\"";
            return "\"" + escape_string(t.value) + "\"^^" + render_iri(t.datatype, o);
    }
    return {};
}

}  // namespace detail

/// Deterministic Turtle serialization: prefix block sorted by name, one triple
/// per line sorted by (subject, predicate, object). Round-trip stable: parsing
/// the output yields the same triple set.
inline std::string serialize_turtle(const Ontology& o) {
    std::string out;
    for (const auto& [name, ns] : o.prefixes)
        out += "@prefix " + name + ": <" + ns + "> .\n";
    if (!o.prefixes.empty() && !o.triples.empty()) out += "\n";
    for (const auto& t : o.triples) {
        out += detail::render_term(t.subject, o, false);
        out += " ";
        out += detail::render_term(t.predicate, o, true);
        out += " ";
        out += detail::render_term(t.object, o, false);
        out += " .\n";
    }
    return out;
}

}  // namespace ontodraft::rdf
