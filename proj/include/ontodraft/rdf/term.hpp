#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>

namespace ontodraft::rdf {

namespace vocab {
inline constexpr std::string_view RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view OWL_NS = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view XSD_NS = "http://www.w3.org/2001/XMLSchema#";

inline constexpr std::string_view RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view RDF_FIRST = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
inline constexpr std::string_view RDF_REST = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
inline constexpr std::string_view RDF_NIL = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
inline constexpr std::string_view RDF_LANG_STRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view RDFS_CLASS = "http://www.w3.org/2000/01/rdf-schema#Class";
inline constexpr std::string_view RDFS_SUBCLASSOF = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view RDFS_DOMAIN = "http://www.w3.org/2000/01/rdf-schema#domain";
inline constexpr std::string_view RDFS_RANGE = "http://www.w3.org/2000/01/rdf-schema#range";
inline constexpr std::string_view RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view RDFS_COMMENT = "http://www.w3.org/2000/01/rdf-schema#comment";
inline constexpr std::string_view OWL_CLASS = "http://www.w3.org/2002/07/owl#Class";
inline constexpr std::string_view OWL_ONTOLOGY = "http://www.w3.org/2002/07/owl#Ontology";
inline constexpr std::string_view OWL_OBJECT_PROPERTY = "http://www.w3.org/2002/07/owl#ObjectProperty";
inline constexpr std::string_view OWL_DATATYPE_PROPERTY = "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline constexpr std::string_view OWL_TRANSITIVE_PROPERTY = "http://www.w3.org/2002/07/owl#TransitiveProperty";
inline constexpr std::string_view OWL_INVERSE_OF = "http://www.w3.org/2002/07/owl#inverseOf";
inline constexpr std::string_view XSD_STRING = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view XSD_INTEGER = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view XSD_DECIMAL = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view XSD_DOUBLE = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view XSD_BOOLEAN = "http://www.w3.org/2001/XMLSchema#boolean";

/// True for terms owned by the rdf/rdfs/owl/xsd vocabularies.
inline bool is_reserved(std::string_view iri) {
    return iri.starts_with(RDF_NS) || iri.starts_with(RDFS_NS) ||
           iri.starts_with(OWL_NS) || iri.starts_with(XSD_NS);
}
}  // namespace vocab

/// An absolute IRI. Holds the full string; namespace/local splitting is
/// positional (last '#' or '/'), which is how every consumer here reads terms.
struct Iri {
    std::string value;

    Iri() = default;
    explicit Iri(std::string v) : value(std::move(v)) {}

    bool operator==(const Iri&) const = default;
    auto operator<=>(const Iri&) const = default;

    std::string namespace_part() const {
        auto pos = value.find_last_of("#/");
        if (pos == std::string::npos) return value;
        return value.substr(0, pos + 1);
    }

    std::string local_name() const {
        auto pos = value.find_last_of("#/");
        if (pos == std::string::npos) return "";
        return value.substr(pos + 1);
    }
};

inline bool is_absolute_iri(std::string_view s) {
    if (s.empty()) return false;
    if (s.find("://") != std::string_view::npos) return true;
    // urn:NID:NSS
    if (s.size() > 4 && (s.substr(0, 4) == "urn:" || s.substr(0, 4) == "URN:"))
        return s.find(':', 4) != std::string_view::npos;
    return false;
}

/// True when the string has any scheme at all (mailto:, urn:, http:, ...).
inline bool has_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (size_t i = 1; i < s.size(); ++i) {
        char c = s[i];
        if (c == ':') return true;
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
            return false;
    }
    return false;
}

struct Term {
    enum class Kind { iri, blank, literal };

    Kind kind = Kind::iri;
    std::string value;     // IRI string, blank node id, or literal lexical form
    std::string datatype;  // literals only; absolute IRI
    std::string lang;      // literals only; non-empty iff datatype is rdf:langString

    static Term iri(std::string v) { return {Kind::iri, std::move(v), {}, {}}; }
    static Term blank(std::string id) { return {Kind::blank, std::move(id), {}, {}}; }
    static Term literal(std::string lex, std::string dt, std::string lang_tag = {}) {
        return {Kind::literal, std::move(lex), std::move(dt), std::move(lang_tag)};
    }
    static Term string_literal(std::string lex) {
        return literal(std::move(lex), std::string(vocab::XSD_STRING));
    }

    bool is_iri() const { return kind == Kind::iri; }
    bool is_blank() const { return kind == Kind::blank; }
    bool is_literal() const { return kind == Kind::literal; }

    // Literal comparison is lexical form + datatype IRI, no value-space
    // canonicalization.
    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

struct Triple {
    Term subject;
    Term predicate;  // always Kind::iri after parsing
    Term object;

    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

inline Triple make_triple(Term s, Term p, Term o) {
    return Triple{std::move(s), std::move(p), std::move(o)};
}

}  // namespace ontodraft::rdf
