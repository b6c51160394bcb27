#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/rdf/term.hpp"

namespace ontodraft::rdf {

struct SyntaxError : std::runtime_error {
    size_t line;
    size_t column;
    SyntaxError(size_t ln, size_t col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(ln) + ":" + std::to_string(col) + ": " + msg),
          line(ln),
          column(col) {}
};

namespace detail {

// Recursive-descent parser for the Turtle subset used throughout: prefix and
// base directives, 'a', predicate-object lists, object lists, blank node
// property lists, collections, and string/typed/numeric/boolean literals.
class TurtleParser {
public:
    explicit TurtleParser(std::string_view text) : text_(text) {
        // Anonymous blank nodes get ids anon0, anon1, ... — skip past any ids
        // the document already uses as explicit labels.
        size_t pos = 0;
        while ((pos = text_.find("_:anon", pos)) != std::string_view::npos) {
            pos += 6;
            size_t n = 0;
            bool any = false;
            while (pos < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos]))) {
                n = n * 10 + (text_[pos] - '0');
                any = true;
                ++pos;
            }
            if (any && n >= next_anon_) next_anon_ = n + 1;
        }
    }

    Ontology parse() {
        Ontology out;
        skip_ws();
        while (!at_end()) {
            if (try_directive(out)) {
                skip_ws();
                continue;
            }
            parse_statement(out);
            skip_ws();
        }
        out.normalize();
        finish_header(out);
        return out;
    }

private:
    std::string_view text_;
    size_t pos_ = 0;
    size_t line_ = 1;
    size_t col_ = 1;
    size_t next_anon_ = 0;
    std::string base_;
    std::map<std::string, std::string>* prefixes_ = nullptr;
    std::vector<Triple>* sink_ = nullptr;

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_, col_, msg); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(size_t off = 0) const {
        return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
    }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                return;
            }
        }
    }

    void expect(char c, const char* what) {
        if (at_end() || peek() != c) fail(std::string("expected '") + c + "' " + what);
        advance();
    }

    bool match_keyword(std::string_view kw, bool case_insensitive = false) {
        if (pos_ + kw.size() > text_.size()) return false;
        for (size_t i = 0; i < kw.size(); ++i) {
            char a = text_[pos_ + i];
            char b = kw[i];
            if (case_insensitive) {
                a = static_cast<char>(std::tolower(static_cast<unsigned char>(a)));
                b = static_cast<char>(std::tolower(static_cast<unsigned char>(b)));
            }
            if (a != b) return false;
        }
        // keyword must not run into a name character
        char after = pos_ + kw.size() < text_.size() ? text_[pos_ + kw.size()] : '\0';
        if (std::isalnum(static_cast<unsigned char>(after)) || after == '_' || after == ':')
            return false;
        for (size_t i = 0; i < kw.size(); ++i) advance();
        return true;
    }

    // ---- directives ----

    bool try_directive(Ontology& out) {
        if (peek() == '@') {
            if (pos_ + 7 <= text_.size() && text_.substr(pos_, 7) == "@prefix") {
                for (int i = 0; i < 7; ++i) advance();
                parse_prefix(out);
                skip_ws();
                expect('.', "after @prefix directive");
                return true;
            }
            if (pos_ + 5 <= text_.size() && text_.substr(pos_, 5) == "@base") {
                for (int i = 0; i < 5; ++i) advance();
                parse_base();
                skip_ws();
                expect('.', "after @base directive");
                return true;
            }
            return false;  // could be a malformed directive; statement parse will fail with detail
        }
        size_t save_pos = pos_, save_line = line_, save_col = col_;
        if (match_keyword("PREFIX", true)) {
            // SPARQL-style prologue form, no trailing dot
            parse_prefix(out);
            return true;
        }
        pos_ = save_pos; line_ = save_line; col_ = save_col;
        if (match_keyword("BASE", true)) {
            parse_base();
            return true;
        }
        pos_ = save_pos; line_ = save_line; col_ = save_col;
        return false;
    }

    void parse_prefix(Ontology& out) {
        skip_ws();
        std::string name = lex_prefix_name();
        expect(':', "after prefix name");
        skip_ws();
        std::string ns = lex_iriref();
        out.prefixes[name] = ns;
    }

    void parse_base() {
        skip_ws();
        base_ = lex_iriref();
    }

    std::string lex_prefix_name() {
        std::string name;
        while (!at_end()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == '.' || static_cast<unsigned char>(c) >= 0x80) {
                name += advance();
            } else {
                break;
            }
        }
        return name;  // empty name is the default prefix ":"
    }

    // ---- statements ----

    void parse_statement(Ontology& out) {
        prefixes_ = &out.prefixes;
        sink_ = &out.triples;

        Term subject;
        char c = peek();
        if (c == '[') {
            subject = parse_blank_property_list();
            skip_ws();
            // a bare "[ ... ] ." statement is legal
            if (peek() == '.') {
                advance();
                return;
            }
        } else if (c == '(') {
            subject = parse_collection();
        } else {
            subject = parse_subject_term();
        }
        skip_ws();
        parse_predicate_object_list(subject);
        skip_ws();
        expect('.', "at end of statement");
    }

    Term parse_subject_term() {
        char c = peek();
        if (c == '<') return Term::iri(lex_iriref());
        if (c == '_' && peek(1) == ':') return lex_blank_label();
        // prefixed name
        return resolve_pname(lex_pname());
    }

    void parse_predicate_object_list(const Term& subject) {
        while (true) {
            skip_ws();
            Term predicate = parse_verb();
            parse_object_list(subject, predicate);
            skip_ws();
            if (peek() != ';') return;
            while (peek() == ';') {
                advance();
                skip_ws();
            }
            // trailing ';' before '.' or ']' is legal
            if (peek() == '.' || peek() == ']') return;
        }
    }

    Term parse_verb() {
        char c = peek();
        if (c == 'a') {
            char after = peek(1);
            if (after == ' ' || after == '\t' || after == '\r' || after == '\n' ||
                after == '<' || after == '[' || after == '_' || after == '"' || after == '\'') {
                advance();
                return Term::iri(std::string(vocab::RDF_TYPE));
            }
        }
        if (c == '<') return Term::iri(lex_iriref());
        Term t = resolve_pname(lex_pname());
        return t;
    }

    void parse_object_list(const Term& subject, const Term& predicate) {
        while (true) {
            skip_ws();
            Term object = parse_object();
            sink_->push_back(Triple{subject, predicate, object});
            skip_ws();
            if (peek() != ',') return;
            advance();
        }
    }

    Term parse_object() {
        char c = peek();
        if (c == '<') return Term::iri(lex_iriref());
        if (c == '[') return parse_blank_property_list();
        if (c == '(') return parse_collection();
        if (c == '_' && peek(1) == ':') return lex_blank_label();
        if (c == '"' || c == '\'') return lex_rdf_literal();
        if (c == '.' && !std::isdigit(static_cast<unsigned char>(peek(1))))
            fail("expected an object");
        if (c == '+' || c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c)))
            return lex_numeric();
        if (match_keyword("true")) return Term::literal("true", std::string(vocab::XSD_BOOLEAN));
        if (match_keyword("false")) return Term::literal("false", std::string(vocab::XSD_BOOLEAN));
        return resolve_pname(lex_pname());
    }

    Term parse_blank_property_list() {
        expect('[', "at blank node property list");
        Term node = fresh_anon();
        skip_ws();
        if (peek() == ']') {
            advance();
            return node;
        }
        parse_predicate_object_list(node);
        skip_ws();
        expect(']', "closing blank node property list");
        return node;
    }

    Term parse_collection() {
        expect('(', "at collection");
        std::vector<Term> items;
        while (true) {
            skip_ws();
            if (peek() == ')') {
                advance();
                break;
            }
            if (at_end()) fail("unterminated collection");
            items.push_back(parse_object());
        }
        if (items.empty()) return Term::iri(std::string(vocab::RDF_NIL));
        Term head = fresh_anon();
        Term cur = head;
        for (size_t i = 0; i < items.size(); ++i) {
            sink_->push_back(Triple{cur, Term::iri(std::string(vocab::RDF_FIRST)), items[i]});
            if (i + 1 < items.size()) {
                Term next = fresh_anon();
                sink_->push_back(Triple{cur, Term::iri(std::string(vocab::RDF_REST)), next});
                cur = next;
            } else {
                sink_->push_back(Triple{cur, Term::iri(std::string(vocab::RDF_REST)),
                                        Term::iri(std::string(vocab::RDF_NIL))});
            }
        }
        return head;
    }

    Term fresh_anon() { return Term::blank("anon" + std::to_string(next_anon_++)); }

    // ---- lexing ----

    std::string lex_iriref() {
        expect('<', "at IRI");
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated IRI");
            char c = advance();
            if (c == '>') break;
            if (c == '\\') {
                out += lex_escape(/*in_iri=*/true);
            } else if (c == ' ' || c == '\n' || c == '\t') {
                fail("whitespace inside IRI");
            } else {
                out += c;
            }
        }
        return resolve_iri(out);
    }

    std::string resolve_iri(const std::string& raw) {
        if (has_scheme(raw)) return raw;
        if (base_.empty()) fail("relative IRI <" + raw + "> without @base");
        // Simplified resolution: fragment-relative appends to the base with
        // its own fragment stripped; otherwise relative to the base's last '/'.
        if (!raw.empty() && raw[0] == '#') {
            auto hash = base_.find('#');
            return (hash == std::string::npos ? base_ : base_.substr(0, hash)) + raw;
        }
        if (base_.ends_with('/') || base_.ends_with('#')) return base_ + raw;
        auto slash = base_.find_last_of('/');
        if (slash != std::string::npos && slash > base_.find("://") + 2)
            return base_.substr(0, slash + 1) + raw;
        return base_ + "/" + raw;
    }

    Term lex_blank_label() {
        advance();  // _
        advance();  // :
        std::string label;
        while (!at_end()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == '.' || static_cast<unsigned char>(c) >= 0x80) {
                label += advance();
            } else {
                break;
            }
        }
        while (!label.empty() && label.back() == '.') {
            label.pop_back();
            step_back();
        }
        if (label.empty()) fail("empty blank node label");
        return Term::blank(label);
    }

    // Rewind one char (only used for trailing '.' handling; never across '\n').
    void step_back() {
        --pos_;
        --col_;
    }

    struct PName {
        std::string prefix;
        std::string local;
        size_t line;
        size_t col;
    };

    PName lex_pname() {
        PName pn{{}, {}, line_, col_};
        std::string first;
        while (!at_end()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == '.' || static_cast<unsigned char>(c) >= 0x80) {
                first += advance();
            } else if (c == '%' && std::isxdigit(static_cast<unsigned char>(peek(1))) &&
                       std::isxdigit(static_cast<unsigned char>(peek(2)))) {
                first += advance();
                first += advance();
                first += advance();
            } else if (c == '\\') {
                advance();
                if (at_end()) fail("dangling escape in name");
                first += advance();
            } else {
                break;
            }
        }
        if (peek() != ':') fail(first.empty() ? "expected a term" : "expected ':' in prefixed name '" + first + "'");
        advance();
        pn.prefix = first;
        std::string local;
        while (!at_end()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                c == '.' || static_cast<unsigned char>(c) >= 0x80) {
                local += advance();
            } else if (c == '%' && std::isxdigit(static_cast<unsigned char>(peek(1))) &&
                       std::isxdigit(static_cast<unsigned char>(peek(2)))) {
                local += advance();
                local += advance();
                local += advance();
            } else if (c == '\\') {
                advance();
                if (at_end()) fail("dangling escape in name");
                local += advance();
            } else {
                break;
            }
        }
        // PN_LOCAL may not end with '.', so trailing dots belong to the statement
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            step_back();
        }
        pn.local = local;
        return pn;
    }

    Term resolve_pname(const PName& pn) {
        auto it = prefixes_->find(pn.prefix);
        if (it == prefixes_->end())
            throw SyntaxError(pn.line, pn.col,
                              "undeclared prefix '" + pn.prefix + ":' in '" + pn.prefix + ":" + pn.local + "'");
        return Term::iri(it->second + pn.local);
    }

    std::string lex_escape(bool in_iri) {
        if (at_end()) fail("dangling escape");
        char c = advance();
        switch (c) {
            case 't': return "\t";
            case 'b': return "\b";
            case 'n': return "\n";
            case 'r': return "\r";
            case 'f': return "\f";
            case '"': return "\"";
            case '\'': return "'";
            case '\\': return "\\";
            case '>': return ">";
            case 'u': return encode_utf8(lex_hex(4));
            case 'U': return encode_utf8(lex_hex(8));
            default:
                if (in_iri) fail(std::string("invalid IRI escape '\\") + c + "'");
                fail(std::string("invalid string escape '\\") + c + "'");
        }
        return {};
    }

    unsigned lex_hex(int len) {
        unsigned v = 0;
        for (int i = 0; i < len; ++i) {
            if (at_end()) fail("truncated unicode escape");
            char c = advance();
            v <<= 4;
            if (c >= '0' && c <= '9') v |= static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned>(c - 'A' + 10);
            else fail("invalid unicode escape digit");
        }
        return v;
    }

    static std::string encode_utf8(unsigned code) {
        std::string out;
        if (code < 0x80) {
            out += static_cast<char>(code);
        } else if (code < 0x800) {
            out += static_cast<char>(0xc0 | (code >> 6));
            out += static_cast<char>(0x80 | (code & 0x3f));
        } else if (code < 0x10000) {
            out += static_cast<char>(0xe0 | (code >> 12));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3f));
            out += static_cast<char>(0x80 | (code & 0x3f));
        } else {
            out += static_cast<char>(0xf0 | (code >> 18));
            out += static_cast<char>(0x80 | ((code >> 12) & 0x3f));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3f));
            out += static_cast<char>(0x80 | (code & 0x3f));
        }
        return out;
    }

    Term lex_rdf_literal() {
        std::string lex = lex_string();
        if (peek() == '@') {
            advance();
            std::string tag;
            while (!at_end()) {
                char c = peek();
                if (std::isalnum(static_cast<unsigned char>(c)) || c == '-') tag += advance();
                else break;
            }
            if (tag.empty()) fail("empty language tag");
            return Term::literal(lex, std::string(vocab::RDF_LANG_STRING), tag);
        }
        if (peek() == '^' && peek(1) == '^') {
            advance();
            advance();
            Term dt = peek() == '<' ? Term::iri(lex_iriref()) : resolve_pname(lex_pname());
            return Term::literal(lex, dt.value);
        }
        return Term::string_literal(lex);
    }

    std::string lex_string() {
        char quote = advance();  // " or '
        bool long_form = false;
        if (peek() == quote && peek(1) == quote) {
            advance();
            advance();
            long_form = true;
        } else if (peek() == quote) {
            // empty short string
            advance();
            return {};
        }
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated string literal");
            char c = advance();
            if (c == '\\') {
                out += lex_escape(/*in_iri=*/false);
                continue;
            }
            if (c == quote) {
                if (!long_form) break;
                if (peek() == quote && peek(1) == quote) {
                    advance();
                    advance();
                    break;
                }
                out += c;
                continue;
            }
            if (!long_form && (c == '\n' || c == '\r')) fail("newline in single-line string");
            out += c;
        }
        return out;
    }

    Term lex_numeric() {
        std::string lex;
        size_t start_line = line_, start_col = col_;
        if (peek() == '+' || peek() == '-') lex += advance();
        bool digits_before = false, digits_after = false, has_dot = false, has_exp = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            lex += advance();
            digits_before = true;
        }
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            lex += advance();
            has_dot = true;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                lex += advance();
                digits_after = true;
            }
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            lex += advance();
            if (peek() == '+' || peek() == '-') lex += advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) lex += advance();
            has_exp = true;
        }
        if (!digits_before && !digits_after)
            throw SyntaxError(start_line, start_col, "malformed numeric literal");
        if (has_exp) return Term::literal(lex, std::string(vocab::XSD_DOUBLE));
        if (has_dot) return Term::literal(lex, std::string(vocab::XSD_DECIMAL));
        return Term::literal(lex, std::string(vocab::XSD_INTEGER));
    }

    // ---- header recovery ----

    void finish_header(Ontology& out) {
        std::vector<std::string> headers;
        for (const auto& t : out.triples) {
            if (t.predicate.value == vocab::RDF_TYPE && t.object.is_iri() &&
                t.object.value == vocab::OWL_ONTOLOGY && t.subject.is_iri())
                headers.push_back(t.subject.value);
        }
        if (headers.size() == 1) {
            out.ontology_iri = Iri(headers[0]);
        } else if (headers.size() > 1) {
            std::string msg = "MultipleOntologyHeaders:";
            for (const auto& h : headers) msg += " <" + h + ">";
            out.diagnostics.push_back(msg);
        }
    }
};

}  // namespace detail

/// Parse a UTF-8 Turtle document. Throws SyntaxError on malformed input.
/// ontology_iri is set iff exactly one owl:Ontology subject exists; more than
/// one yields a MultipleOntologyHeaders diagnostic instead.
inline Ontology parse_turtle(std::string_view text) {
    return detail::TurtleParser(text).parse();
}

}  // namespace ontodraft::rdf
