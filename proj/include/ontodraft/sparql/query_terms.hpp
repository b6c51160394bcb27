#pragma once

#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/rdf/term.hpp"

namespace ontodraft::sparql {

struct QuerySyntaxError : std::runtime_error {
    size_t line;
    size_t column;
    QuerySyntaxError(size_t ln, size_t col, const std::string& msg)
        : std::runtime_error("query line " + std::to_string(ln) + ":" + std::to_string(col) + ": " + msg),
          line(ln),
          column(col) {}
};

/// The query mentions an IRI that is neither in the gold signature nor part of
/// the standard rdf/rdfs/owl/xsd vocabularies.
struct UnclassifiableTermError : std::runtime_error {
    std::string iri;
    explicit UnclassifiableTermError(const std::string& term)
        : std::runtime_error("query term not classifiable against gold signature: <" + term + ">"),
          iri(term) {}
};

struct RequiredTerm {
    std::string iri;
    rdf::ElementKind kind;

    bool operator==(const RequiredTerm&) const = default;
    auto operator<=>(const RequiredTerm&) const = default;
};

namespace detail {

// Syntactic walk over a SELECT/ASK query: collects every IRI mentioned in the
// group graph pattern (triple patterns, FILTER and BIND expressions alike).
// Not a SPARQL algebra parser by design.
class QueryScanner {
public:
    explicit QueryScanner(std::string_view text) : text_(text) {}

    std::set<std::string> scan() {
        skip_ws();
        parse_prologue();
        skip_ws();
        std::string form = lex_word();
        std::string upper = upcase(form);
        if (upper != "SELECT" && upper != "ASK")
            fail("expected SELECT or ASK, found '" + form + "'");
        // walk the rest of the query; IRIs are only collected inside braces
        size_t depth = 0;
        bool saw_group = false;
        while (!at_end()) {
            skip_ws();
            if (at_end()) break;
            char c = peek();
            if (c == '{') {
                advance();
                ++depth;
                saw_group = true;
            } else if (c == '}') {
                if (depth == 0) fail("unbalanced '}'");
                advance();
                --depth;
            } else {
                consume_token(depth > 0);
            }
        }
        if (depth != 0) fail("unbalanced '{'");
        if (!saw_group) fail("query has no group graph pattern");
        return iris_;
    }

private:
    std::string_view text_;
    size_t pos_ = 0;
    size_t line_ = 1;
    size_t col_ = 1;
    std::map<std::string, std::string> prefixes_;
    std::string base_;
    std::set<std::string> iris_;

    [[noreturn]] void fail(const std::string& msg) const { throw QuerySyntaxError(line_, col_, msg); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek(size_t off = 0) const { return pos_ + off < text_.size() ? text_[pos_ + off] : '\0'; }

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
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    static std::string upcase(std::string_view s) {
        std::string out;
        for (char c : s) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return out;
    }

    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
               static_cast<unsigned char>(c) >= 0x80;
    }

    std::string lex_word() {
        std::string w;
        while (!at_end() && name_char(peek())) w += advance();
        if (w.empty()) fail("expected a keyword");
        return w;
    }

    void parse_prologue() {
        while (true) {
            skip_ws();
            size_t save_pos = pos_, save_line = line_, save_col = col_;
            if (at_end()) return;
            if (!std::isalpha(static_cast<unsigned char>(peek()))) return;
            std::string word = upcase(lex_word());
            if (word == "PREFIX") {
                skip_ws();
                std::string name;
                while (!at_end() && peek() != ':' && !std::isspace(static_cast<unsigned char>(peek())))
                    name += advance();
                skip_ws();
                if (peek() != ':') fail("expected ':' in PREFIX declaration");
                advance();
                skip_ws();
                prefixes_[name] = lex_iriref();
            } else if (word == "BASE") {
                skip_ws();
                base_ = lex_iriref();
            } else {
                pos_ = save_pos;
                line_ = save_line;
                col_ = save_col;
                return;
            }
        }
    }

    std::string lex_iriref() {
        if (peek() != '<') fail("expected IRI");
        advance();
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated IRI");
            char c = advance();
            if (c == '>') break;
            if (std::isspace(static_cast<unsigned char>(c))) fail("whitespace inside IRI");
            out += c;
        }
        if (!rdf::has_scheme(out)) {
            if (base_.empty()) fail("relative IRI <" + out + "> without BASE");
            out = base_ + out;
        }
        return out;
    }

    // One token outside/inside a group. Inside a group, IRIs and prefixed
    // names are collected.
    void consume_token(bool collect) {
        char c = peek();
        if (c == '<') {
            // could be an IRI or a less-than in a FILTER expression
            size_t save_pos = pos_, save_line = line_, save_col = col_;
            bool is_iri = false;
            for (size_t i = pos_ + 1; i < text_.size(); ++i) {
                char x = text_[i];
                if (x == '>') {
                    is_iri = true;
                    break;
                }
                if (std::isspace(static_cast<unsigned char>(x)) || x == '{' || x == '}') break;
            }
            if (is_iri) {
                std::string iri = lex_iriref();
                if (collect) iris_.insert(iri);
            } else {
                pos_ = save_pos;
                line_ = save_line;
                col_ = save_col;
                advance();
            }
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string(c);
            return;
        }
        if (c == '?' || c == '$') {
            advance();
            while (!at_end() && name_char(peek())) advance();
            return;
        }
        if (c == '^' && peek(1) == '^') {
            advance();
            advance();
            return;  // the datatype itself arrives as the next token
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
            lex_word_or_pname(collect);
            return;
        }
        advance();  // punctuation, operators, digits
    }

    void lex_string(char quote) {
        advance();
        bool long_form = false;
        if (peek() == quote && peek(1) == quote) {
            advance();
            advance();
            long_form = true;
        } else if (peek() == quote) {
            advance();
            return;
        }
        while (true) {
            if (at_end()) fail("unterminated string literal");
            char c = advance();
            if (c == '\\') {
                if (at_end()) fail("dangling escape");
                advance();
                continue;
            }
            if (c == quote) {
                if (!long_form) return;
                if (peek() == quote && peek(1) == quote) {
                    advance();
                    advance();
                    return;
                }
            }
        }
    }

    void lex_word_or_pname(bool collect) {
        std::string first;
        while (!at_end() && (name_char(peek()) || peek() == '.')) {
            if (peek() == '.' && !name_char(peek(1))) break;  // statement dot
            first += advance();
        }
        if (peek() != ':') return;  // bare keyword or function name; ignore
        size_t colon_line = line_, colon_col = col_;
        advance();
        std::string local;
        while (!at_end() && (name_char(peek()) || peek() == '.' || peek() == '%')) {
            if (peek() == '.' && !name_char(peek(1))) break;
            local += advance();
        }
        auto it = prefixes_.find(first);
        if (it == prefixes_.end())
            throw QuerySyntaxError(colon_line, colon_col, "undeclared prefix '" + first + ":'");
        if (collect) iris_.insert(it->second + local);
    }
};

}  // namespace detail

/// Every IRI occurring in the query's graph pattern, classified by kind lookup
/// in the gold module's signature. Standard-vocabulary IRIs (rdf, rdfs, owl,
/// xsd) are excluded; anything else missing from the signature is an error.
inline std::vector<RequiredTerm> extract_required_terms(std::string_view query,
                                                        const rdf::Ontology& gold) {
    auto iris = detail::QueryScanner(query).scan();
    auto sig = rdf::signature(gold);
    std::vector<RequiredTerm> out;
    for (const auto& iri : iris) {
        if (rdf::vocab::is_reserved(iri)) continue;
        if (sig.classes.count(iri)) out.push_back({iri, rdf::ElementKind::Class});
        else if (sig.object_properties.count(iri)) out.push_back({iri, rdf::ElementKind::ObjectProperty});
        else if (sig.data_properties.count(iri)) out.push_back({iri, rdf::ElementKind::DataProperty});
        else throw UnclassifiableTermError(iri);
    }
    return out;  // sorted: iris is an ordered set
}

}  // namespace ontodraft::sparql
