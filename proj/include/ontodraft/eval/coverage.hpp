#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/sparql/query_terms.hpp"

namespace ontodraft::eval {

using AliasMap = std::map<std::string, std::set<std::string>>;  // gold IRI -> normalized names

/// Lexical normalization used for near-miss matching: lowercase and strip
/// '-' / '_' so hasAuthor, has_author and HASAUTHOR coincide.
inline std::string normalize_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (c == '-' || c == '_') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

enum class MatchMethod { exact, normalized, alias };

inline const char* to_string(MatchMethod m) {
    switch (m) {
        case MatchMethod::exact: return "exact";
        case MatchMethod::normalized: return "normalized";
        case MatchMethod::alias: return "alias";
    }
    return "?";
}

struct MatchEntry {
    sparql::RequiredTerm required;
    std::string matched_iri;  // candidate term
    MatchMethod method;
};

struct CoverageReport {
    std::string cq_id;
    std::vector<MatchEntry> matches;
    std::vector<sparql::RequiredTerm> missing;
    std::vector<std::string> notes;

    std::set<std::string> matched_candidate_terms() const {
        std::set<std::string> out;
        for (const auto& m : matches) out.insert(m.matched_iri);
        return out;
    }
};

/// Match each required term against the candidate signature: exact IRI, then
/// normalized local name, then alias map. Kinds are strict — an object
/// property never satisfies a data-property requirement or vice versa.
inline CoverageReport coverage(const rdf::Ontology& candidate, const std::string& cq_id,
                               const std::vector<sparql::RequiredTerm>& required,
                               const AliasMap& aliases = {}) {
    auto sig = rdf::signature(candidate);
    CoverageReport report;
    report.cq_id = cq_id;

    std::map<std::string, int> bindings;  // candidate term -> times used
    for (const auto& req : required) {
        const auto& pool = sig.of(req.kind);
        std::optional<MatchEntry> hit;

        if (pool.count(req.iri)) {
            hit = MatchEntry{req, req.iri, MatchMethod::exact};
        } else {
            std::string want = normalize_name(rdf::Iri(req.iri).local_name());
            for (const auto& c : pool) {  // set order -> deterministic first hit
                if (normalize_name(rdf::Iri(c).local_name()) == want) {
                    hit = MatchEntry{req, c, MatchMethod::normalized};
                    break;
                }
            }
            if (!hit) {
                auto al = aliases.find(req.iri);
                if (al != aliases.end()) {
                    for (const auto& c : pool) {
                        if (al->second.count(normalize_name(rdf::Iri(c).local_name()))) {
                            hit = MatchEntry{req, c, MatchMethod::alias};
                            break;
                        }
                    }
                }
            }
        }

        if (hit) {
            report.matches.push_back(*hit);
            ++bindings[hit->matched_iri];
        } else {
            report.missing.push_back(req);
        }
    }

    for (const auto& [term, uses] : bindings)
        if (uses > 1)
            report.notes.push_back("candidate term <" + term + "> satisfies " +
                                   std::to_string(uses) + " required terms");
    return report;
}

enum class CqStatus { Modelled, MinorIssue, NotModelled };

inline const char* to_string(CqStatus s) {
    switch (s) {
        case CqStatus::Modelled: return "Modelled";
        case CqStatus::MinorIssue: return "MinorIssue";
        case CqStatus::NotModelled: return "NotModelled";
    }
    return "?";
}

struct CqVerdict {
    std::string cq_id;
    CqStatus status = CqStatus::NotModelled;
    size_t missing_count = 0;
    std::vector<rdf::ElementKind> missing_kinds;
};

/// Modelled: nothing missing. MinorIssue: exactly one missing term and it is a
/// property (a missing class is never minor). Otherwise NotModelled.
inline CqVerdict classify(const CoverageReport& cr) {
    CqVerdict v;
    v.cq_id = cr.cq_id;
    v.missing_count = cr.missing.size();
    for (const auto& m : cr.missing) v.missing_kinds.push_back(m.kind);

    if (cr.missing.empty()) {
        v.status = CqStatus::Modelled;
    } else if (cr.missing.size() == 1 && (cr.missing[0].kind == rdf::ElementKind::ObjectProperty ||
                                          cr.missing[0].kind == rdf::ElementKind::DataProperty)) {
        v.status = CqStatus::MinorIssue;
    } else {
        v.status = CqStatus::NotModelled;
    }
    return v;
}

}  // namespace ontodraft::eval
