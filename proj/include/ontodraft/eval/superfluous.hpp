#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontodraft/eval/coverage.hpp"
#include "ontodraft/rdf/ontology.hpp"

namespace ontodraft::eval {

struct KindStats {
    std::vector<std::string> superfluous;  // sorted IRIs
    size_t total = 0;
    std::optional<double> rate;  // unset when total == 0

    size_t count() const { return superfluous.size(); }
};

struct SuperfluousReport {
    KindStats classes;
    KindStats object_properties;
    KindStats data_properties;

    const KindStats& of(rdf::ElementKind k) const {
        switch (k) {
            case rdf::ElementKind::Class: return classes;
            case rdf::ElementKind::ObjectProperty: return object_properties;
            case rdf::ElementKind::DataProperty: return data_properties;
        }
        return classes;
    }

    bool all_zero() const {
        return classes.superfluous.empty() && object_properties.superfluous.empty() &&
               data_properties.superfluous.empty();
    }
};

/// Union of matched candidate terms across coverage reports, organized as a
/// signature. This is the story-level "used" set.
inline rdf::Signature used_terms(const rdf::Ontology& candidate,
                                 const std::vector<CoverageReport>& reports) {
    auto sig = rdf::signature(candidate);
    rdf::Signature used;
    for (const auto& r : reports) {
        for (const auto& m : r.matches) {
            if (sig.classes.count(m.matched_iri)) used.classes.insert(m.matched_iri);
            if (sig.object_properties.count(m.matched_iri)) used.object_properties.insert(m.matched_iri);
            if (sig.data_properties.count(m.matched_iri)) used.data_properties.insert(m.matched_iri);
        }
    }
    return used;
}

/// Per kind: superfluous = signature(candidate) minus used; rate = count/total
/// (unset when that kind is empty in the candidate).
inline SuperfluousReport superfluous(const rdf::Ontology& candidate, const rdf::Signature& used) {
    auto sig = rdf::signature(candidate);
    SuperfluousReport report;
    auto fill = [](KindStats& stats, const std::set<std::string>& have,
                   const std::set<std::string>& used_set) {
        stats.total = have.size();
        for (const auto& iri : have)
            if (!used_set.count(iri)) stats.superfluous.push_back(iri);
        if (stats.total > 0)
            stats.rate = static_cast<double>(stats.superfluous.size()) / static_cast<double>(stats.total);
    };
    fill(report.classes, sig.classes, used.classes);
    fill(report.object_properties, sig.object_properties, used.object_properties);
    fill(report.data_properties, sig.data_properties, used.data_properties);
    return report;
}

/// Strip the candidate down to the terms matched for one CQ: every triple
/// whose subject, predicate or object is a removed named term is dropped, and
/// blank-node islands orphaned by those drops are pruned.
inline rdf::Ontology minimal_module(const rdf::Ontology& candidate, const CoverageReport& cr) {
    auto sig = rdf::signature(candidate);
    auto matched = cr.matched_candidate_terms();
    std::set<std::string> removed;
    for (const auto& iri : sig.all())
        if (!matched.count(iri)) removed.insert(iri);

    rdf::Ontology out;
    out.prefixes = candidate.prefixes;
    out.ontology_iri = candidate.ontology_iri;

    auto is_removed = [&](const rdf::Term& t) { return t.is_iri() && removed.count(t.value); };

    // blanks that were attached as objects in the original graph
    std::set<std::string> was_object;
    for (const auto& t : candidate.triples)
        if (t.object.is_blank()) was_object.insert(t.object.value);

    std::vector<rdf::Triple> kept;
    for (const auto& t : candidate.triples) {
        if (is_removed(t.subject) || is_removed(t.predicate) || is_removed(t.object)) continue;
        kept.push_back(t);
    }

    // prune blank subtrees whose attachment edge was dropped
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::string> still_object;
        for (const auto& t : kept)
            if (t.object.is_blank()) still_object.insert(t.object.value);
        std::vector<rdf::Triple> next;
        for (const auto& t : kept) {
            if (t.subject.is_blank() && was_object.count(t.subject.value) &&
                !still_object.count(t.subject.value)) {
                changed = true;
                continue;
            }
            next.push_back(t);
        }
        kept.swap(next);
    }

    out.triples = std::move(kept);
    out.normalize();
    return out;
}

}  // namespace ontodraft::eval
