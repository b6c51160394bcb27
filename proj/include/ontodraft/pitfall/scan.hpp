#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/rdf/term.hpp"

namespace ontodraft::pitfall {

// Each rule is a decidable structural restatement of one critical pitfall:
//   P05 wrong inverse relationships      P06 cycles in a class hierarchy
//   P19 multiple domains or ranges       P29 wrong transitive relationship
//   P37 ontology not available           P39 ambiguous namespace
struct PitfallFinding {
    std::string code;
    std::vector<std::string> subjects;  // offending terms; may be empty for P37/P39
    std::string explanation;

    bool operator==(const PitfallFinding&) const = default;
};

namespace detail {

/// The object of the property's single rdfs:domain / rdfs:range triple, but
/// only when there is exactly one and it names a class.
inline std::optional<std::string> single_named_object(const rdf::Ontology& o,
                                                      const std::string& prop,
                                                      std::string_view pred) {
    std::optional<std::string> found;
    for (const auto& t : o.triples) {
        if (!t.subject.is_iri() || t.subject.value != prop || t.predicate.value != pred) continue;
        if (found) return std::nullopt;  // more than one
        if (!t.object.is_iri()) {
            found = std::string{};  // blank or literal: mark seen, disqualify below
            continue;
        }
        found = t.object.value;
    }
    if (found && found->empty()) return std::nullopt;
    return found;
}

inline std::set<std::string> typed_subjects(const rdf::Ontology& o, std::string_view type_iri) {
    std::set<std::string> out;
    for (const auto& t : o.triples)
        if (t.subject.is_iri() && t.predicate.value == rdf::vocab::RDF_TYPE && t.object.is_iri() &&
            t.object.value == type_iri)
            out.insert(t.subject.value);
    return out;
}

/// Iterative Tarjan over the subclass graph.
inline std::vector<std::vector<std::string>> strongly_connected_components(
    const rdf::SubclassGraph& g) {
    std::map<std::string, int> index, lowlink;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> sccs;
    int next_index = 0;

    struct Frame {
        std::string node;
        std::vector<std::string> succ;
        size_t next = 0;
    };

    for (const auto& root : g.nodes) {
        if (index.count(root)) continue;
        std::vector<Frame> frames;
        auto push_node = [&](const std::string& v) {
            index[v] = lowlink[v] = next_index++;
            stack.push_back(v);
            on_stack.insert(v);
            Frame f;
            f.node = v;
            auto it = g.edges.find(v);
            if (it != g.edges.end()) f.succ.assign(it->second.begin(), it->second.end());
            frames.push_back(std::move(f));
        };
        push_node(root);
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < f.succ.size()) {
                const std::string& w = f.succ[f.next++];
                if (!index.count(w)) {
                    push_node(w);
                } else if (on_stack.count(w)) {
                    lowlink[f.node] = std::min(lowlink[f.node], index[w]);
                }
            } else {
                if (lowlink[f.node] == index[f.node]) {
                    std::vector<std::string> comp;
                    while (true) {
                        std::string w = stack.back();
                        stack.pop_back();
                        on_stack.erase(w);
                        comp.push_back(w);
                        if (w == f.node) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    sccs.push_back(std::move(comp));
                }
                std::string done = f.node;
                frames.pop_back();
                if (!frames.empty())
                    lowlink[frames.back().node] =
                        std::min(lowlink[frames.back().node], lowlink[done]);
            }
        }
    }
    return sccs;
}

inline std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

}  // namespace detail

/// P19: a property with more than one distinct rdfs:domain or rdfs:range
/// object (named or blank). Duplicated identical statements collapse in the
/// triple set and do not count.
inline std::vector<PitfallFinding> detect_p19(const rdf::Ontology& o) {
    std::map<std::string, std::set<rdf::Term>> domains, ranges;
    for (const auto& t : o.triples) {
        if (!t.subject.is_iri()) continue;
        if (t.predicate.value == rdf::vocab::RDFS_DOMAIN) domains[t.subject.value].insert(t.object);
        else if (t.predicate.value == rdf::vocab::RDFS_RANGE) ranges[t.subject.value].insert(t.object);
    }
    std::set<std::string> props;
    for (const auto& [p, d] : domains)
        if (d.size() > 1) props.insert(p);
    for (const auto& [p, r] : ranges)
        if (r.size() > 1) props.insert(p);

    std::vector<PitfallFinding> out;
    for (const auto& p : props) {
        size_t nd = domains.count(p) ? domains[p].size() : 0;
        size_t nr = ranges.count(p) ? ranges[p].size() : 0;
        out.push_back({"P19",
                       {p},
                       "property declares " + std::to_string(nd) + " domain(s) and " +
                           std::to_string(nr) + " range(s); multiples are read as a conjunction"});
    }
    return out;
}

/// P06: one finding per strongly connected component of the subclass graph
/// with two or more classes, or per self-loop.
inline std::vector<PitfallFinding> detect_p06(const rdf::Ontology& o) {
    auto g = rdf::subclass_graph(o);
    std::vector<PitfallFinding> out;
    for (auto& comp : detail::strongly_connected_components(g)) {
        bool cyclic = comp.size() > 1 || (comp.size() == 1 && g.has_edge(comp[0], comp[0]));
        if (!cyclic) continue;
        out.push_back({"P06", comp, "subclass cycle: " + detail::join(comp, " -> ")});
    }
    std::sort(out.begin(), out.end(),
              [](const PitfallFinding& a, const PitfallFinding& b) { return a.subjects < b.subjects; });
    return out;
}

/// P05: a declared owl:inverseOf pair whose domain/range signatures are not
/// swapped. Pairs lacking single named domain/range declarations on either
/// side are skipped — insufficient evidence.
inline std::vector<PitfallFinding> detect_p05(const rdf::Ontology& o) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& t : o.triples) {
        if (t.predicate.value != rdf::vocab::OWL_INVERSE_OF) continue;
        if (!t.subject.is_iri() || !t.object.is_iri()) continue;
        std::string p = t.subject.value, q = t.object.value;
        pairs.insert(p <= q ? std::make_pair(p, q) : std::make_pair(q, p));
    }
    std::vector<PitfallFinding> out;
    for (const auto& [p, q] : pairs) {
        auto dp = detail::single_named_object(o, p, rdf::vocab::RDFS_DOMAIN);
        auto rp = detail::single_named_object(o, p, rdf::vocab::RDFS_RANGE);
        auto dq = detail::single_named_object(o, q, rdf::vocab::RDFS_DOMAIN);
        auto rq = detail::single_named_object(o, q, rdf::vocab::RDFS_RANGE);
        if (!dp || !rp || !dq || !rq) continue;
        if (*dp != *rq || *rp != *dq)
            out.push_back({"P05",
                           {p, q},
                           "declared inverses but domain/range are not swapped: <" + p + "> " +
                               *dp + " -> " + *rp + ", <" + q + "> " + *dq + " -> " + *rq});
    }
    return out;
}

/// P29: an owl:TransitiveProperty whose single named domain and range are
/// distinct classes with no subclass path between them, so the property can
/// never chain. Missing or multiple declarations are skipped.
inline std::vector<PitfallFinding> detect_p29(const rdf::Ontology& o) {
    auto g = rdf::subclass_graph(o);
    std::vector<PitfallFinding> out;
    for (const auto& p : detail::typed_subjects(o, rdf::vocab::OWL_TRANSITIVE_PROPERTY)) {
        auto d = detail::single_named_object(o, p, rdf::vocab::RDFS_DOMAIN);
        auto r = detail::single_named_object(o, p, rdf::vocab::RDFS_RANGE);
        if (!d || !r) continue;
        if (*d == *r) continue;
        if (g.reaches(*d, *r) || g.reaches(*r, *d)) continue;
        out.push_back({"P29",
                       {p},
                       "transitive property with unchainable domain <" + *d + "> and range <" +
                           *r + ">"});
    }
    return out;
}

/// P37 (offline proxy): no owl:Ontology header triple. The online dereference
/// check lives in pitfall/online.hpp.
inline std::vector<PitfallFinding> detect_p37(const rdf::Ontology& o) {
    if (!detail::typed_subjects(o, rdf::vocab::OWL_ONTOLOGY).empty()) return {};
    return {{"P37", {}, "no owl:Ontology header triple"}};
}

inline bool namespace_matches_header(const std::string& ns, const std::string& header_iri) {
    return ns == header_iri || ns == header_iri + "#" || ns == header_iri + "/";
}

/// P39: the ontology IRI is absent, or the majority namespace of locally
/// defined (typed) terms does not belong to it.
inline std::vector<PitfallFinding> detect_p39(const rdf::Ontology& o) {
    if (!o.ontology_iri)
        return {{"P39", {}, "no unambiguous ontology IRI declared"}};

    std::map<std::string, size_t> ns_counts;
    for (const auto& t : o.triples) {
        if (!t.subject.is_iri() || t.predicate.value != rdf::vocab::RDF_TYPE || !t.object.is_iri())
            continue;
        if (t.object.value == rdf::vocab::OWL_ONTOLOGY) continue;
        ns_counts[rdf::Iri(t.subject.value).namespace_part()] += 1;
    }
    if (ns_counts.empty()) return {};

    std::string majority;
    size_t best = 0;
    for (const auto& [ns, count] : ns_counts) {
        if (count > best) {  // ties resolve to the lexicographically first (map order)
            best = count;
            majority = ns;
        }
    }
    if (namespace_matches_header(majority, o.ontology_iri->value)) return {};
    return {{"P39",
             {},
             "majority of defined terms live under <" + majority + "> but the ontology IRI is <" +
                 o.ontology_iri->value + ">"}};
}

/// All six detectors, deterministic order (code, then first subject).
inline std::vector<PitfallFinding> scan(const rdf::Ontology& o) {
    std::vector<PitfallFinding> out;
    auto append = [&out](std::vector<PitfallFinding> findings) {
        out.insert(out.end(), findings.begin(), findings.end());
    };
    append(detect_p05(o));
    append(detect_p06(o));
    append(detect_p19(o));
    append(detect_p29(o));
    append(detect_p37(o));
    append(detect_p39(o));
    std::sort(out.begin(), out.end(), [](const PitfallFinding& a, const PitfallFinding& b) {
        if (a.code != b.code) return a.code < b.code;
        return a.subjects < b.subjects;
    });
    return out;
}

inline std::map<std::string, int> count_by_code(const std::vector<PitfallFinding>& findings) {
    std::map<std::string, int> counts;
    for (const auto& f : findings) ++counts[f.code];
    return counts;
}

}  // namespace ontodraft::pitfall
