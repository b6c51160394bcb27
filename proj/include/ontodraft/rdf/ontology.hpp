#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontodraft/rdf/term.hpp"

namespace ontodraft::rdf {

/// A parsed ontology: a deduplicated, sorted triple set plus the prefix map
/// and optional ontology IRI recovered from the source document. Immutable by
/// convention after construction; every operation below is a pure function.
struct Ontology {
    std::vector<Triple> triples;  // sorted, unique
    std::map<std::string, std::string> prefixes;  // short name -> namespace IRI
    std::optional<Iri> ontology_iri;
    std::vector<std::string> diagnostics;

    bool empty() const { return triples.empty(); }
    size_t size() const { return triples.size(); }

    bool contains(const Triple& t) const {
        return std::binary_search(triples.begin(), triples.end(), t);
    }

    /// Sort + dedupe; call after bulk insertion.
    void normalize() {
        std::sort(triples.begin(), triples.end());
        triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    }

    void add(Triple t) {
        auto it = std::lower_bound(triples.begin(), triples.end(), t);
        if (it == triples.end() || !(*it == t)) triples.insert(it, std::move(t));
    }
};

inline bool triple_set_equal(const Ontology& a, const Ontology& b) {
    return a.triples == b.triples;
}

enum class ElementKind { Class, ObjectProperty, DataProperty };

inline const char* to_string(ElementKind k) {
    switch (k) {
        case ElementKind::Class: return "class";
        case ElementKind::ObjectProperty: return "object_property";
        case ElementKind::DataProperty: return "data_property";
    }
    return "?";
}

inline std::optional<ElementKind> element_kind_from_string(std::string_view s) {
    if (s == "class") return ElementKind::Class;
    if (s == "object_property") return ElementKind::ObjectProperty;
    if (s == "data_property") return ElementKind::DataProperty;
    return std::nullopt;
}

/// Named classes, object properties and data properties of an ontology.
struct Signature {
    std::set<std::string> classes;
    std::set<std::string> object_properties;
    std::set<std::string> data_properties;
    std::vector<std::string> dual_typed;  // typed both Object- and DatatypeProperty

    bool empty() const {
        return classes.empty() && object_properties.empty() && data_properties.empty();
    }

    const std::set<std::string>& of(ElementKind k) const {
        switch (k) {
            case ElementKind::Class: return classes;
            case ElementKind::ObjectProperty: return object_properties;
            case ElementKind::DataProperty: return data_properties;
        }
        return classes;
    }

    std::set<std::string>& of(ElementKind k) {
        switch (k) {
            case ElementKind::Class: return classes;
            case ElementKind::ObjectProperty: return object_properties;
            case ElementKind::DataProperty: return data_properties;
        }
        return classes;
    }

    bool contains(const std::string& iri) const {
        return classes.count(iri) || object_properties.count(iri) || data_properties.count(iri);
    }

    std::set<std::string> all() const {
        std::set<std::string> out = classes;
        out.insert(object_properties.begin(), object_properties.end());
        out.insert(data_properties.begin(), data_properties.end());
        return out;
    }
};

/// Signature extraction. Classes are explicit owl:Class/rdfs:Class subjects,
/// named rdfs:subClassOf endpoints, named rdfs:domain objects, and named
/// rdfs:range objects of typed object properties. Inferred (untyped) class
/// endpoints from the reserved rdf/rdfs/owl/xsd vocabularies are skipped.
inline Signature signature(const Ontology& o) {
    Signature sig;
    // properties first so range endpoints can be kind-checked
    for (const auto& t : o.triples) {
        if (!t.subject.is_iri() || t.predicate.value != vocab::RDF_TYPE || !t.object.is_iri())
            continue;
        if (t.object.value == vocab::OWL_OBJECT_PROPERTY)
            sig.object_properties.insert(t.subject.value);
        else if (t.object.value == vocab::OWL_DATATYPE_PROPERTY)
            sig.data_properties.insert(t.subject.value);
    }
    for (const auto& p : sig.object_properties)
        if (sig.data_properties.count(p)) sig.dual_typed.push_back(p);

    for (const auto& t : o.triples) {
        const auto& p = t.predicate.value;
        if (p == vocab::RDF_TYPE && t.subject.is_iri() && t.object.is_iri()) {
            if (t.object.value == vocab::OWL_CLASS || t.object.value == vocab::RDFS_CLASS)
                sig.classes.insert(t.subject.value);
        } else if (p == vocab::RDFS_SUBCLASSOF) {
            if (t.subject.is_iri() && !vocab::is_reserved(t.subject.value))
                sig.classes.insert(t.subject.value);
            if (t.object.is_iri() && !vocab::is_reserved(t.object.value))
                sig.classes.insert(t.object.value);
        } else if (p == vocab::RDFS_DOMAIN) {
            if (t.object.is_iri() && !vocab::is_reserved(t.object.value))
                sig.classes.insert(t.object.value);
        } else if (p == vocab::RDFS_RANGE) {
            if (t.object.is_iri() && !vocab::is_reserved(t.object.value) &&
                t.subject.is_iri() && sig.object_properties.count(t.subject.value))
                sig.classes.insert(t.object.value);
        }
    }
    return sig;
}

/// Directed graph over named classes: edge A -> B iff (A rdfs:subClassOf B)
/// with both endpoints named. Blank-node superclasses never contribute edges.
struct SubclassGraph {
    std::set<std::string> nodes;
    std::map<std::string, std::set<std::string>> edges;  // from -> direct supers

    bool has_edge(const std::string& from, const std::string& to) const {
        auto it = edges.find(from);
        return it != edges.end() && it->second.count(to);
    }

    /// from ⊑* to (reflexive-transitive closure walk).
    bool reaches(const std::string& from, const std::string& to) const {
        if (from == to) return true;
        std::set<std::string> seen;
        std::vector<const std::string*> stack{&from};
        while (!stack.empty()) {
            const std::string& cur = *stack.back();
            stack.pop_back();
            auto it = edges.find(cur);
            if (it == edges.end()) continue;
            for (const auto& next : it->second) {
                if (next == to) return true;
                if (seen.insert(next).second) stack.push_back(&next);
            }
        }
        return false;
    }
};

inline SubclassGraph subclass_graph(const Ontology& o) {
    SubclassGraph g;
    g.nodes = signature(o).classes;
    for (const auto& t : o.triples) {
        if (t.predicate.value != vocab::RDFS_SUBCLASSOF) continue;
        if (!t.subject.is_iri() || !t.object.is_iri()) continue;
        g.edges[t.subject.value].insert(t.object.value);
        g.nodes.insert(t.subject.value);
        g.nodes.insert(t.object.value);
    }
    return g;
}

inline std::set<std::string> blank_ids(const Ontology& o) {
    std::set<std::string> ids;
    for (const auto& t : o.triples) {
        if (t.subject.is_blank()) ids.insert(t.subject.value);
        if (t.object.is_blank()) ids.insert(t.object.value);
    }
    return ids;
}

/// Rewrite every blank node id to id + suffix. Used by the pipeline to keep
/// blank nodes of independently generated partial solutions apart.
inline Ontology rename_blanks_with_suffix(const Ontology& o, const std::string& suffix) {
    Ontology out = o;
    for (auto& t : out.triples) {
        if (t.subject.is_blank()) t.subject.value += suffix;
        if (t.object.is_blank()) t.object.value += suffix;
    }
    out.normalize();
    return out;
}

/// Triple-set union. Prefix maps are united; on a short-name collision with a
/// different namespace, b's prefix gets a numeric suffix. Blank ids shared by
/// both inputs are renamed apart in b, except when the inputs are
/// triple-identical (merge(O, O) must equal O). ontology_iri prefers a's.
inline Ontology merge(const Ontology& a, const Ontology& b) {
    Ontology out = a;

    for (const auto& [name, ns] : b.prefixes) {
        auto it = out.prefixes.find(name);
        if (it == out.prefixes.end()) {
            out.prefixes.emplace(name, ns);
        } else if (it->second != ns) {
            int k = 2;
            while (out.prefixes.count(name + std::to_string(k))) ++k;
            out.prefixes.emplace(name + std::to_string(k), ns);
        }
    }
    if (!out.ontology_iri) out.ontology_iri = b.ontology_iri;
    for (const auto& d : b.diagnostics)
        if (std::find(out.diagnostics.begin(), out.diagnostics.end(), d) == out.diagnostics.end())
            out.diagnostics.push_back(d);

    if (a.triples == b.triples) return out;  // same graph, nothing to rename

    auto a_ids = blank_ids(a);
    auto b_ids = blank_ids(b);
    std::map<std::string, std::string> rename;
    for (const auto& id : b_ids) {
        if (!a_ids.count(id)) continue;
        int k = 2;
        std::string fresh;
        do {
            fresh = id + "_" + std::to_string(k++);
        } while (a_ids.count(fresh) || b_ids.count(fresh));
        rename[id] = fresh;
    }

    for (const auto& t : b.triples) {
        Triple copy = t;
        if (copy.subject.is_blank()) {
            auto it = rename.find(copy.subject.value);
            if (it != rename.end()) copy.subject.value = it->second;
        }
        if (copy.object.is_blank()) {
            auto it = rename.find(copy.object.value);
            if (it != rename.end()) copy.object.value = it->second;
        }
        out.triples.push_back(std::move(copy));
    }
    out.normalize();
    return out;
}

}  // namespace ontodraft::rdf
