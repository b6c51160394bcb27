#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontodraft/eval/coverage.hpp"
#include "ontodraft/eval/superfluous.hpp"
#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/rdf/turtle_parser.hpp"
#include "ontodraft/sparql/query_terms.hpp"
#include "ontodraft/support/io.hpp"

namespace ontodraft::dataset {

struct CaseError : std::runtime_error {
    enum class Kind { missing_file, duplicate, dangling_reference, format };
    Kind kind;
    CaseError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}

    static CaseError missing_file(const std::string& path) {
        return {Kind::missing_file, "missing file: " + path};
    }
};

enum class CqCategory { DataProperty, ObjectProperty, Reification, Restriction };

inline const char* to_string(CqCategory c) {
    switch (c) {
        case CqCategory::DataProperty: return "DataProperty";
        case CqCategory::ObjectProperty: return "ObjectProperty";
        case CqCategory::Reification: return "Reification";
        case CqCategory::Restriction: return "Restriction";
    }
    return "?";
}

inline std::optional<CqCategory> category_from_string(std::string_view s) {
    if (s == "DataProperty") return CqCategory::DataProperty;
    if (s == "ObjectProperty") return CqCategory::ObjectProperty;
    if (s == "Reification") return CqCategory::Reification;
    if (s == "Restriction") return CqCategory::Restriction;
    return std::nullopt;
}

struct UserStory {
    std::string id;
    std::string text;
};

struct CompetencyQuestion {
    std::string id;
    std::string text;
    CqCategory category = CqCategory::ObjectProperty;
    bool goldless = false;  // generation-only CQ, explicitly marked in the manifest
};

struct GoldEntry {
    std::string cq_id;
    rdf::Ontology gold_module;
    std::string validation_query;
    std::vector<sparql::RequiredTerm> required_terms;
};

/// One evaluation unit: a story, its ordered CQs, per-CQ gold modules and
/// validation queries, and the optional alias map. Immutable after loading.
struct Case {
    std::string id;
    UserStory story;
    std::vector<CompetencyQuestion> cqs;
    std::map<std::string, GoldEntry> gold;  // cq id -> entry
    eval::AliasMap aliases;

    const CompetencyQuestion* find_cq(const std::string& cq_id) const {
        for (const auto& cq : cqs)
            if (cq.id == cq_id) return &cq;
        return nullptr;
    }

    std::map<std::string, std::string> categories() const {
        std::map<std::string, std::string> out;
        for (const auto& cq : cqs) out[cq.id] = to_string(cq.category);
        return out;
    }
};

namespace detail {

// manifest.yaml reader. Deliberately minimal: top-level "key: value" scalars
// plus one "cqs:" list of flat maps, double/single-quoted or bare scalars,
// '#' comments. That is the whole documented schema.
struct ManifestCq {
    std::string id, text, category, gold, query;
    bool goldless = false;
    size_t line = 0;
};

struct Manifest {
    std::string id, story;
    std::vector<ManifestCq> cqs;
};

inline std::string strip(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] inline void manifest_fail(size_t line, const std::string& msg) {
    throw CaseError(CaseError::Kind::format, "manifest.yaml:" + std::to_string(line) + ": " + msg);
}

inline std::string parse_scalar(const std::string& raw, size_t line_no) {
    std::string v = strip(raw);
    if (v.empty()) return v;
    if (v.front() == '"' || v.front() == '\'') {
        char q = v.front();
        std::string out;
        size_t i = 1;
        for (; i < v.size(); ++i) {
            if (v[i] == '\\' && q == '"' && i + 1 < v.size()) {
                out += v[++i];
            } else if (v[i] == q) {
                break;
            } else {
                out += v[i];
            }
        }
        if (i >= v.size()) manifest_fail(line_no, "unterminated quoted scalar");
        std::string rest = strip(v.substr(i + 1));
        if (!rest.empty() && rest[0] != '#') manifest_fail(line_no, "garbage after quoted scalar");
        return out;
    }
    auto hash = v.find(" #");
    if (hash != std::string::npos) v = strip(v.substr(0, hash));
    return v;
}

inline Manifest parse_manifest(const std::string& text) {
    Manifest m;
    bool in_cqs = false;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string stripped = strip(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (line.find('\t') != std::string::npos) manifest_fail(line_no, "tabs are not allowed");
        size_t indent = line.find_first_not_of(' ');

        if (indent == 0) {
            in_cqs = false;
            auto colon = stripped.find(':');
            if (colon == std::string::npos) manifest_fail(line_no, "expected 'key: value'");
            std::string key = strip(stripped.substr(0, colon));
            std::string value = stripped.substr(colon + 1);
            if (key == "id") m.id = parse_scalar(value, line_no);
            else if (key == "story") m.story = parse_scalar(value, line_no);
            else if (key == "cqs") {
                if (!strip(value).empty()) manifest_fail(line_no, "'cqs:' must start a list");
                in_cqs = true;
            } else manifest_fail(line_no, "unknown key '" + key + "'");
            continue;
        }

        if (!in_cqs) manifest_fail(line_no, "unexpected indented line");
        std::string body = stripped;
        if (body.rfind("- ", 0) == 0) {
            m.cqs.push_back({});
            m.cqs.back().line = line_no;
            body = strip(body.substr(2));
            if (body.empty()) continue;
        } else if (m.cqs.empty()) {
            manifest_fail(line_no, "list item must start with '- '");
        }

        auto colon = body.find(':');
        if (colon == std::string::npos) manifest_fail(line_no, "expected 'key: value'");
        std::string key = strip(body.substr(0, colon));
        std::string value = parse_scalar(body.substr(colon + 1), line_no);
        ManifestCq& cq = m.cqs.back();
        if (key == "id") cq.id = value;
        else if (key == "text") cq.text = value;
        else if (key == "category") cq.category = value;
        else if (key == "gold") cq.gold = value;
        else if (key == "query") cq.query = value;
        else if (key == "goldless") {
            if (value != "true" && value != "false")
                manifest_fail(line_no, "goldless must be true or false");
            cq.goldless = value == "true";
        } else manifest_fail(line_no, "unknown cq key '" + key + "'");
    }
    return m;
}

inline eval::AliasMap parse_aliases(const std::string& text, const std::string& path) {
    eval::AliasMap out;
    size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        std::string stripped = strip(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw CaseError(CaseError::Kind::format,
                            path + ":" + std::to_string(line_no) + ": expected '<iri>\\t<aliases>'");
        std::string iri = strip(line.substr(0, tab));
        std::string names = line.substr(tab + 1);
        size_t start = 0;
        while (start <= names.size()) {
            size_t comma = names.find(',', start);
            std::string alias =
                strip(names.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (!alias.empty()) out[iri].insert(eval::normalize_name(alias));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

}  // namespace detail

/// Load a case directory:
///   manifest.yaml, story.txt, gold/<cq>.ttl, queries/<cq>.rq, aliases.tsv?
/// Gold modules are parsed and required terms computed from their validation
/// queries on the spot, so a returned Case is fully resolved.
inline Case load_case(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw CaseError::missing_file(dir.string() + " (not a directory)");

    auto manifest_text = support::try_read_text(dir / "manifest.yaml");
    if (!manifest_text) throw CaseError::missing_file((dir / "manifest.yaml").string());
    auto manifest = detail::parse_manifest(*manifest_text);

    Case out;
    out.id = manifest.id.empty() ? dir.filename().string() : manifest.id;

    std::string story_file = manifest.story.empty() ? "story.txt" : manifest.story;
    auto story_text = support::try_read_text(dir / story_file);
    if (!story_text) throw CaseError::missing_file((dir / story_file).string());
    out.story = UserStory{out.id, *story_text};

    std::set<std::string> seen_ids;
    for (const auto& mcq : manifest.cqs) {
        if (mcq.id.empty())
            throw CaseError(CaseError::Kind::format,
                            "manifest.yaml:" + std::to_string(mcq.line) + ": cq without id");
        if (!seen_ids.insert(mcq.id).second)
            throw CaseError(CaseError::Kind::duplicate, "duplicate cq id '" + mcq.id + "'");

        CompetencyQuestion cq;
        cq.id = mcq.id;
        cq.text = mcq.text;
        cq.goldless = mcq.goldless;
        auto cat = category_from_string(mcq.category);
        if (!cat)
            throw CaseError(CaseError::Kind::format,
                            "cq '" + mcq.id + "': unknown category '" + mcq.category + "'");
        cq.category = *cat;
        out.cqs.push_back(cq);

        if (mcq.goldless) {
            if (!mcq.gold.empty() || !mcq.query.empty())
                throw CaseError(CaseError::Kind::format,
                                "cq '" + mcq.id + "' is goldless but names gold/query files");
            continue;
        }
        std::string gold_rel = mcq.gold.empty() ? "gold/" + mcq.id + ".ttl" : mcq.gold;
        std::string query_rel = mcq.query.empty() ? "queries/" + mcq.id + ".rq" : mcq.query;

        auto gold_text = support::try_read_text(dir / gold_rel);
        if (!gold_text) throw CaseError::missing_file((dir / gold_rel).string());
        auto query_text = support::try_read_text(dir / query_rel);
        if (!query_text) throw CaseError::missing_file((dir / query_rel).string());

        GoldEntry entry;
        entry.cq_id = mcq.id;
        try {
            entry.gold_module = rdf::parse_turtle(*gold_text);
        } catch (const rdf::SyntaxError& e) {
            throw rdf::SyntaxError(e.line, e.column, (dir / gold_rel).string() + ": " + e.what());
        }
        entry.validation_query = *query_text;
        try {
            entry.required_terms = sparql::extract_required_terms(*query_text, entry.gold_module);
        } catch (const sparql::QuerySyntaxError& e) {
            throw sparql::QuerySyntaxError(e.line, e.column,
                                           (dir / query_rel).string() + ": " + e.what());
        }
        out.gold.emplace(mcq.id, std::move(entry));
    }

    auto alias_text = support::try_read_text(dir / "aliases.tsv");
    if (alias_text) out.aliases = detail::parse_aliases(*alias_text, (dir / "aliases.tsv").string());
    return out;
}

/// Mechanical cross-checks: non-empty texts, minimal gold modules (zero
/// superfluous elements w.r.t. their own validation query), clean typing,
/// alias keys that resolve. Diagnostics, not failures.
inline std::vector<std::string> validate_case(const Case& c) {
    std::vector<std::string> diags;
    if (detail::strip(c.story.text).empty()) diags.push_back("story text is empty");

    std::set<std::string> gold_terms;
    for (const auto& cq : c.cqs) {
        if (detail::strip(cq.text).empty()) diags.push_back("cq '" + cq.id + "' has empty text");
        if (cq.goldless) continue;
        auto it = c.gold.find(cq.id);
        if (it == c.gold.end()) {
            diags.push_back("cq '" + cq.id + "' has no gold entry");
            continue;
        }
        const GoldEntry& entry = it->second;
        if (entry.required_terms.empty())
            diags.push_back("validation query for '" + cq.id + "' uses no gold terms");

        auto sig = rdf::signature(entry.gold_module);
        for (const auto& dual : sig.dual_typed)
            diags.push_back("gold module for '" + cq.id +
                            "' types a term as both object and data property: <" + dual + ">");
        for (const auto& iri : sig.all()) gold_terms.insert(iri);

        rdf::Signature used;
        for (const auto& req : entry.required_terms) used.of(req.kind).insert(req.iri);
        auto report = eval::superfluous(entry.gold_module, used);
        auto complain = [&](const eval::KindStats& stats, const char* kind) {
            if (stats.superfluous.empty()) return;
            std::string msg = "gold not minimal (" + cq.id + "): " +
                              std::to_string(stats.superfluous.size()) + " superfluous " + kind;
            for (const auto& iri : stats.superfluous) msg += " <" + iri + ">";
            diags.push_back(msg);
        };
        complain(report.classes, "class(es)");
        complain(report.object_properties, "object propert(ies)");
        complain(report.data_properties, "data propert(ies)");
    }

    for (const auto& [iri, names] : c.aliases)
        if (!gold_terms.count(iri))
            diags.push_back("alias entry for <" + iri + "> does not match any gold term");
    return diags;
}

}  // namespace ontodraft::dataset
