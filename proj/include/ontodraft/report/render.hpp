#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontodraft/eval/score.hpp"
#include "ontodraft/eval/superfluous.hpp"
#include "ontodraft/support/io.hpp"

namespace ontodraft::report {

struct RunSummary {
    std::string run_id;
    std::string case_id;
    std::string technique;
    std::string model_name;
    std::string mode;
    eval::Scores scores;
    std::map<std::string, int> pitfall_counts;
    eval::SuperfluousReport superfluous;
};

inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
    return buf;
}

inline std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline nlohmann::json to_json(const eval::KindStats& s) {
    nlohmann::json j;
    j["superfluous"] = s.superfluous;
    j["total"] = s.total;
    if (s.rate) j["rate"] = *s.rate;
    else j["rate"] = nullptr;
    return j;
}

inline nlohmann::json to_json(const RunSummary& s) {
    nlohmann::json j;
    j["run_id"] = s.run_id;
    j["case_id"] = s.case_id;
    j["technique"] = s.technique;
    j["model"] = s.model_name;
    j["mode"] = s.mode;
    j["scores"]["strict"] = s.scores.strict;
    j["scores"]["relaxed"] = s.scores.relaxed;
    j["scores"]["total"] = s.scores.total;
    j["scores"]["modelled"] = s.scores.modelled;
    j["scores"]["minor"] = s.scores.minor;
    j["scores"]["not_modelled"] = s.scores.not_modelled;
    j["scores"]["per_category"] = nlohmann::json::object();
    for (const auto& [name, c] : s.scores.per_category) {
        nlohmann::json cat;
        cat["strict"] = c.strict;
        cat["relaxed"] = c.relaxed;
        cat["n"] = c.n;
        cat["modelled"] = c.modelled;
        cat["minor"] = c.minor;
        j["scores"]["per_category"][name] = std::move(cat);
    }
    j["pitfall_counts"] = s.pitfall_counts;
    j["superfluous"]["classes"] = to_json(s.superfluous.classes);
    j["superfluous"]["object_properties"] = to_json(s.superfluous.object_properties);
    j["superfluous"]["data_properties"] = to_json(s.superfluous.data_properties);
    return j;
}

inline eval::KindStats kind_stats_from_json(const nlohmann::json& j) {
    eval::KindStats s;
    s.superfluous = j.at("superfluous").get<std::vector<std::string>>();
    s.total = j.at("total").get<size_t>();
    if (!j.at("rate").is_null()) s.rate = j.at("rate").get<double>();
    return s;
}

inline RunSummary summary_from_json(const nlohmann::json& j) {
    RunSummary s;
    s.run_id = j.at("run_id").get<std::string>();
    s.case_id = j.at("case_id").get<std::string>();
    s.technique = j.at("technique").get<std::string>();
    s.model_name = j.at("model").get<std::string>();
    s.mode = j.value("mode", "");
    s.scores.strict = j.at("scores").at("strict").get<double>();
    s.scores.relaxed = j.at("scores").at("relaxed").get<double>();
    s.scores.total = j.at("scores").at("total").get<size_t>();
    s.scores.modelled = j.at("scores").at("modelled").get<size_t>();
    s.scores.minor = j.at("scores").at("minor").get<size_t>();
    s.scores.not_modelled = j.at("scores").at("not_modelled").get<size_t>();
    if (j.at("scores").contains("per_category")) {
        for (const auto& [name, cat] : j.at("scores").at("per_category").items()) {
            eval::CategoryScore c;
            c.strict = cat.at("strict").get<double>();
            c.relaxed = cat.at("relaxed").get<double>();
            c.n = cat.at("n").get<size_t>();
            c.modelled = cat.at("modelled").get<size_t>();
            c.minor = cat.at("minor").get<size_t>();
            s.scores.per_category[name] = c;
        }
    }
    for (const auto& [code, count] : j.at("pitfall_counts").items())
        s.pitfall_counts[code] = count.get<int>();
    s.superfluous.classes = kind_stats_from_json(j.at("superfluous").at("classes"));
    s.superfluous.object_properties = kind_stats_from_json(j.at("superfluous").at("object_properties"));
    s.superfluous.data_properties = kind_stats_from_json(j.at("superfluous").at("data_properties"));
    return s;
}

namespace detail {

inline const std::vector<std::string>& pitfall_codes() {
    static const std::vector<std::string> codes = {"P05", "P06", "P19", "P29", "P37", "P39"};
    return codes;
}

}  // namespace detail

/// Three paper-shaped artifacts:
///  - pitfall count matrix, rows = codes, one column per (technique, model)
///    with counts summed across cases;
///  - superfluous-rate matrix, rows = (technique, model), columns =
///    kind x case, one-decimal percentages;
///  - per-run score data (strict and relaxed series) for charting.
/// Each is written as CSV plus a Markdown rendering of the two matrices.
inline void render_tables(const std::vector<RunSummary>& summaries,
                          const std::filesystem::path& out_dir) {
    if (summaries.empty()) throw eval::EmptyInputError("render_tables: no summaries");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    // ---- pitfall matrix ----
    std::vector<std::string> columns;  // "technique (model)" in first-seen order
    std::map<std::string, std::map<std::string, int>> pitfall_by_column;
    for (const auto& s : summaries) {
        std::string col = s.technique + " (" + s.model_name + ")";
        if (!pitfall_by_column.count(col)) columns.push_back(col);
        auto& cell = pitfall_by_column[col];
        for (const auto& code : detail::pitfall_codes()) {
            auto it = s.pitfall_counts.find(code);
            cell[code] += it == s.pitfall_counts.end() ? 0 : it->second;
        }
    }

    std::string csv = "code";
    for (const auto& col : columns) csv += "," + csv_field(col);
    csv += "\n";
    std::string md = "| code |";
    for (const auto& col : columns) md += " " + col + " |";
    md += "\n|---|";
    for (size_t i = 0; i < columns.size(); ++i) md += "---|";
    md += "\n";
    for (const auto& code : detail::pitfall_codes()) {
        csv += code;
        md += "| " + code + " |";
        for (const auto& col : columns) {
            int count = pitfall_by_column[col][code];
            csv += "," + std::to_string(count);
            md += " " + std::to_string(count) + " |";
        }
        csv += "\n";
        md += "\n";
    }
    support::write_text(out_dir / "report_pitfalls.csv", csv);
    support::write_text(out_dir / "report_pitfalls.md", md);

    // ---- superfluous-rate matrix ----
    std::set<std::string> case_ids;
    for (const auto& s : summaries) case_ids.insert(s.case_id);
    struct KindCol {
        const char* label;
        const eval::KindStats& (*get)(const eval::SuperfluousReport&);
    };
    static const KindCol kinds[3] = {
        {"classes", [](const eval::SuperfluousReport& r) -> const eval::KindStats& { return r.classes; }},
        {"object_properties",
         [](const eval::SuperfluousReport& r) -> const eval::KindStats& { return r.object_properties; }},
        {"data_properties",
         [](const eval::SuperfluousReport& r) -> const eval::KindStats& { return r.data_properties; }},
    };

    std::vector<std::string> rows;
    std::map<std::string, std::map<std::string, std::string>> cells;  // row -> column -> text
    for (const auto& s : summaries) {
        std::string row = s.technique + " (" + s.model_name + ")";
        if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
        for (const auto& k : kinds) {
            const auto& stats = k.get(s.superfluous);
            std::string col = std::string(k.label) + ":" + s.case_id;
            cells[row][col] = stats.rate ? format_percent(*stats.rate) : "-";
        }
    }
    std::vector<std::string> sup_cols;
    for (const auto& k : kinds)
        for (const auto& cid : case_ids) sup_cols.push_back(std::string(k.label) + ":" + cid);

    csv = "technique";
    md = "| technique |";
    for (const auto& col : sup_cols) {
        csv += "," + csv_field(col);
        md += " " + col + " |";
    }
    csv += "\n";
    md += "\n|---|";
    for (size_t i = 0; i < sup_cols.size(); ++i) md += "---|";
    md += "\n";
    for (const auto& row : rows) {
        csv += csv_field(row);
        md += "| " + row + " |";
        for (const auto& col : sup_cols) {
            auto it = cells[row].find(col);
            std::string text = it == cells[row].end() ? "" : it->second;
            csv += "," + text;
            md += " " + (text.empty() ? std::string("-") : text) + " |";
        }
        csv += "\n";
        md += "\n";
    }
    support::write_text(out_dir / "report_superfluous.csv", csv);
    support::write_text(out_dir / "report_superfluous.md", md);

    // ---- score series (strict + relaxed per run) ----
    csv = "run_id,case_id,technique,model,mode,n_cqs,strict,relaxed\n";
    for (const auto& s : summaries) {
        csv += csv_field(s.run_id) + "," + csv_field(s.case_id) + "," + csv_field(s.technique) +
               "," + csv_field(s.model_name) + "," + csv_field(s.mode) + "," +
               std::to_string(s.scores.total) + "," + format_full(s.scores.strict) + "," +
               format_full(s.scores.relaxed) + "\n";
    }
    support::write_text(out_dir / "report_scores.csv", csv);
}

}  // namespace ontodraft::report
