#pragma once

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ontodraft/dataset/case.hpp"
#include "ontodraft/eval/coverage.hpp"
#include "ontodraft/eval/kappa.hpp"
#include "ontodraft/eval/score.hpp"
#include "ontodraft/eval/superfluous.hpp"
#include "ontodraft/llm/gateway.hpp"
#include "ontodraft/pipeline/run.hpp"
#include "ontodraft/pitfall/online.hpp"
#include "ontodraft/pitfall/scan.hpp"
#include "ontodraft/prompt/prompt.hpp"
#include "ontodraft/report/render.hpp"
#include "ontodraft/support/io.hpp"

namespace ontodraft::cli {

// Stable exit codes: 0 success (per-CQ failures included), 2 bad arguments or
// overwrite refusal, 3 case/input errors, 4 config or auth errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCase = 3;
inline constexpr int kExitConfig = 4;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    bool force = false;
    bool online_p37 = false;
};

namespace detail {

inline bool refuse_overwrite(const std::filesystem::path& dir, bool force, std::ostream& err) {
    namespace fs = std::filesystem;
    if (fs::exists(dir) && fs::is_directory(dir) && !fs::is_empty(dir) && !force) {
        err << "error: output directory exists, pass --force to overwrite: " << dir.string()
            << "\n";
        return true;
    }
    return false;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

// Minimal CSV line splitter with double-quote support.
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // drop
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

struct EvalArtifacts {
    std::vector<eval::CoverageReport> reports;
    std::vector<eval::CqVerdict> verdicts;
    eval::Scores scores;
    eval::SuperfluousReport superfluous;
    std::vector<pitfall::PitfallFinding> findings;
    std::vector<std::string> notes;
};

inline EvalArtifacts evaluate_candidate(const rdf::Ontology& candidate, const dataset::Case& c,
                                        bool online_p37) {
    EvalArtifacts a;
    for (const auto& cq : c.cqs) {
        auto it = c.gold.find(cq.id);
        if (it == c.gold.end()) continue;
        auto report = eval::coverage(candidate, cq.id, it->second.required_terms, c.aliases);
        a.verdicts.push_back(eval::classify(report));
        a.reports.push_back(std::move(report));
    }
    a.scores = eval::score(a.verdicts, c.categories());
    a.superfluous = eval::superfluous(candidate, eval::used_terms(candidate, a.reports));
    a.findings = pitfall::scan(candidate);
    if (online_p37) {
        auto online = pitfall::check_p37_online(candidate);
        if (online.finding) a.findings.push_back(*online.finding);
        if (!online.note.empty()) a.notes.push_back(online.note);
    }
    return a;
}

inline std::string findings_csv(const std::vector<pitfall::PitfallFinding>& findings) {
    std::string csv = "code,subject,explanation\n";
    for (const auto& f : findings)
        csv += f.code + "," + report::csv_field(join(f.subjects, ";")) + "," +
               report::csv_field(f.explanation) + "\n";
    return csv;
}

inline void write_eval_files(const EvalArtifacts& a, const report::RunSummary& summary,
                             const std::filesystem::path& dir) {
    std::string coverage_csv = "cq_id,required_iri,kind,matched_iri,method\n";
    for (const auto& r : a.reports) {
        for (const auto& m : r.matches)
            coverage_csv += r.cq_id + "," + report::csv_field(m.required.iri) + "," +
                            rdf::to_string(m.required.kind) + "," +
                            report::csv_field(m.matched_iri) + "," + eval::to_string(m.method) +
                            "\n";
        for (const auto& miss : r.missing)
            coverage_csv += r.cq_id + "," + report::csv_field(miss.iri) + "," +
                            rdf::to_string(miss.kind) + ",,missing\n";
    }
    support::write_text(dir / "coverage.csv", coverage_csv);

    std::string verdicts_csv = "cq_id,status,missing_count,missing_kinds\n";
    for (const auto& v : a.verdicts) {
        std::vector<std::string> kinds;
        for (auto k : v.missing_kinds) kinds.push_back(rdf::to_string(k));
        verdicts_csv += v.cq_id + "," + eval::to_string(v.status) + "," +
                        std::to_string(v.missing_count) + "," +
                        report::csv_field(join(kinds, ";")) + "\n";
    }
    support::write_text(dir / "verdicts.csv", verdicts_csv);

    std::string scores_csv = "strict,relaxed,total,modelled,minor,not_modelled\n";
    scores_csv += report::format_full(a.scores.strict) + "," +
                  report::format_full(a.scores.relaxed) + "," + std::to_string(a.scores.total) +
                  "," + std::to_string(a.scores.modelled) + "," + std::to_string(a.scores.minor) +
                  "," + std::to_string(a.scores.not_modelled) + "\n";
    support::write_text(dir / "scores.csv", scores_csv);

    std::string sup_csv = "kind,superfluous,total,rate,terms\n";
    auto sup_row = [&](const char* kind, const eval::KindStats& s) {
        sup_csv += std::string(kind) + "," + std::to_string(s.superfluous.size()) + "," +
                   std::to_string(s.total) + "," + (s.rate ? report::format_full(*s.rate) : "") +
                   "," + report::csv_field(join(s.superfluous, ";")) + "\n";
    };
    sup_row("class", summary.superfluous.classes);
    sup_row("object_property", summary.superfluous.object_properties);
    sup_row("data_property", summary.superfluous.data_properties);
    support::write_text(dir / "superfluous.csv", sup_csv);

    support::write_text(dir / "pitfalls.csv", findings_csv(a.findings));
    if (!a.notes.empty()) support::write_text(dir / "notes.txt", join(a.notes, "\n") + "\n");
    support::write_text(dir / "summary.json", report::to_json(summary).dump(2) + "\n");
}

}  // namespace detail

struct GenerateArgs {
    std::string case_dir;
    std::string technique = "memoryless";
    std::string mode = "independent";
    std::string normalize_base;  // optional namespace for normalize_namespaces
    std::string run_id;          // defaults to the output directory name
};

inline int cmd_generate(const GenerateArgs& args, const GlobalOptions& gopts,
                        std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    auto technique = prompt::technique_from_string(args.technique);
    if (!technique) {
        err << "error: unknown technique '" << args.technique << "'\n";
        return kExitUsage;
    }
    if (args.mode != "independent" && args.mode != "incremental") {
        err << "error: mode must be 'independent' or 'incremental'\n";
        return kExitUsage;
    }
    if (gopts.config_path.empty()) {
        err << "error: generate requires --config\n";
        return kExitUsage;
    }

    llm::ModelConfig cfg;
    prompt::PromptTemplates templates;
    prompt::OdpCatalog odps;
    try {
        cfg = llm::load_config(gopts.config_path);
        templates = prompt::PromptTemplates::load(cfg.templates_dir);
        if (!cfg.odp_dir.empty()) odps = prompt::OdpCatalog::load_dir(cfg.odp_dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    dataset::Case c;
    try {
        c = dataset::load_case(args.case_dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCase;
    }

    std::string out_dir = gopts.out_dir.empty()
                              ? "runs/" + c.id + "-" + args.technique + "-" + args.mode
                              : gopts.out_dir;
    std::string run_id =
        args.run_id.empty() ? std::filesystem::path(out_dir).filename().string() : args.run_id;

    try {
        pipeline::RunWriter writer(out_dir, gopts.force);
        llm::LlmClient client(cfg, writer.prompts_dir());
        pipeline::RunResult result =
            args.mode == "independent"
                ? pipeline::generate_independent(c, *technique, client, templates, odps, &writer,
                                                 run_id)
                : pipeline::generate_incremental(c, *technique, client, templates, odps, &writer,
                                                 run_id);
        if (!args.normalize_base.empty()) {
            result = pipeline::normalize_namespaces(result, rdf::Iri(args.normalize_base),
                                                    templates.declared_namespaces());
            writer.write(result);
        }
        out << "run " << run_id << ": " << result.per_cq.size() - result.failures() << "/"
            << result.per_cq.size() << " CQs generated, merged " << result.merged.size()
            << " triples -> " << writer.dir().string() << "\n";
        for (const auto& [cq_id, outcome] : result.per_cq)
            if (!outcome.ok) out << "  " << cq_id << " failed: " << outcome.failure << "\n";
        return kExitOk;
    } catch (const llm::AuthError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const pipeline::RunError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCase;
    }
}

struct EvaluateArgs {
    std::string target;  // run directory or .ttl file
    std::string case_dir;
};

inline int cmd_evaluate(const EvaluateArgs& args, const GlobalOptions& gopts,
                        std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    namespace fs = std::filesystem;

    dataset::Case c;
    try {
        c = dataset::load_case(args.case_dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCase;
    }
    if (c.gold.empty()) {
        err << "error: case '" << c.id << "' has no gold entries to evaluate against\n";
        return kExitCase;
    }

    const bool is_run_dir = fs::is_directory(args.target);
    fs::path candidate_path = is_run_dir ? fs::path(args.target) / "merged.ttl" : fs::path(args.target);
    auto candidate_text = support::try_read_text(candidate_path);
    if (!candidate_text) {
        err << "error: cannot read candidate ontology: " << candidate_path.string() << "\n";
        return kExitCase;
    }
    rdf::Ontology candidate;
    try {
        candidate = rdf::parse_turtle(*candidate_text);
    } catch (const rdf::SyntaxError& e) {
        err << "error: " << candidate_path.string() << ": " << e.what() << "\n";
        return kExitCase;
    }

    report::RunSummary summary;
    summary.case_id = c.id;
    summary.run_id = is_run_dir ? fs::path(args.target).filename().string()
                                : candidate_path.stem().string();
    summary.technique = "-";
    summary.model_name = "-";
    if (is_run_dir) {
        if (auto manifest = support::try_read_text(fs::path(args.target) / "manifest.json")) {
            try {
                auto j = nlohmann::json::parse(*manifest);
                summary.run_id = j.value("run_id", summary.run_id);
                summary.technique = j.value("technique", summary.technique);
                summary.model_name = j.value("model", summary.model_name);
                summary.mode = j.value("mode", "");
            } catch (const std::exception&) {
                // a foreign run directory; evaluate the ontology anyway
            }
        }
    }

    fs::path eval_dir = gopts.out_dir.empty()
                            ? (is_run_dir ? fs::path(args.target) / "eval"
                                          : fs::path(candidate_path.string() + ".eval"))
                            : fs::path(gopts.out_dir);
    if (detail::refuse_overwrite(eval_dir, gopts.force, err)) return kExitUsage;
    fs::create_directories(eval_dir);

    auto artifacts = detail::evaluate_candidate(candidate, c, gopts.online_p37);
    summary.scores = artifacts.scores;
    summary.pitfall_counts = pitfall::count_by_code(artifacts.findings);
    summary.superfluous = artifacts.superfluous;
    detail::write_eval_files(artifacts, summary, eval_dir);

    out << "strict " << report::format_full(summary.scores.strict) << " relaxed "
        << report::format_full(summary.scores.relaxed) << " (" << summary.scores.modelled
        << " modelled, " << summary.scores.minor << " minor, " << summary.scores.not_modelled
        << " not modelled of " << summary.scores.total << ")\n";
    out << "eval files -> " << eval_dir.string() << "\n";
    for (const auto& note : artifacts.notes) out << "note: " << note << "\n";
    return kExitOk;
}

struct ScanArgs {
    std::string ttl_path;
};

inline int cmd_scan(const ScanArgs& args, const GlobalOptions& gopts,
                    std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    auto text = support::try_read_text(args.ttl_path);
    if (!text) {
        err << "error: cannot read " << args.ttl_path << "\n";
        return kExitCase;
    }
    rdf::Ontology o;
    try {
        o = rdf::parse_turtle(*text);
    } catch (const rdf::SyntaxError& e) {
        err << "error: " << args.ttl_path << ": " << e.what() << "\n";
        return kExitCase;
    }

    auto findings = pitfall::scan(o);
    if (gopts.online_p37) {
        auto online = pitfall::check_p37_online(o);
        if (online.finding) findings.push_back(*online.finding);
        if (!online.note.empty()) out << "note: " << online.note << "\n";
    }
    for (const auto& f : findings)
        out << f.code << "\t" << detail::join(f.subjects, ";") << "\t" << f.explanation << "\n";
    out << findings.size() << " finding(s)\n";
    if (!gopts.out_dir.empty()) {
        std::filesystem::create_directories(gopts.out_dir);
        support::write_text(std::filesystem::path(gopts.out_dir) / "findings.csv",
                            detail::findings_csv(findings));
    }
    return kExitOk;
}

struct ReportArgs {
    std::vector<std::string> inputs;  // run directories or summary.json paths
};

inline int cmd_report(const ReportArgs& args, const GlobalOptions& gopts,
                      std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    namespace fs = std::filesystem;
    if (args.inputs.empty()) {
        err << "error: report needs at least one run directory or summary.json\n";
        return kExitUsage;
    }
    std::vector<report::RunSummary> summaries;
    for (const auto& input : args.inputs) {
        fs::path path(input);
        if (fs::is_directory(path)) path = path / "eval" / "summary.json";
        auto text = support::try_read_text(path);
        if (!text) {
            err << "error: cannot read " << path.string()
                << " (run 'evaluate' first for run directories)\n";
            return kExitUsage;
        }
        try {
            summaries.push_back(report::summary_from_json(nlohmann::json::parse(*text)));
        } catch (const std::exception& e) {
            err << "error: " << path.string() << ": " << e.what() << "\n";
            return kExitUsage;
        }
    }

    fs::path out_dir = gopts.out_dir.empty() ? fs::path("report") : fs::path(gopts.out_dir);
    if (detail::refuse_overwrite(out_dir, gopts.force, err)) return kExitUsage;
    report::render_tables(summaries, out_dir);
    out << "report tables -> " << out_dir.string() << "\n";
    return kExitOk;
}

inline int cmd_dataset_check(const std::string& case_dir, std::ostream& out = std::cout,
                             std::ostream& err = std::cerr) {
    dataset::Case c;
    try {
        c = dataset::load_case(case_dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCase;
    }
    auto diags = dataset::validate_case(c);
    for (const auto& d : diags) out << "diagnostic: " << d << "\n";
    out << "case '" << c.id << "': " << c.cqs.size() << " CQ(s), " << c.gold.size()
        << " gold entr(ies), " << diags.size() << " diagnostic(s)\n";
    return diags.empty() ? kExitOk : 1;
}

struct KappaArgs {
    std::string csv_path;
    bool has_header = false;
};

inline int cmd_kappa(const KappaArgs& args, std::ostream& out = std::cout,
                     std::ostream& err = std::cerr) {
    auto text = support::try_read_text(args.csv_path);
    if (!text) {
        err << "error: cannot read " << args.csv_path << "\n";
        return kExitUsage;
    }
    std::vector<std::string> a, b;
    size_t pos = 0, line_no = 0;
    while (pos <= text->size()) {
        size_t eol = text->find('\n', pos);
        std::string line =
            text->substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text->size() + 1 : eol + 1;
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line_no == 1 && args.has_header) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 2) {
            err << "error: " << args.csv_path << ":" << line_no
                << ": expected exactly two columns\n";
            return kExitUsage;
        }
        a.push_back(fields[0]);
        b.push_back(fields[1]);
    }
    if (a.empty()) {
        err << "error: " << args.csv_path << ": no label rows\n";
        return kExitUsage;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", eval::cohens_kappa(a, b));
    out << "kappa: " << buf << " (n=" << a.size() << ")\n";
    return kExitOk;
}

}  // namespace ontodraft::cli
