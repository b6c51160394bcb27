#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ontodraft/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace ontodraft;

    CLI::App app{"ontodraft: draft OWL ontology modules from requirements and evaluate them"};
    app.require_subcommand(1);

    cli::GlobalOptions gopts;
    app.add_option("--config", gopts.config_path, "model/backend config file (JSON)");
    app.add_option("--out", gopts.out_dir, "output directory");
    app.add_flag("--force", gopts.force, "overwrite existing output");
    app.add_flag("--online-p37", gopts.online_p37, "dereference the ontology IRI for P37");

    cli::GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "generate ontologies for a case");
    generate->add_option("case_dir", gen.case_dir, "case directory")->required();
    generate->add_option("--technique", gen.technique, "memoryless | ontogenia");
    generate->add_option("--mode", gen.mode, "independent | incremental");
    generate->add_option("--normalize", gen.normalize_base,
                         "rewrite single-use namespaces under this base IRI");
    generate->add_option("--run-id", gen.run_id, "run identifier (default: output dir name)");

    cli::EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "evaluate a run directory or .ttl file");
    evaluate->add_option("target", ev.target, "run directory or Turtle file")->required();
    evaluate->add_option("case_dir", ev.case_dir, "case directory with gold modules")->required();

    cli::ScanArgs scan;
    auto* scan_cmd = app.add_subcommand("scan", "run the six-pitfall structural scanner");
    scan_cmd->add_option("ttl", scan.ttl_path, "Turtle file")->required();

    cli::ReportArgs rep;
    auto* report_cmd = app.add_subcommand("report", "render pitfall/superfluous/score tables");
    report_cmd->add_option("inputs", rep.inputs, "run directories or summary.json files")
        ->expected(-1);

    std::string check_dir;
    auto* dataset_cmd = app.add_subcommand("dataset", "dataset utilities");
    dataset_cmd->require_subcommand(1);
    auto* check_cmd = dataset_cmd->add_subcommand("check", "validate a case directory");
    check_cmd->add_option("case_dir", check_dir, "case directory")->required();

    cli::KappaArgs kap;
    auto* kappa_cmd = app.add_subcommand("kappa", "Cohen's kappa from a two-column rater CSV");
    kappa_cmd->add_option("csv", kap.csv_path, "CSV with two label columns")->required();
    kappa_cmd->add_flag("--header", kap.has_header, "skip the first line");

    // global flags are accepted on either side of the subcommand name
    for (auto* sub : {generate, evaluate, scan_cmd, report_cmd, dataset_cmd, kappa_cmd})
        sub->fallthrough();
    check_cmd->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitUsage;
    }

    if (generate->parsed()) return cli::cmd_generate(gen, gopts);
    if (evaluate->parsed()) return cli::cmd_evaluate(ev, gopts);
    if (scan_cmd->parsed()) return cli::cmd_scan(scan, gopts);
    if (report_cmd->parsed()) return cli::cmd_report(rep, gopts);
    if (dataset_cmd->parsed() && check_cmd->parsed()) return cli::cmd_dataset_check(check_dir);
    if (kappa_cmd->parsed()) return cli::cmd_kappa(kap);
    return cli::kExitUsage;
}
