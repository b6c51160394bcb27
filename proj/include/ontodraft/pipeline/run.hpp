#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <semaphore>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontodraft/dataset/case.hpp"
#include "ontodraft/llm/gateway.hpp"
#include "ontodraft/prompt/prompt.hpp"
#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/rdf/turtle_parser.hpp"
#include "ontodraft/rdf/turtle_writer.hpp"
#include "ontodraft/support/io.hpp"

namespace ontodraft::pipeline {

struct RunError : std::runtime_error {
    explicit RunError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CqOutcome {
    bool ok = false;
    rdf::Ontology ontology;  // blank ids already suffixed with the cq id
    std::string failure;     // set when !ok
};

struct RunResult {
    std::string run_id;
    std::string case_id;
    prompt::Technique technique = prompt::Technique::MemorylessCqByCq;
    std::string mode;  // "independent" or "incremental"
    std::string model_name;
    std::vector<std::pair<std::string, CqOutcome>> per_cq;  // manifest CQ order
    rdf::Ontology merged;
    std::map<std::string, double> cq_seconds;
    double total_seconds = 0;

    const CqOutcome* outcome(const std::string& cq_id) const {
        for (const auto& [id, o] : per_cq)
            if (id == cq_id) return &o;
        return nullptr;
    }

    size_t failures() const {
        size_t n = 0;
        for (const auto& [id, o] : per_cq)
            if (!o.ok) ++n;
        return n;
    }
};

/// Owns a run directory: runs/<id>/{manifest.json, prompts/, partial/,
/// merged.ttl, log.txt}. log.txt is the only file carrying wall-clock
/// timestamps, so mock runs are byte-reproducible everywhere else.
class RunWriter {
public:
    RunWriter(std::filesystem::path dir, bool force) : dir_(std::move(dir)) {
        namespace fs = std::filesystem;
        if (fs::exists(dir_) && !fs::is_empty(dir_)) {
            if (!force)
                throw RunError("run directory exists, refusing to overwrite without --force: " +
                               dir_.string());
            fs::remove_all(dir_);
        }
        fs::create_directories(dir_ / "prompts");
        fs::create_directories(dir_ / "partial");
    }

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path prompts_dir() const { return dir_ / "prompts"; }

    void log(const std::string& line) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
        log_ += std::string(stamp) + "Z " + line + "\n";
    }

    void write(const RunResult& r) {
        for (const auto& [cq_id, outcome] : r.per_cq)
            if (outcome.ok)
                support::write_text(dir_ / "partial" / (cq_id + ".ttl"),
                                    rdf::serialize_turtle(outcome.ontology));
        support::write_text(dir_ / "merged.ttl", rdf::serialize_turtle(r.merged));

        nlohmann::json m;
        m["run_id"] = r.run_id;
        m["case_id"] = r.case_id;
        m["technique"] = prompt::to_string(r.technique);
        m["mode"] = r.mode;
        m["model"] = r.model_name;
        m["merged_triples"] = r.merged.size();
        m["cqs"] = nlohmann::json::array();
        for (const auto& [cq_id, outcome] : r.per_cq) {
            nlohmann::json e;
            e["id"] = cq_id;
            e["status"] = outcome.ok ? "ok" : "failed";
            if (outcome.ok) e["triples"] = outcome.ontology.size();
            else e["failure"] = outcome.failure;
            m["cqs"].push_back(std::move(e));
        }
        support::write_text(dir_ / "manifest.json", m.dump(2) + "\n");
        support::write_text(dir_ / "log.txt", log_);
    }

private:
    std::filesystem::path dir_;
    std::mutex mutex_;
    std::string log_;
};

namespace detail {

inline std::string blank_suffix_for(const std::string& cq_id) {
    std::string out = "_";
    for (char c : cq_id)
        out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

inline CqOutcome run_one(const llm::LlmClient& client, const prompt::Prompt& p) {
    CqOutcome outcome;
    try {
        auto response = client.complete(p);
        auto turtle = llm::extract_ontology_text(response);
        auto parsed = rdf::parse_turtle(turtle);
        outcome.ontology = rdf::rename_blanks_with_suffix(parsed, blank_suffix_for(p.cq_id));
        outcome.ok = true;
    } catch (const llm::AuthError&) {
        throw;  // run-level: retrying the remaining CQs cannot succeed
    } catch (const std::exception& e) {
        outcome.failure = e.what();
    }
    return outcome;
}

inline rdf::Ontology fold_merge(const std::vector<std::pair<std::string, CqOutcome>>& per_cq) {
    rdf::Ontology merged;
    for (const auto& [cq_id, outcome] : per_cq)
        if (outcome.ok) merged = rdf::merge(merged, outcome.ontology);
    return merged;
}

}  // namespace detail

/// Each CQ is a standalone unit: one call per CQ with only (story, that CQ);
/// Ontogenia runs with no prior. Calls may run concurrently up to the
/// configured limit; per-CQ failures are recorded, never fatal.
inline RunResult generate_independent(const dataset::Case& c, prompt::Technique technique,
                                      const llm::LlmClient& client,
                                      const prompt::PromptTemplates& templates,
                                      const prompt::OdpCatalog& odps, RunWriter* writer = nullptr,
                                      const std::string& run_id = "run",
                                      const std::string& mode_label = "independent") {
    RunResult result;
    result.run_id = run_id;
    result.case_id = c.id;
    result.technique = technique;
    result.mode = mode_label;
    result.model_name = client.config().model_name;

    auto started = std::chrono::steady_clock::now();
    result.per_cq.resize(c.cqs.size());

    std::counting_semaphore<64> slots(std::min(client.config().concurrency, 64));
    std::vector<std::future<void>> tasks;
    tasks.reserve(c.cqs.size());

    std::mutex timing_mutex;
    for (size_t i = 0; i < c.cqs.size(); ++i) {
        tasks.push_back(std::async(std::launch::async, [&, i]() {
            slots.acquire();
            struct Release {
                std::counting_semaphore<64>& s;
                ~Release() { s.release(); }
            } release{slots};

            const auto& cq = c.cqs[i];
            auto cq_start = std::chrono::steady_clock::now();
            prompt::Prompt p = technique == prompt::Technique::MemorylessCqByCq
                                   ? templates.build_memoryless(c.story, cq)
                                   : templates.build_ontogenia(c.story, cq, odps, nullptr);
            auto outcome = detail::run_one(client, p);
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - cq_start).count();
            if (writer)
                writer->log(cq.id + ": " + (outcome.ok ? "ok" : "failed: " + outcome.failure));
            {
                std::lock_guard<std::mutex> lock(timing_mutex);
                result.cq_seconds[cq.id] = secs;
            }
            result.per_cq[i] = {cq.id, std::move(outcome)};
        }));
    }
    for (auto& t : tasks) t.get();  // rethrows AuthError from workers

    result.merged = detail::fold_merge(result.per_cq);
    result.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (writer) writer->write(result);
    return result;
}

/// Incremental generation. Memoryless: the independent per-CQ calls merged at
/// the end. Ontogenia: strictly sequential, the merged-so-far ontology fed to
/// each prompt as prior; a failed CQ leaves the prior unchanged.
inline RunResult generate_incremental(const dataset::Case& c, prompt::Technique technique,
                                      const llm::LlmClient& client,
                                      const prompt::PromptTemplates& templates,
                                      const prompt::OdpCatalog& odps, RunWriter* writer = nullptr,
                                      const std::string& run_id = "run") {
    if (technique == prompt::Technique::MemorylessCqByCq)
        return generate_independent(c, technique, client, templates, odps, writer, run_id,
                                    "incremental");

    RunResult result;
    result.run_id = run_id;
    result.case_id = c.id;
    result.technique = technique;
    result.mode = "incremental";
    result.model_name = client.config().model_name;

    auto started = std::chrono::steady_clock::now();
    rdf::Ontology prior;
    for (const auto& cq : c.cqs) {
        auto cq_start = std::chrono::steady_clock::now();
        prompt::Prompt p = templates.build_ontogenia(c.story, cq, odps, &prior);
        auto outcome = detail::run_one(client, p);
        result.cq_seconds[cq.id] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - cq_start).count();
        if (writer) writer->log(cq.id + ": " + (outcome.ok ? "ok" : "failed: " + outcome.failure));
        if (outcome.ok) prior = rdf::merge(prior, outcome.ontology);
        result.per_cq.emplace_back(cq.id, std::move(outcome));
    }
    result.merged = std::move(prior);
    result.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (writer) writer->write(result);
    return result;
}

/// Rewrite per-call throwaway namespaces — those used by exactly one partial
/// solution and not declared by the prompt templates — under the given base.
/// Identical local names from different partials unify into one IRI.
inline RunResult normalize_namespaces(const RunResult& r, const rdf::Iri& base,
                                      const std::set<std::string>& declared_namespaces) {
    if (!rdf::is_absolute_iri(base.value) ||
        (!base.value.ends_with('/') && !base.value.ends_with('#')))
        throw RunError("normalization base must be an absolute IRI ending in '/' or '#': " +
                       base.value);

    std::map<std::string, std::set<size_t>> users;  // namespace -> partial indices
    for (size_t i = 0; i < r.per_cq.size(); ++i) {
        const auto& outcome = r.per_cq[i].second;
        if (!outcome.ok) continue;
        for (const auto& t : outcome.ontology.triples) {
            for (const rdf::Term* term : {&t.subject, &t.predicate, &t.object})
                if (term->is_iri()) users[rdf::Iri(term->value).namespace_part()].insert(i);
        }
    }

    std::set<std::string> throwaway;
    for (const auto& [ns, idx] : users)
        if (idx.size() == 1 && !declared_namespaces.count(ns) && !rdf::vocab::is_reserved(ns))
            throwaway.insert(ns);

    RunResult out = r;
    auto rewrite_term = [&](rdf::Term& t) {
        if (!t.is_iri()) return;
        rdf::Iri iri(t.value);
        if (throwaway.count(iri.namespace_part())) t.value = base.value + iri.local_name();
    };
    for (auto& [cq_id, outcome] : out.per_cq) {
        if (!outcome.ok) continue;
        bool touched = false;
        for (auto& t : outcome.ontology.triples) {
            rewrite_term(t.subject);
            rewrite_term(t.predicate);
            rewrite_term(t.object);
            touched = true;
        }
        if (touched) outcome.ontology.normalize();
        for (auto& [name, ns] : outcome.ontology.prefixes)
            if (throwaway.count(ns)) ns = base.value;
    }
    out.merged = detail::fold_merge(out.per_cq);

    bool base_declared = false;
    for (const auto& [name, ns] : out.merged.prefixes)
        if (ns == base.value) base_declared = true;
    if (!base_declared && !throwaway.empty()) {
        std::string name = "ns";
        int k = 2;
        while (out.merged.prefixes.count(name)) name = "ns" + std::to_string(k++);
        out.merged.prefixes.emplace(name, base.value);
    }
    return out;
}

}  // namespace ontodraft::pipeline
