#pragma once

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ontodraft/prompt/prompt.hpp"
#include "ontodraft/rdf/turtle_parser.hpp"
#include "ontodraft/support/io.hpp"

namespace ontodraft::llm {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct AuthError : std::runtime_error {
    explicit AuthError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TransportError : std::runtime_error {
    explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyOutputError : std::runtime_error {
    EmptyOutputError() : std::runtime_error("model produced no extractable content") {}
};

struct NonOntologyOutputError : std::runtime_error {
    std::string parse_error;
    explicit NonOntologyOutputError(const std::string& err)
        : std::runtime_error("extracted text is not parseable Turtle: " + err), parse_error(err) {}
};

struct ModelConfig {
    enum class Backend { http, mock };

    Backend backend = Backend::http;
    std::string endpoint_url;  // full chat-completions URL
    std::string model_name = "gpt-4";
    double temperature = 0.0;
    double frequency_penalty = 0.0;
    double presence_penalty = 0.0;
    bool omit_sampling_params = false;  // reasoning-style models reject them
    int max_retries = 3;
    double timeout_s = 60.0;
    int concurrency = 4;
    int backoff_initial_ms = 500;
    std::string api_key_env = "ONTODRAFT_API_KEY";
    std::string mock_dir;        // Backend::mock: directory of <cq_id>.txt replies
    std::string templates_dir = "templates";
    std::string odp_dir;
};

/// Read a JSON config file. Relative mock/template/ODP paths are resolved
/// against the config file's directory.
inline ModelConfig load_config(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    auto text = support::try_read_text(path);
    if (!text) throw ConfigError("cannot read config: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(*text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }

    ModelConfig cfg;
    auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    auto resolve = [&base](const std::string& p) {
        fs::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).lexically_normal().string();
    };

    if (j.contains("backend")) {
        std::string b = j["backend"].get<std::string>();
        if (b == "mock") cfg.backend = ModelConfig::Backend::mock;
        else if (b == "http") cfg.backend = ModelConfig::Backend::http;
        else throw ConfigError("unknown backend '" + b + "'");
    }
    if (j.contains("endpoint")) cfg.endpoint_url = j["endpoint"].get<std::string>();
    if (j.contains("model")) cfg.model_name = j["model"].get<std::string>();
    if (j.contains("temperature")) cfg.temperature = j["temperature"].get<double>();
    if (j.contains("frequency_penalty")) cfg.frequency_penalty = j["frequency_penalty"].get<double>();
    if (j.contains("presence_penalty")) cfg.presence_penalty = j["presence_penalty"].get<double>();
    if (j.contains("omit_sampling_params")) cfg.omit_sampling_params = j["omit_sampling_params"].get<bool>();
    if (j.contains("max_retries")) cfg.max_retries = j["max_retries"].get<int>();
    if (j.contains("timeout_s")) cfg.timeout_s = j["timeout_s"].get<double>();
    if (j.contains("concurrency")) cfg.concurrency = j["concurrency"].get<int>();
    if (j.contains("backoff_initial_ms")) cfg.backoff_initial_ms = j["backoff_initial_ms"].get<int>();
    if (j.contains("api_key_env")) cfg.api_key_env = j["api_key_env"].get<std::string>();
    if (j.contains("mock_dir")) cfg.mock_dir = resolve(j["mock_dir"].get<std::string>());
    if (j.contains("templates_dir")) cfg.templates_dir = resolve(j["templates_dir"].get<std::string>());
    if (j.contains("odp_dir")) cfg.odp_dir = resolve(j["odp_dir"].get<std::string>());

    if (cfg.max_retries < 0) throw ConfigError("max_retries must be >= 0");
    if (cfg.concurrency < 1) throw ConfigError("concurrency must be >= 1");
    if (cfg.backend == ModelConfig::Backend::mock && cfg.mock_dir.empty())
        throw ConfigError("mock backend requires mock_dir");
    if (cfg.backend == ModelConfig::Backend::http && cfg.endpoint_url.empty())
        throw ConfigError("http backend requires endpoint");
    return cfg;
}

struct RawResponse {
    std::string text;
    size_t prompt_chars = 0;
    double latency_s = 0.0;
    int attempt = 1;
};

namespace detail {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

inline ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint is not a URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace detail

/// Chat-completions client over the OpenAI-compatible wire shape, or a
/// deterministic file-backed mock. Retries transport errors and 429/5xx with
/// exponential backoff; 401/403 are terminal. Safe to call concurrently.
class LlmClient {
public:
    explicit LlmClient(ModelConfig cfg, std::optional<std::filesystem::path> transcript_dir = {})
        : cfg_(std::move(cfg)), transcript_dir_(std::move(transcript_dir)) {}

    const ModelConfig& config() const { return cfg_; }

    RawResponse complete(const prompt::Prompt& p) const {
        if (cfg_.backend == ModelConfig::Backend::mock) return complete_mock(p);
        return complete_http(p);
    }

private:
    ModelConfig cfg_;
    std::optional<std::filesystem::path> transcript_dir_;

    nlohmann::json request_body(const prompt::Prompt& p) const {
        nlohmann::json body;
        body["model"] = cfg_.model_name;
        body["messages"] = nlohmann::json::array(
            {nlohmann::json{{"role", "user"}, {"content", p.text}}});
        if (!cfg_.omit_sampling_params) {
            body["temperature"] = cfg_.temperature;
            body["frequency_penalty"] = cfg_.frequency_penalty;
            body["presence_penalty"] = cfg_.presence_penalty;
        }
        return body;
    }

    void write_transcript(const prompt::Prompt& p, const RawResponse& r, int http_status) const {
        if (!transcript_dir_) return;
        nlohmann::json t;
        t["technique"] = prompt::to_string(p.technique);
        t["cq_id"] = p.cq_id;
        t["sections"] = p.sections;
        t["request"] = request_body(p);
        t["response_text"] = r.text;
        t["attempt"] = r.attempt;
        t["latency_s"] = r.latency_s;
        t["http_status"] = http_status;
        support::write_text(*transcript_dir_ / (p.cq_id + ".json"), t.dump(2) + "\n");
    }

    RawResponse complete_mock(const prompt::Prompt& p) const {
        auto path = std::filesystem::path(cfg_.mock_dir) / (p.cq_id + ".txt");
        auto text = support::try_read_text(path);
        if (!text) throw TransportError("mock reply not found: " + path.string());
        RawResponse r;
        r.text = *text;
        r.prompt_chars = p.char_length;
        r.latency_s = 0.0;  // pinned: mock runs must be bit-reproducible
        r.attempt = 1;
        write_transcript(p, r, 200);
        return r;
    }

    RawResponse complete_http(const prompt::Prompt& p) const {
        auto url = detail::split_url(cfg_.endpoint_url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        if (url.origin.rfind("https", 0) == 0)
            throw ConfigError("https endpoint requires an OpenSSL-enabled build");
#endif
        httplib::Headers headers;
        if (!cfg_.api_key_env.empty()) {
            if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
                headers.emplace("Authorization", std::string("Bearer ") + key);
        }
        const std::string body = request_body(p).dump();
        const auto started = std::chrono::steady_clock::now();

        std::string last_error;
        for (int attempt = 1; attempt <= cfg_.max_retries + 1; ++attempt) {
            httplib::Client client(url.origin);
            client.set_connection_timeout(static_cast<time_t>(cfg_.timeout_s), 0);
            client.set_read_timeout(static_cast<time_t>(cfg_.timeout_s), 0);
            client.set_write_timeout(static_cast<time_t>(cfg_.timeout_s), 0);

            auto res = client.Post(url.path, headers, body, "application/json");
            if (res) {
                if (res->status == 401 || res->status == 403)
                    throw AuthError("endpoint rejected credentials (HTTP " +
                                    std::to_string(res->status) + ")");
                if (res->status == 200) {
                    RawResponse r;
                    r.text = extract_content(res->body);
                    r.prompt_chars = p.char_length;
                    r.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                                started)
                                      .count();
                    r.attempt = attempt;
                    write_transcript(p, r, res->status);
                    return r;
                }
                last_error = "HTTP " + std::to_string(res->status);
                bool retryable = res->status == 429 || res->status >= 500;
                if (!retryable) throw TransportError("endpoint answered " + last_error);
            } else {
                last_error = httplib::to_string(res.error());
            }
            if (attempt <= cfg_.max_retries) {
                auto delay = std::chrono::milliseconds(
                    static_cast<long>(cfg_.backoff_initial_ms) * (1L << (attempt - 1)));
                std::this_thread::sleep_for(delay);
            }
        }
        throw TransportError("request failed after " + std::to_string(cfg_.max_retries + 1) +
                             " attempt(s): " + last_error);
    }

    static std::string extract_content(const std::string& body) {
        try {
            auto j = nlohmann::json::parse(body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const std::exception& e) {
            throw TransportError(std::string("malformed chat-completions response: ") + e.what());
        }
    }
};

namespace detail {

struct FencedBlock {
    std::string label;
    std::string content;
};

inline std::vector<FencedBlock> fenced_blocks(const std::string& text) {
    std::vector<FencedBlock> blocks;
    size_t pos = 0;
    while (true) {
        size_t open = text.find("```", pos);
        if (open == std::string::npos) break;
        size_t label_end = text.find('\n', open + 3);
        if (label_end == std::string::npos) break;
        std::string label = text.substr(open + 3, label_end - open - 3);
        while (!label.empty() && (label.back() == '\r' || label.back() == ' ')) label.pop_back();
        size_t close = text.find("```", label_end + 1);
        if (close == std::string::npos) break;
        std::string content = text.substr(label_end + 1, close - label_end - 1);
        blocks.push_back({std::move(label), std::move(content)});
        pos = close + 3;
    }
    return blocks;
}

inline bool blank(std::string_view s) {
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

inline std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace detail

/// Pull the ontology payload out of a model reply: the last fenced block
/// labeled turtle/ttl, else the last fenced block of any label, else the whole
/// text when it parses as Turtle. The returned text never contains fence
/// markers; it is guaranteed to parse.
inline std::string extract_ontology_text(const RawResponse& r) {
    if (detail::blank(r.text)) throw EmptyOutputError{};

    auto blocks = detail::fenced_blocks(r.text);
    const detail::FencedBlock* chosen = nullptr;
    for (const auto& b : blocks) {
        auto label = detail::lowercase(b.label);
        if (label == "turtle" || label == "ttl") chosen = &b;
    }
    if (!chosen && !blocks.empty()) chosen = &blocks.back();

    std::string payload = chosen ? chosen->content : r.text;
    if (detail::blank(payload)) throw EmptyOutputError{};
    try {
        rdf::parse_turtle(payload);
    } catch (const rdf::SyntaxError& e) {
        throw NonOntologyOutputError(e.what());
    }
    return payload;
}

}  // namespace ontodraft::llm
