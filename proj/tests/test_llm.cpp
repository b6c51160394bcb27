#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ontodraft/llm/gateway.hpp"
#include "ontodraft/support/io.hpp"
#include "test_util.hpp"

using namespace ontodraft;

static llm::RawResponse resp(std::string text) {
    llm::RawResponse r;
    r.text = std::move(text);
    return r;
}

TEST_CASE("extraction picks the fenced turtle payload") {
    auto out = llm::extract_ontology_text(
        resp("Here is the ontology:\n```turtle\n<http://e/a> a <http://e/C> .\n```\n"));
    CHECK(out == "<http://e/a> a <http://e/C> .\n");
    CHECK(out.find("```") == std::string::npos);
}

TEST_CASE("the last fenced block wins; turtle label beats unlabeled") {
    auto two_turtle = llm::extract_ontology_text(resp(
        "```turtle\n<http://e/a> a <http://e/Draft> .\n```\nrevised:\n"
        "```turtle\n<http://e/a> a <http://e/Final> .\n```\n"));
    CHECK(two_turtle.find("Final") != std::string::npos);

    auto labeled_beats_plain = llm::extract_ontology_text(resp(
        "```turtle\n<http://e/a> a <http://e/Keep> .\n```\nnotes:\n"
        "```\nnot an ontology at all\n```\n"));
    CHECK(labeled_beats_plain.find("Keep") != std::string::npos);

    auto last_plain = llm::extract_ontology_text(resp(
        "```\n<http://e/a> a <http://e/First> .\n```\n"
        "```\n<http://e/a> a <http://e/Second> .\n```\n"));
    CHECK(last_plain.find("Second") != std::string::npos);
}

TEST_CASE("whole text fallback only when it parses") {
    CHECK(llm::extract_ontology_text(resp("<http://e/a> a <http://e/C> .")) ==
          "<http://e/a> a <http://e/C> .");
    CHECK_THROWS_AS(llm::extract_ontology_text(resp("I would rather chat about ontologies.")),
                    llm::NonOntologyOutputError);
    CHECK_THROWS_AS(llm::extract_ontology_text(resp("")), llm::EmptyOutputError);
    CHECK_THROWS_AS(llm::extract_ontology_text(resp("   \n\t\n")), llm::EmptyOutputError);
    CHECK_THROWS_AS(llm::extract_ontology_text(resp("```turtle\n\n```")), llm::EmptyOutputError);
    CHECK_THROWS_AS(
        llm::extract_ontology_text(resp("```turtle\nthis is not turtle at all\n```")),
        llm::NonOntologyOutputError);
}

TEST_CASE("mock backend returns scripted bytes and writes a transcript") {
    testutil::TempDir tmp;
    llm::ModelConfig cfg;
    cfg.backend = llm::ModelConfig::Backend::mock;
    cfg.mock_dir = (testutil::fixtures() / "mock_replies/book").string();
    cfg.model_name = "scripted-mock";

    llm::LlmClient client(cfg, tmp.path);
    prompt::Prompt p;
    p.technique = prompt::Technique::MemorylessCqByCq;
    p.cq_id = "cq01";
    p.text = "irrelevant";
    p.char_length = p.text.size();

    auto r = client.complete(p);
    auto scripted = support::read_text(testutil::fixtures() / "mock_replies/book/cq01.txt");
    CHECK(r.text == scripted);
    CHECK(r.attempt == 1);
    CHECK(r.latency_s == 0.0);

    auto transcript = nlohmann::json::parse(support::read_text(tmp.path / "cq01.json"));
    CHECK(transcript.at("cq_id") == "cq01");
    CHECK(transcript.at("response_text") == scripted);
    CHECK(transcript.at("latency_s") == 0.0);

    p.cq_id = "cq99";
    CHECK_THROWS_AS(client.complete(p), llm::TransportError);
}

TEST_CASE("http backend retries 429/5xx and stops on auth errors") {
    std::atomic<int> hits{0};
    std::atomic<int> auth_hits{0};
    httplib::Server server;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        if (req.get_header_value("Authorization") == "Bearer bad-key") {
            ++auth_hits;
            res.status = 401;
            return;
        }
        int n = ++hits;
        if (n <= 2) {
            res.status = 429;
            return;
        }
        auto body = nlohmann::json::parse(req.body);
        std::string content = "```turtle\n<http://e/a> a <http://e/C> .\n```";
        nlohmann::json reply = {
            {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
            {"model", body.at("model")}};
        res.set_content(reply.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    llm::ModelConfig cfg;
    cfg.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    cfg.max_retries = 3;
    cfg.backoff_initial_ms = 1;
    cfg.api_key_env = "ONTODRAFT_TEST_KEY";

    prompt::Prompt p;
    p.technique = prompt::Technique::Ontogenia;
    p.cq_id = "cq01";
    p.text = "prompt body";
    p.char_length = p.text.size();

    SUBCASE("429 twice then success means attempt 3") {
        ::setenv("ONTODRAFT_TEST_KEY", "good-key", 1);
        llm::LlmClient client(cfg, std::nullopt);
        auto r = client.complete(p);
        CHECK(r.attempt == 3);
        CHECK(r.text.find("```turtle") != std::string::npos);
        CHECK(r.prompt_chars == p.text.size());
    }

    SUBCASE("invalid key is terminal on the first attempt") {
        ::setenv("ONTODRAFT_TEST_KEY", "bad-key", 1);
        llm::LlmClient client(cfg, std::nullopt);
        CHECK_THROWS_AS(client.complete(p), llm::AuthError);
        CHECK(auth_hits == 1);
    }

    SUBCASE("retries exhausted becomes a transport error") {
        ::setenv("ONTODRAFT_TEST_KEY", "good-key", 1);
        hits = -100;  // keep the server answering 429 throughout
        auto limited = cfg;
        limited.max_retries = 1;
        llm::LlmClient client(limited, std::nullopt);
        CHECK_THROWS_AS(client.complete(p), llm::TransportError);
    }

    server.stop();
    runner.join();
}

TEST_CASE("config loading resolves relative paths and validates fields") {
    auto cfg = llm::load_config(testutil::fixtures() / "configs/mock_library15.json");
    CHECK(cfg.backend == llm::ModelConfig::Backend::mock);
    CHECK(std::filesystem::is_directory(cfg.mock_dir));
    CHECK(std::filesystem::is_directory(cfg.templates_dir));
    CHECK(std::filesystem::is_directory(cfg.odp_dir));
    CHECK(cfg.model_name == "scripted-mock");
    CHECK(cfg.temperature == 0.0);
    CHECK(cfg.frequency_penalty == 0.0);

    testutil::TempDir tmp;
    support::write_text(tmp.path / "bad.json", "{not json");
    CHECK_THROWS_AS(llm::load_config(tmp.path / "bad.json"), llm::ConfigError);
    support::write_text(tmp.path / "mock_no_dir.json", R"({"backend":"mock"})");
    CHECK_THROWS_AS(llm::load_config(tmp.path / "mock_no_dir.json"), llm::ConfigError);
    support::write_text(tmp.path / "http_no_endpoint.json", R"({"backend":"http"})");
    CHECK_THROWS_AS(llm::load_config(tmp.path / "http_no_endpoint.json"), llm::ConfigError);
    CHECK_THROWS_AS(llm::load_config(tmp.path / "absent.json"), llm::ConfigError);
}

TEST_CASE("omit_sampling_params drops sampling fields from the request") {
    testutil::TempDir tmp;
    llm::ModelConfig cfg;
    cfg.backend = llm::ModelConfig::Backend::mock;
    cfg.mock_dir = (testutil::fixtures() / "mock_replies/book").string();
    cfg.omit_sampling_params = true;

    llm::LlmClient client(cfg, tmp.path);
    prompt::Prompt p;
    p.technique = prompt::Technique::MemorylessCqByCq;
    p.cq_id = "cq01";
    p.text = "x";
    p.char_length = 1;
    client.complete(p);
    auto transcript = nlohmann::json::parse(support::read_text(tmp.path / "cq01.json"));
    CHECK(!transcript.at("request").contains("temperature"));
}
