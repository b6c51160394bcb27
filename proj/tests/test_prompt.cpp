#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "ontodraft/dataset/case.hpp"
#include "ontodraft/prompt/prompt.hpp"
#include "ontodraft/rdf/turtle_writer.hpp"
#include "ontodraft/support/io.hpp"
#include "test_util.hpp"

using namespace ontodraft;
namespace fs = std::filesystem;

static prompt::PromptTemplates templates() {
    return prompt::PromptTemplates::load(testutil::templates_root());
}

static prompt::OdpCatalog odps() {
    return prompt::OdpCatalog::load_dir(testutil::fixtures() / "odps");
}

static dataset::Case library() {
    return dataset::load_case(testutil::fixtures() / "cases/library15");
}

TEST_CASE("memoryless prompt has the six fixed sections") {
    auto c = library();
    auto p = templates().build_memoryless(c.story, c.cqs[0]);
    CHECK(p.sections == std::vector<std::string>{"persona", "syntax_primer", "story", "cq",
                                                 "pitfalls", "output_format"});
    CHECK(p.char_length == p.text.size());
    CHECK(p.technique == prompt::Technique::MemorylessCqByCq);
    CHECK(p.cq_id == "cq01");
}

TEST_CASE("memoryless prompt contains its own CQ and story verbatim, no other CQ") {
    auto c = library();
    auto tpl = templates();
    auto p = tpl.build_memoryless(c.story, c.cqs[0]);
    CHECK(p.text.find(c.story.text) != std::string::npos);
    CHECK(p.text.find(c.cqs[0].text) != std::string::npos);
    for (size_t k = 1; k < c.cqs.size(); ++k)
        CHECK(p.text.find(c.cqs[k].text) == std::string::npos);
}

TEST_CASE("prompt rendering is deterministic and order-independent") {
    auto c = library();
    auto tpl = templates();
    auto a = tpl.build_memoryless(c.story, c.cqs[4]);
    auto b = tpl.build_memoryless(c.story, c.cqs[4]);
    CHECK(a.text == b.text);

    auto permuted = c;
    std::reverse(permuted.cqs.begin(), permuted.cqs.end());
    auto after = tpl.build_memoryless(permuted.story, c.cqs[4]);
    CHECK(after.text == a.text);
}

TEST_CASE("ontogenia prompt embeds odps, prior and the enrichment directive") {
    auto c = library();
    auto tpl = templates();
    auto catalog = odps();

    auto no_prior = tpl.build_ontogenia(c.story, c.cqs[0], catalog, nullptr);
    CHECK(std::find(no_prior.sections.begin(), no_prior.sections.end(), "prior") ==
          no_prior.sections.end());
    CHECK(no_prior.sections.front() == "persona");
    CHECK(no_prior.sections.back() == "output_format");

    auto prior = c.gold.at("cq01").gold_module;
    auto with_prior = tpl.build_ontogenia(c.story, c.cqs[1], catalog, &prior);
    CHECK(std::find(with_prior.sections.begin(), with_prior.sections.end(), "prior") !=
          with_prior.sections.end());
    CHECK(with_prior.text.find(rdf::serialize_turtle(prior)) != std::string::npos);

    for (const auto& pattern : catalog.patterns) {
        size_t first = with_prior.text.find("Pattern: " + pattern.name);
        REQUIRE(first != std::string::npos);
        CHECK(with_prior.text.find("Pattern: " + pattern.name, first + 1) == std::string::npos);
    }
}

TEST_CASE("every rendered prompt ends with the output-format directive") {
    auto c = library();
    auto tpl = templates();
    auto raw = support::read_text(testutil::templates_root() / "memoryless/06_output_format.txt");
    auto directive = prompt::detail::rstrip(raw);
    auto p = tpl.build_memoryless(c.story, c.cqs[2]);
    CHECK(p.text.ends_with(directive));

    auto og = tpl.build_ontogenia(c.story, c.cqs[2], odps(), nullptr);
    auto og_raw =
        support::read_text(testutil::templates_root() / "ontogenia/08_output_format.txt");
    CHECK(og.text.ends_with(prompt::detail::rstrip(og_raw)));
}

TEST_CASE("memoryless is strictly shorter than ontogenia with a non-empty prior") {
    auto c = library();
    auto tpl = templates();
    auto catalog = odps();
    rdf::Ontology prior;
    for (size_t k = 1; k < c.cqs.size(); ++k) {
        prior = rdf::merge(prior, c.gold.at(c.cqs[k - 1].id).gold_module);
        auto memoryless = tpl.build_memoryless(c.story, c.cqs[k]);
        auto ontogenia = tpl.build_ontogenia(c.story, c.cqs[k], catalog, &prior);
        INFO("k = " << k + 1);
        CHECK(memoryless.char_length < ontogenia.char_length);
    }
}

TEST_CASE("context reduction is positive with a non-empty prior") {
    auto c = library();
    auto tpl = templates();
    auto prior = c.gold.at("cq01").gold_module;
    double ratio = prompt::context_reduction(tpl, c, 2, prior, odps());
    CHECK(ratio > 0.0);
    CHECK(ratio < 1.0);
}

TEST_CASE("odp catalog loads names, descriptions and snippets") {
    auto catalog = odps();
    REQUIRE(catalog.patterns.size() == 3);
    CHECK(catalog.patterns[0].name == "agent_role");
    CHECK(catalog.patterns[1].name == "part_of");
    CHECK(catalog.patterns[2].name == "situation");
    for (const auto& p : catalog.patterns) {
        CHECK(!p.description.empty());
        CHECK(p.turtle.find("owl:") != std::string::npos);
    }
}

TEST_CASE("template loading errors") {
    testutil::TempDir tmp;
    fs::copy(testutil::templates_root(), tmp.path / "templates", fs::copy_options::recursive);

    SUBCASE("missing file") {
        fs::remove(tmp.path / "templates/memoryless/04_cq.txt");
        CHECK_THROWS_AS(prompt::PromptTemplates::load(tmp.path / "templates"),
                        prompt::TemplateError);
    }
    SUBCASE("missing required placeholder") {
        support::write_text(tmp.path / "templates/memoryless/03_story.txt", "no placeholder\n");
        CHECK_THROWS_AS(prompt::PromptTemplates::load(tmp.path / "templates"),
                        prompt::TemplateError);
    }
    SUBCASE("unknown placeholder") {
        support::write_text(tmp.path / "templates/memoryless/03_story.txt",
                            "{{story}} and {{bogus}}\n");
        CHECK_THROWS_AS(prompt::PromptTemplates::load(tmp.path / "templates"),
                        prompt::TemplateError);
    }
}

TEST_CASE("template comment lines never reach the prompt") {
    auto c = library();
    auto p = templates().build_memoryless(c.story, c.cqs[0]);
    CHECK(p.text.find("## ") == std::string::npos);
}

TEST_CASE("declared namespaces include the primer prefixes") {
    auto ns = templates().declared_namespaces();
    CHECK(ns.count("http://example.org/onto#"));
    CHECK(ns.count(std::string(rdf::vocab::OWL_NS)));
}
