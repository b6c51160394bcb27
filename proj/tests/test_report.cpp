#include <doctest.h>

#include <cstdlib>

#include "ontodraft/report/render.hpp"
#include "ontodraft/support/io.hpp"
#include "test_util.hpp"

using namespace ontodraft;

static report::RunSummary sample_summary() {
    report::RunSummary s;
    s.run_id = "music-memoryless";
    s.case_id = "music";
    s.technique = "MemorylessCQbyCQ";
    s.model_name = "gpt-4";
    s.mode = "incremental";
    s.scores.strict = 0.84;
    s.scores.relaxed = 0.89;
    s.scores.total = 100;
    s.scores.modelled = 84;
    s.scores.minor = 5;
    s.scores.not_modelled = 11;
    s.scores.per_category["Reification"] = {0.5, 0.75, 4, 2, 1};
    s.pitfall_counts = {{"P19", 23}, {"P05", 1}};
    s.superfluous.classes.total = 3;
    s.superfluous.classes.superfluous = {"http://e/Person"};
    s.superfluous.classes.rate = 1.0 / 3.0;
    s.superfluous.object_properties.total = 2;
    s.superfluous.object_properties.rate = 0.5;
    s.superfluous.object_properties.superfluous = {"http://e/wrote"};
    s.superfluous.data_properties.total = 0;
    return s;
}

TEST_CASE("pitfall table carries counts into the right cells") {
    testutil::TempDir tmp;
    report::render_tables({sample_summary()}, tmp.path);
    auto csv = support::read_text(tmp.path / "report_pitfalls.csv");
    CHECK(csv.find("code,MemorylessCQbyCQ (gpt-4)") == 0);
    CHECK(csv.find("P19,23") != std::string::npos);
    CHECK(csv.find("P05,1") != std::string::npos);
    CHECK(csv.find("P29,0") != std::string::npos);

    auto md = support::read_text(tmp.path / "report_pitfalls.md");
    CHECK(md.find("| P19 | 23 |") != std::string::npos);
}

TEST_CASE("pitfall counts aggregate across cases per technique and model") {
    auto a = sample_summary();
    auto b = sample_summary();
    b.case_id = "theatre";
    b.run_id = "theatre-memoryless";
    b.pitfall_counts = {{"P19", 2}};
    testutil::TempDir tmp;
    report::render_tables({a, b}, tmp.path);
    auto csv = support::read_text(tmp.path / "report_pitfalls.csv");
    CHECK(csv.find("P19,25") != std::string::npos);
}

TEST_CASE("superfluous matrix renders one-decimal percentages") {
    testutil::TempDir tmp;
    report::render_tables({sample_summary()}, tmp.path);
    auto csv = support::read_text(tmp.path / "report_superfluous.csv");
    CHECK(csv.find("classes:music") != std::string::npos);
    CHECK(csv.find("33.3") != std::string::npos);
    CHECK(csv.find("50.0") != std::string::npos);
    CHECK(csv.find(",-") != std::string::npos);  // undefined rate cell
}

TEST_CASE("rendering is deterministic") {
    testutil::TempDir a, b;
    report::render_tables({sample_summary()}, a.path);
    report::render_tables({sample_summary()}, b.path);
    for (const auto* name :
         {"report_pitfalls.csv", "report_superfluous.csv", "report_scores.csv",
          "report_pitfalls.md", "report_superfluous.md"}) {
        CHECK(support::read_text(a.path / name) == support::read_text(b.path / name));
    }
}

TEST_CASE("score csv round-trips the exact double values") {
    testutil::TempDir tmp;
    auto s = sample_summary();
    s.scores.strict = 14.0 / 15.0;
    s.scores.relaxed = 1.0;
    report::render_tables({s}, tmp.path);
    auto csv = support::read_text(tmp.path / "report_scores.csv");
    auto line = csv.substr(csv.find('\n') + 1);
    auto last_comma = line.rfind(',');
    auto prev_comma = line.rfind(',', last_comma - 1);
    double relaxed = std::strtod(line.c_str() + last_comma + 1, nullptr);
    double strict = std::strtod(line.c_str() + prev_comma + 1, nullptr);
    CHECK(strict == 14.0 / 15.0);
    CHECK(relaxed == 1.0);
}

TEST_CASE("summary json round-trip") {
    auto s = sample_summary();
    auto j = report::to_json(s);
    auto back = report::summary_from_json(j);
    CHECK(back.run_id == s.run_id);
    CHECK(back.technique == s.technique);
    CHECK(back.scores.strict == s.scores.strict);
    CHECK(back.scores.relaxed == s.scores.relaxed);
    CHECK(back.scores.per_category.at("Reification").n == 4);
    CHECK(back.pitfall_counts.at("P19") == 23);
    CHECK(back.superfluous.classes.superfluous == s.superfluous.classes.superfluous);
    CHECK(*back.superfluous.classes.rate == *s.superfluous.classes.rate);
    CHECK(!back.superfluous.data_properties.rate);
}

TEST_CASE("empty summary list is rejected") {
    testutil::TempDir tmp;
    CHECK_THROWS_AS(report::render_tables({}, tmp.path), eval::EmptyInputError);
}
