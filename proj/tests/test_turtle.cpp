#include <doctest.h>

#include <filesystem>

#include "ontodraft/rdf/ontology.hpp"
#include "ontodraft/rdf/turtle_parser.hpp"
#include "ontodraft/rdf/turtle_writer.hpp"
#include "ontodraft/support/io.hpp"
#include "test_util.hpp"

using namespace ontodraft;

TEST_CASE("single triple document") {
    auto o = rdf::parse_turtle(
        "@prefix ex: <http://ex.org/> . @prefix owl: <http://www.w3.org/2002/07/owl#> . "
        "ex:Book a owl:Class .");
    CHECK(o.size() == 1);
    auto sig = rdf::signature(o);
    CHECK(sig.classes == std::set<std::string>{"http://ex.org/Book"});
    CHECK(sig.object_properties.empty());
}

TEST_CASE("empty document") {
    auto o = rdf::parse_turtle("");
    CHECK(o.size() == 0);
    CHECK(rdf::signature(o).empty());
    CHECK(!o.ontology_iri);
}

TEST_CASE("undeclared prefix names the prefix") {
    try {
        rdf::parse_turtle("foo:Bar a foo:Baz .");
        FAIL("expected SyntaxError");
    } catch (const rdf::SyntaxError& e) {
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
}

TEST_CASE("literals keep lexical form and datatype") {
    auto o = rdf::parse_turtle(
        "@prefix ex: <http://ex.org/> .\n"
        "ex:a ex:int 42 ; ex:dec 3.14 ; ex:dbl 6.02E23 ; ex:neg -7 ; ex:flag true ;\n"
        "  ex:s \"plain\" ; ex:t 'single' ; ex:lang \"hej\"@sv ;\n"
        "  ex:typed \"2024-02-29\"^^<http://www.w3.org/2001/XMLSchema#date> ;\n"
        "  ex:long \"\"\"line1\nline2\"\"\" .");
    auto has = [&](const std::string& lex, std::string_view dt) {
        for (const auto& t : o.triples)
            if (t.object.is_literal() && t.object.value == lex && t.object.datatype == dt)
                return true;
        return false;
    };
    CHECK(has("42", rdf::vocab::XSD_INTEGER));
    CHECK(has("3.14", rdf::vocab::XSD_DECIMAL));
    CHECK(has("6.02E23", rdf::vocab::XSD_DOUBLE));
    CHECK(has("-7", rdf::vocab::XSD_INTEGER));
    CHECK(has("true", rdf::vocab::XSD_BOOLEAN));
    CHECK(has("plain", rdf::vocab::XSD_STRING));
    CHECK(has("single", rdf::vocab::XSD_STRING));
    CHECK(has("2024-02-29", "http://www.w3.org/2001/XMLSchema#date"));
    CHECK(has("line1\nline2", rdf::vocab::XSD_STRING));
    bool lang_ok = false;
    for (const auto& t : o.triples)
        if (t.object.is_literal() && t.object.lang == "sv" && t.object.value == "hej") lang_ok = true;
    CHECK(lang_ok);
}

TEST_CASE("collections expand to first/rest chains") {
    auto o = rdf::parse_turtle(
        "@prefix ex: <http://ex.org/> .\n"
        "ex:l ex:items ( ex:a ex:b ) .");
    int first = 0, rest = 0, nil = 0;
    for (const auto& t : o.triples) {
        if (t.predicate.value == rdf::vocab::RDF_FIRST) ++first;
        if (t.predicate.value == rdf::vocab::RDF_REST) {
            ++rest;
            if (t.object.is_iri() && t.object.value == rdf::vocab::RDF_NIL) ++nil;
        }
    }
    CHECK(first == 2);
    CHECK(rest == 2);
    CHECK(nil == 1);
    CHECK(o.size() == 5);
}

TEST_CASE("blank node property lists and anonymous ids") {
    auto o = rdf::parse_turtle(
        "@prefix ex: <http://ex.org/> .\n"
        "ex:A ex:p [ ex:q ex:B ; ex:r [ ex:s ex:C ] ] .");
    CHECK(rdf::blank_ids(o).size() == 2);
    // duplicate statements collapse
    auto o2 = rdf::parse_turtle(
        "@prefix ex: <http://ex.org/> .\n"
        "ex:A ex:p ex:B . ex:A ex:p ex:B .");
    CHECK(o2.size() == 1);
}

TEST_CASE("explicit anon-style labels do not collide with minted ids") {
    auto o = rdf::parse_turtle(
        "@prefix ex: <http://ex.org/> .\n"
        "_:anon0 ex:p ex:B .\n"
        "ex:A ex:q [ ex:r ex:C ] .");
    CHECK(rdf::blank_ids(o).size() == 2);
}

TEST_CASE("ontology header recovery") {
    auto one = rdf::parse_turtle(
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
        "<http://ex.org/onto> a owl:Ontology .");
    REQUIRE(one.ontology_iri.has_value());
    CHECK(one.ontology_iri->value == "http://ex.org/onto");

    auto two = rdf::parse_turtle(
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
        "<http://ex.org/a> a owl:Ontology .\n"
        "<http://ex.org/b> a owl:Ontology .");
    CHECK(!two.ontology_iri);
    REQUIRE(two.diagnostics.size() == 1);
    CHECK(two.diagnostics[0].find("MultipleOntologyHeaders") != std::string::npos);
}

TEST_CASE("sparql-style PREFIX and base resolution") {
    auto o = rdf::parse_turtle(
        "PREFIX ex: <http://ex.org/>\n"
        "@base <http://ex.org/doc> .\n"
        "ex:A ex:p <#frag> .");
    bool found = false;
    for (const auto& t : o.triples)
        if (t.object.is_iri() && t.object.value == "http://ex.org/doc#frag") found = true;
    CHECK(found);

    CHECK_THROWS_AS(rdf::parse_turtle("<rel> <p> <o> ."), rdf::SyntaxError);
}

TEST_CASE("compact statements without space before the terminating dot") {
    auto o = rdf::parse_turtle(
        "@prefix ex: <http://ex.org/> .\n"
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
        "ex:A a ex:B. ex:C a ex:D.\n"
        "ex:E ex:count 42. ex:F ex:ratio 3.5. ex:G ex:flag true.");
    CHECK(o.size() == 5);
    bool int_ok = false, dec_ok = false;
    for (const auto& t : o.triples) {
        if (t.object.is_literal() && t.object.value == "42" &&
            t.object.datatype == rdf::vocab::XSD_INTEGER)
            int_ok = true;
        if (t.object.is_literal() && t.object.value == "3.5" &&
            t.object.datatype == rdf::vocab::XSD_DECIMAL)
            dec_ok = true;
    }
    CHECK(int_ok);
    CHECK(dec_ok);
}

TEST_CASE("syntax errors carry position") {
    try {
        rdf::parse_turtle("@prefix ex: <http://ex.org/> .\nex:A ex:p .");
        FAIL("expected SyntaxError");
    } catch (const rdf::SyntaxError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("serialization is deterministic and sorted") {
    auto text =
        "@prefix ex: <http://ex.org/> .\n"
        "ex:B ex:p ex:C . ex:A ex:p ex:B .";
    auto o = rdf::parse_turtle(text);
    auto s1 = rdf::serialize_turtle(o);
    auto s2 = rdf::serialize_turtle(o);
    CHECK(s1 == s2);
    CHECK(s1.find("ex:A") < s1.find("ex:B ex:p"));
}

TEST_CASE("serializing an empty ontology yields only prefix declarations") {
    rdf::Ontology o;
    CHECK(rdf::serialize_turtle(o).empty());
    o.prefixes["ex"] = "http://ex.org/";
    CHECK(rdf::serialize_turtle(o) == "@prefix ex: <http://ex.org/> .\n");
}

TEST_CASE("round-trip over every bundled turtle fixture") {
    namespace fs = std::filesystem;
    int checked = 0;
    for (const auto& entry : fs::recursive_directory_iterator(testutil::fixtures())) {
        if (!entry.is_regular_file() || entry.path().extension() != ".ttl") continue;
        auto text = support::read_text(entry.path());
        INFO("fixture: " << entry.path().string());
        auto first = rdf::parse_turtle(text);
        auto second = rdf::parse_turtle(rdf::serialize_turtle(first));
        CHECK(rdf::triple_set_equal(first, second));
        ++checked;
    }
    CHECK(checked > 20);
}
