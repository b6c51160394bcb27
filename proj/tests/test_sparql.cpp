#include <doctest.h>

#include "ontodraft/rdf/turtle_parser.hpp"
#include "ontodraft/sparql/query_terms.hpp"
#include "ontodraft/support/io.hpp"
#include "test_util.hpp"

using namespace ontodraft;

static rdf::Ontology book_gold() {
    return rdf::parse_turtle(
        support::read_text(testutil::fixtures() / "cases/book/gold/cq01.ttl"));
}

TEST_CASE("book validation query yields the three required terms") {
    auto gold = book_gold();
    auto query = support::read_text(testutil::fixtures() / "cases/book/queries/cq01.rq");
    auto terms = sparql::extract_required_terms(query, gold);
    REQUIRE(terms.size() == 3);
    CHECK(terms[0] == sparql::RequiredTerm{"http://example.org/book#Author",
                                           rdf::ElementKind::Class});
    CHECK(terms[1] == sparql::RequiredTerm{"http://example.org/book#Book",
                                           rdf::ElementKind::Class});
    CHECK(terms[2] == sparql::RequiredTerm{"http://example.org/book#hasAuthor",
                                           rdf::ElementKind::ObjectProperty});
}

TEST_CASE("ASK query over a single class") {
    auto terms = sparql::extract_required_terms(
        "PREFIX ex: <http://example.org/book#> ASK { ?x a ex:Book }", book_gold());
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].iri == "http://example.org/book#Book");
    CHECK(terms[0].kind == rdf::ElementKind::Class);
}

TEST_CASE("term outside the gold signature is unclassifiable") {
    CHECK_THROWS_AS(sparql::extract_required_terms(
                        "PREFIX ex: <http://example.org/book#> ASK { ?x a ex:Unknown }",
                        book_gold()),
                    sparql::UnclassifiableTermError);
}

TEST_CASE("standard vocabulary terms are excluded, not errors") {
    auto terms = sparql::extract_required_terms(
        "PREFIX ex: <http://example.org/book#>\n"
        "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
        "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n"
        "SELECT ?b WHERE { ?b rdf:type ex:Book . FILTER(?d > \"2000-01-01\"^^xsd:date) }",
        book_gold());
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].iri == "http://example.org/book#Book");
}

TEST_CASE("filter comparison operators survive the scan") {
    auto terms = sparql::extract_required_terms(
        "PREFIX ex: <http://example.org/book#>\n"
        "SELECT ?b WHERE { ?b a ex:Book . FILTER(?n < 5 && ?m > 2) }",
        book_gold());
    REQUIRE(terms.size() == 1);
}

TEST_CASE("syntax errors") {
    CHECK_THROWS_AS(sparql::extract_required_terms("DESCRIBE <http://x>", book_gold()),
                    sparql::QuerySyntaxError);
    CHECK_THROWS_AS(sparql::extract_required_terms("SELECT ?x WHERE { ?x a ex:Book }",
                                                   book_gold()),
                    sparql::QuerySyntaxError);  // undeclared prefix
    CHECK_THROWS_AS(sparql::extract_required_terms(
                        "PREFIX ex: <http://example.org/book#> SELECT ?x WHERE { ?x a ex:Book",
                        book_gold()),
                    sparql::QuerySyntaxError);  // unbalanced braces
    CHECK_THROWS_AS(sparql::extract_required_terms(
                        "PREFIX ex: <http://example.org/book#> SELECT ?x", book_gold()),
                    sparql::QuerySyntaxError);  // no group pattern
}

TEST_CASE("optional and union blocks are walked") {
    auto terms = sparql::extract_required_terms(
        "PREFIX ex: <http://example.org/book#>\n"
        "SELECT ?a WHERE { { ?b a ex:Book } UNION { ?b ex:hasAuthor ?a . "
        "OPTIONAL { ?a a ex:Author } } }",
        book_gold());
    CHECK(terms.size() == 3);
}
