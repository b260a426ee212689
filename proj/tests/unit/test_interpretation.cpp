#include <doctest.h>

#include "sloop/interpretation.hpp"
#include "sloop/parser.hpp"

using namespace sloop;

TEST_SUITE("interpretation") {

TEST_CASE("text form round-trips") {
    const char* text =
        "universe a b c.\n"
        "const k = b.\n"
        "fn f(a) = b. fn f(b) = c. fn f(c) = a.\n"
        "pred p/2 = { (a,b), (c,c) }.\n"
        "pred q/0 = { () }.\n";
    Interpretation i = parse_interpretation(text);
    CHECK(i.size() == 3);
    CHECK(i.constant("k") == 1);
    CHECK(i.apply_function("f", {2}) == 0);
    CHECK(i.holds("p", {0, 1}));
    CHECK_FALSE(i.holds("p", {1, 0}));
    CHECK(i.holds("q", {}));
    Interpretation again = parse_interpretation(to_string(i));
    CHECK(again == i);
}

TEST_CASE("tuple indexing is row-major over the universe") {
    Interpretation i({"a", "b", "c"});
    CHECK(i.tuple_count(2) == 9);
    for (std::size_t k = 0; k < 9; ++k) CHECK(i.tuple_index(i.tuple_at(2, k)) == k);
    CHECK(i.tuple_at(2, 5) == std::vector<int>{1, 2});
}

TEST_CASE("reader validation") {
    CHECK_THROWS_AS(parse_interpretation("universe a. fn f(a) = b."), Error);
    CHECK_THROWS_AS(parse_interpretation("universe a b. fn f(a) = b."), Error);  // not total
    CHECK_THROWS_AS(parse_interpretation("universe a a."), Error);
    CHECK_THROWS_AS(parse_interpretation("pred p = {}."), Error);
    Interpretation i = parse_interpretation("universe e0 e1. pred p = { e0, e1 }.");
    CHECK(i.holds("p", {1}));
}

TEST_CASE("arity clashes are signature errors") {
    Interpretation i({"a"});
    i.declare_predicate("p", 1);
    CHECK_THROWS_AS(i.declare_predicate("p", 2), Error);
}

TEST_CASE("equational theory on finite structures") {
    Interpretation i({"a", "b"});
    i.set_constant("a", 0);
    i.set_constant("b", 1);
    CHECK(cet_check(i));
    i.set_constant("c", 0);
    CHECK_FALSE(cet_check(i));
    Interpretation j({"a"});
    j.set_function("f", 1, {0});
    CHECK_FALSE(cet_check(j));
}

TEST_CASE("compact form lists true atoms per predicate") {
    Interpretation i = parse_interpretation("universe a b. pred p/1 = { (a) }. pred r/1 = {}.");
    CHECK(to_compact_string(i) == "p={(a)}, r={}");
}

}  // TEST_SUITE
