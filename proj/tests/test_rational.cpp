#include <catch2/catch_amalgamated.hpp>

#include "tropgw/rational.hpp"

using namespace tropgw;

TEST_CASE("parse and format round-trip") {
    CHECK(to_string(parse_rat("21/4")) == "21/4");
    CHECK(to_string(parse_rat("-9/2")) == "-9/2");
    CHECK(to_string(parse_rat("7")) == "7");
    CHECK(to_string(parse_rat("-0")) == "0");
    CHECK(parse_rat("6/4") == Rat(3, 2));
    CHECK(to_string(parse_rat("6/4")) == "3/2"); // canonical reduced form
}

TEST_CASE("bad input rejected") {
    CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
}

TEST_CASE("exact arithmetic") {
    Rat a(1, 3), b(1, 6);
    CHECK(a + b == Rat(1, 2));
    CHECK(is_integer(Rat(8, 4)));
    CHECK(!is_integer(Rat(1, 3)));
    // no silent overflow: big values stay exact
    Rat big = Rat(1);
    for (int i = 0; i < 40; ++i) big *= Rat(1000000007);
    CHECK(big * Rat(1, 7) * Rat(7) == big);
}
