#include <catch2/catch_amalgamated.hpp>

#include "tropgw/broken.hpp"

using namespace tropgw;

namespace {
std::vector<IntVec2> toy_entries() { return {{1, 0}, {0, 1}}; }
} // namespace

TEST_CASE("toy diagram: chamber past both walls sees x, y and the bent xy line") {
    ScatteringDiagram d = complete(toy_two_wall_diagram(2), 2);
    RatPoint u{Rat(3), Rat(-1)};
    auto lines = enumerate_broken_lines(d, u, 2, toy_entries());
    REQUIRE(lines.size() == 3);
    Superpotential w = superpotential(d, u, 2, toy_entries());
    CHECK(w.terms.at({{1, 0}, 1}) == 1);
    CHECK(w.terms.at({{0, 1}, 1}) == 1);
    CHECK(w.terms.at({{1, 1}, 2}) == 1);
    CHECK(n_trop(d, u, {{1, 1}, 2}, 2, toy_entries()) == 1);
    CHECK(n_trop(d, u, {{5, 5}, 2}, 2, toy_entries()) == 0);
}

TEST_CASE("toy diagram: first quadrant far from the walls sees only x and y") {
    ScatteringDiagram d = complete(toy_two_wall_diagram(2), 2);
    Superpotential w = superpotential(d, {Rat(1), Rat(3)}, 2, toy_entries());
    REQUIRE(w.terms.size() == 2);
    CHECK(w.terms.at({{1, 0}, 1}) == 1);
    CHECK(w.terms.at({{0, 1}, 1}) == 1);
}

TEST_CASE("chamber constancy within one chamber") {
    ScatteringDiagram d = complete(toy_two_wall_diagram(3), 3);
    Superpotential w1 = superpotential(d, {Rat(3), Rat(-1)}, 3, toy_entries());
    Superpotential w2 = superpotential(d, {Rat(7, 2), Rat(-1, 3)}, 3, toy_entries());
    CHECK(w1.terms == w2.terms);
}

TEST_CASE("wall-crossing covariance in the toy diagram") {
    ScatteringDiagram d = complete(toy_two_wall_diagram(2), 2);
    // across the x-axis wall
    const Ray* xwall = nullptr;
    for (auto& r : d.rays)
        if (r.dir == IntVec2{1, 0}) xwall = &r;
    REQUIRE(xwall);
    CHECK(wallcross_check(d, {Rat(3), Rat(1, 4)}, {Rat(3), Rat(-1, 4)}, xwall->id, 2,
                          toy_entries()));
    // across the scattered (1,1) ray
    const Ray* diag = nullptr;
    for (auto& r : d.rays)
        if (r.dir == IntVec2{1, 1}) diag = &r;
    REQUIRE(diag);
    CHECK(wallcross_check(d, {Rat(2), Rat(9, 4)}, {Rat(9, 4), Rat(2)}, diag->id, 2,
                          toy_entries()));
    // same-chamber pair does not straddle the wall
    CHECK_THROWS_AS(
        wallcross_check(d, {Rat(3), Rat(1, 4)}, {Rat(3), Rat(1, 2)}, xwall->id, 2, toy_entries()),
        NotAdjacent);
}

TEST_CASE("endpoint validation") {
    ScatteringDiagram d = complete(toy_two_wall_diagram(2), 2);
    CHECK_THROWS_AS(enumerate_broken_lines(d, {Rat(3), Rat(0)}, 2, toy_entries()),
                    EndpointOnWall);
    ScatteringDiagram p2 = initial_diagram(cps_p2_base(), 1);
    CHECK_THROWS_AS(enumerate_broken_lines(p2, {Rat(1), Rat(1)}, 1),
                    EndpointInDiscardedSector);
    CHECK_THROWS_AS(enumerate_broken_lines(p2, {Rat(1, 2), Rat(1, 2)}, 1),
                    EndpointInDiscardedSector);
}

TEST_CASE("near infinity a single entry line represents its class") {
    // far out in the x-wedge of the P2 chart with a small budget, the only
    // broken line is the straight invariant-direction entry
    ScatteringDiagram d = complete(initial_diagram(cps_p2_base(), 2), 2);
    Superpotential w = superpotential(d, {Rat(15, 2), Rat(1, 5)}, 1);
    REQUIRE(w.terms.size() == 1);
    CHECK(w.terms.begin()->first == ClassExponent{{1, 0}, 1});
    CHECK(w.terms.begin()->second == 1);
}
