#include <catch2/catch_amalgamated.hpp>

#include "tropgw/affine_base.hpp"
#include "tropgw/trace.hpp"

using namespace tropgw;

TEST_CASE("cps base data matches the chart-with-cuts presentation") {
    AffineBase b = cps_p2_base();
    REQUIRE(b.sings.size() == 3);
    const auto &u1 = b.sings[0], &u2 = b.sings[1], &u3 = b.sings[2];

    CHECK(u1.position == RatPoint{Rat(1, 2), Rat(1, 2)});
    CHECK(u2.position == RatPoint{Rat(0), Rat(-1, 2)});
    CHECK(u3.position == RatPoint{Rat(-1, 2), Rat(0)});

    for (auto& s : b.sings) {
        CHECK(s.matrix.det() == 1);
        CHECK(s.matrix.trace() == 2);
        CHECK(s.matrix.apply(s.cut_plus) == s.cut_minus);
        CHECK(is_focus_focus(s.matrix));
    }
    // invariant directions from ker(M - I), fixed by hand
    CHECK(invariant_direction(u1.matrix) == IntVec2{1, -1});
    CHECK(invariant_direction(u2.matrix) == IntVec2{2, 1});
    CHECK(invariant_direction(u3.matrix) == IntVec2{1, 2});
}

TEST_CASE("cross_cut applies the gluing matrix by orientation") {
    AffineBase b = cps_p2_base();
    CHECK(cross_cut({0, 1}, b.sings[0], +1) == IntVec2{1, 0});
    CHECK(cross_cut({1, -1}, b.sings[0], +1) == IntVec2{1, -1}); // invariant dir fixed
    CHECK(cross_cut({1, 0}, b.sings[1], +1) == IntVec2{-1, -1});
    IntVec2 v{5, -3};
    CHECK(cross_cut(cross_cut(v, b.sings[2], +1), b.sings[2], -1) == v);
}

TEST_CASE("regions of the chart") {
    AffineBase b = cps_p2_base();
    CHECK(b.region_of({Rat(1), Rat(-1, 4)}) == Region::X);
    CHECK(b.region_of({Rat(-1, 4), Rat(-1, 4)}) == Region::XYInv);
    CHECK(b.region_of({Rat(-1, 4), Rat(1)}) == Region::Y);
    CHECK_THROWS_AS(b.region_of({Rat(0), Rat(0)}), OnBoundary); // common corner
    CHECK_THROWS_AS(b.region_of({Rat(1, 4), Rat(1, 4)}), OnBoundary);
}

TEST_CASE("scale pairings per region") {
    AffineBase b = cps_p2_base();
    CHECK(AffineBase::scale({3, 1}, Region::X) == 3);
    CHECK(AffineBase::scale({0, 1}, Region::X) == 0);
    CHECK(AffineBase::scale({0, 2}, Region::Y) == 2);
    CHECK(AffineBase::scale({-1, -2}, Region::XYInv) == 3);
    // transport from the 1/xy-region into the x-region across the u2 cut:
    // v = (a,b) with 0 < -a < -b gains scale 3a-4b >= 4 and never decreases
    for (std::int64_t a = -1; a >= -5; --a) {
        for (std::int64_t b = a - 1; b >= a - 5; --b) {
            IntVec2 v{a, b};
            IntVec2 w = cps_p2_base().sings[1].matrix.inverse().apply(v);
            CHECK(w.x == 3 * a - 4 * b);
            CHECK(w.x >= 4);
            if (-a <= 3 && -b <= 4) // the paper's basic range: non-decreasing scale
                CHECK(AffineBase::scale(w, Region::X) >=
                      AffineBase::scale(v, Region::XYInv));
        }
    }
}

TEST_CASE("loop monodromy around one singularity is focus-focus") {
    AffineBase b = cps_p2_base();
    for (int i = 0; i < 3; ++i) {
        Mat2 m = loop_monodromy(b, {i}, {5, 1});
        CHECK(m.det() == 1);
        CHECK(m.trace() == 2);
        CHECK(!m.is_identity());
        CHECK(unipotent_index(m) == 1);
    }
}

TEST_CASE("total monodromy is conjugate to [[1,9],[0,1]]") {
    Mat2 m = total_monodromy(cps_p2_base());
    CHECK(m.det() == 1);
    CHECK(m.trace() == 2);
    CHECK(!m.is_identity());
    CHECK(unipotent_index(m) == 9);
}

TEST_CASE("transport along displacement paths") {
    AffineBase b = cps_p2_base();
    // no crossings: identity
    CHECK(transport(b, {Rat(2), Rat(0)}, {{Rat(1), Rat(0)}, {Rat(0), Rat(1, 4)}}, {3, 7}) ==
          IntVec2{3, 7});
    // tight ccw square loop around u1 crosses its cut exactly once
    RatPoint s{Rat(3, 4), Rat(1, 4)};
    const Rat h(1, 2);
    std::vector<RatVec2> loop = {{Rat(0), h}, {-h, Rat(0)}, {Rat(0), -h}, {h, Rat(0)}};
    Mat2 m1 = b.sings[0].matrix;
    for (IntVec2 v : {IntVec2{1, 0}, {0, 1}, {4, -3}})
        CHECK(transport(b, s, loop, v) == m1.inverse().apply(v));
    // clockwise traversal of the same square inverts the transport
    std::vector<RatVec2> rev = {{-h, Rat(0)}, {Rat(0), h}, {h, Rat(0)}, {Rat(0), -h}};
    IntVec2 v{2, 5};
    CHECK(transport(b, s, rev, m1.inverse().apply(v)) == v);
}

TEST_CASE("paths through a singular point are rejected") {
    AffineBase b = cps_p2_base();
    CHECK_THROWS_AS(
        transport(b, {Rat(0), Rat(0)}, {{Rat(1), Rat(1)}}, {1, 0}),
        PathThroughSingularity);
}
