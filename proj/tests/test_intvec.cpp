#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tropgw/intvec.hpp"

using namespace tropgw;

TEST_CASE("pairing is antisymmetric and bilinear") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-20, 20);
    for (int i = 0; i < 200; ++i) {
        IntVec2 v{d(rng), d(rng)}, w{d(rng), d(rng)}, u{d(rng), d(rng)};
        CHECK(pairing(v, w) == -pairing(w, v));
        CHECK(pairing(v + u, w) == pairing(v, w) + pairing(u, w));
    }
}

TEST_CASE("primitive divides out the gcd") {
    CHECK(primitive({6, -9}) == IntVec2{2, -3});
    CHECK(primitive({0, -4}) == IntVec2{0, -1});
    CHECK(content({6, -9}) == 3);
    CHECK_THROWS(primitive({0, 0}));
}

TEST_CASE("matrix algebra") {
    Mat2 m{2, 1, -1, 0};
    CHECK(m.det() == 1);
    CHECK(m.trace() == 2);
    CHECK(is_focus_focus(m));
    CHECK(m.mul(m.inverse()).is_identity());
    CHECK(m.apply({0, 1}) == IntVec2{1, 0});
    CHECK(invariant_direction(m) == IntVec2{1, -1});
    CHECK(!is_focus_focus(Mat2::identity()));
}

TEST_CASE("ccw ordering sweeps all directions once") {
    std::vector<IntVec2> dirs = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-2, -1}, {0, -1}, {2, -1}};
    CcwFrom cmp{{3, 1}};
    std::sort(dirs.begin(), dirs.end(), cmp);
    // starting just after (3,1): first (1,1), then ccw around
    std::vector<IntVec2> want = {{1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-2, -1}, {0, -1}, {2, -1}, {1, 0}};
    CHECK(dirs == want);
}

TEST_CASE("unipotent index distinguishes conjugacy classes") {
    Mat2 m9{1, 9, 0, 1};
    CHECK(unipotent_index(m9) == 9);
    Mat2 conj{2, 1, 1, 1};               // some SL2 element
    Mat2 c = conj.mul(m9).mul(conj.inverse());
    CHECK(c.det() == 1);
    CHECK(c.trace() == 2);
    CHECK(unipotent_index(c) == 9);
}
