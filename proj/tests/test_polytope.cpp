#include "fixtures.hpp"
#include "helpers.hpp"
#include "oracles/polytope_oracles.hpp"

#include "fanolab/linalg.hpp"
#include "fanolab/polytope.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace fanolab;
using th::iv;
using th::rv;

namespace {

std::set<RatVector, bool (*)(const RatVector&, const RatVector&)> as_set(const std::vector<RatVector>& v) {
    return {v.begin(), v.end(), &lex_less<Rational>};
}

}  // namespace

TEST_CASE("hull of the cube corners") {
    std::vector<IntVector> pts;
    for (int a : {-1, 1})
        for (int b : {-1, 1})
            for (int c : {-1, 1}) pts.push_back(iv({a, b, c}));
    pts.push_back(iv({0, 0, 0}));
    pts.push_back(iv({1, 0, 0}));
    auto h = convex_hull(pts);
    CHECK(h.vertices.size() == 8);
    CHECK(h.facets.size() == 6);
    for (const auto& f : h.facets) CHECK(f.vertices.size() == 4);
}

TEST_CASE("hull reports the affine rank of degenerate input") {
    try {
        convex_hull(th::rows({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}));
        FAIL("expected an error");
    } catch (const DegenerateHull& e) {
        CHECK(e.affine_rank() == 1);
    }
}

TEST_CASE("hull of a random point cloud agrees with the simplex-cover oracle") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coord(-4, 4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<RatVector> pts;
        for (int i = 0; i < 10; ++i) pts.push_back(to_rational(iv({coord(rng), coord(rng), coord(rng)})));
        RationalPolytope h;
        try {
            h = convex_hull(pts);
        } catch (const DegenerateHull&) {
            continue;
        }
        for (const auto& p : pts) CHECK(h.contains(p));
        auto vs = as_set(h.vertices);
        for (const auto& p : pts) {
            std::vector<RatVector> others;
            for (const auto& o : pts)
                if (o != p) others.push_back(o);
            bool vertex = vs.count(p) > 0;
            CHECK(vertex == !oracle::in_hull_caratheodory(others, p));
        }
    }
}

TEST_CASE("hull with large coordinates and many denominators") {
    // scaled by 2^40 the integral path overflows 24 bits and the exact path takes over
    std::vector<RatVector> cube, big, fine;
    Rational s = Rational(Integer(1) << 40);
    for (long x : {-1, 1})
        for (long y : {-1, 1})
            for (long z : {-1, 1}) {
                cube.push_back(to_rational(iv({x, y, z})));
                big.push_back(scale(s, cube.back()));
            }
    long primes[] = {101, 103, 107, 109, 113, 127, 131, 137};
    for (std::size_t i = 0; i < cube.size(); ++i) fine.push_back(scale(Rational(primes[i] + 1) / primes[i], cube[i]));
    fine.push_back(rv({"0", "0", "0"}));
    auto a = convex_hull(cube), b = convex_hull(big), c = convex_hull(fine);
    CHECK(as_set(b.vertices) == as_set(big));
    CHECK(b.facets.size() == 6);
    for (const auto& f : b.facets) CHECK(f.offset == -s);
    CHECK(c.vertices.size() == 8);
    for (const auto& f : a.facets) CHECK(f.offset == -1);
    for (const auto& p : fine) CHECK(c.contains(p));
}

TEST_CASE("vertex set of lower-dimensional input") {
    CHECK(vertex_set({rv({"0", "0", "0"})}).size() == 1);
    auto seg = vertex_set({rv({"0", "0", "0"}), rv({"1", "1", "1"}), rv({"2", "2", "2"})});
    CHECK(as_set(seg) == as_set({rv({"0", "0", "0"}), rv({"2", "2", "2"})}));
    auto sq = vertex_set({rv({"0", "0", "1"}), rv({"1", "0", "1"}), rv({"0", "1", "1"}), rv({"1", "1", "1"}),
                          rv({"1/2", "1/2", "1"})});
    CHECK(sq.size() == 4);
}

TEST_CASE("polar of the four-vertex Fano polytope") {
    auto p = fx::tetra_z2z8();
    auto q = polar(p);
    CHECK(as_set(q.vertices) ==
          as_set({rv({"-1", "0", "3/2"}), rv({"-1", "1", "0"}), rv({"3", "-1", "-2"}), rv({"-1", "0", "1/2"})}));
}

TEST_CASE("polar of the quartic simplex matches the facet-system oracle") {
    auto p = fx::quartic_simplex();
    auto q = polar(p);
    std::vector<RatVector> simplex;
    for (const auto& v : p.vertices()) simplex.push_back(to_rational(v));
    CHECK(as_set(q.vertices) == as_set(oracle::polar_of_simplex(simplex)));
    CHECK(as_set(q.vertices) ==
          as_set({rv({"1", "0", "0"}), rv({"0", "1", "0"}), rv({"0", "0", "1"}), rv({"-1", "-1", "-1"})}));
}

TEST_CASE("polar of the cross-polytope is the cube") {
    auto q = polar(fx::cross_polytope());
    CHECK(q.vertices.size() == 8);
    for (const auto& v : q.vertices)
        for (const auto& x : v) CHECK(abs(x) == 1);
}

TEST_CASE("polar is an involution on Fano polytopes") {
    for (const auto& p : {fx::tetra_z2z8(), fx::octa_z2(), fx::octa_z2z4(), fx::quartic_simplex()}) {
        auto qq = polar(polar(p));
        std::vector<RatVector> orig;
        for (const auto& v : p.vertices()) orig.push_back(to_rational(v));
        CHECK(as_set(qq.vertices) == as_set(orig));
    }
}

TEST_CASE("barycentres") {
    std::vector<IntVector> cube;
    for (int a : {-1, 1})
        for (int b : {-1, 1})
            for (int c : {-1, 1}) cube.push_back(iv({a, b, c}));
    CHECK(is_zero(barycentre(convex_hull(cube))));
    CHECK(barycentre(convex_hull(th::rows({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}))) ==
          rv({"1/4", "1/4", "1/4"}));
    CHECK(is_zero(barycentre(polar(fx::tetra_z2z8()))));
}

TEST_CASE("toric polystability check") {
    CHECK(kps_toric_check(fx::tetra_z2z8()).polystable);
    CHECK(kps_toric_check(fx::octa_z2()).polystable);
    CHECK(kps_toric_check(fx::octa_z2z4()).polystable);
    auto bad = kps_toric_check(FanoPolytope(th::rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -2}})));
    CHECK_FALSE(bad.polystable);
    CHECK_FALSE(is_zero(bad.barycentre));
}

TEST_CASE("anticanonical degree") {
    CHECK(anticanonical_degree(fx::tetra_z2z8()) == 4);
    CHECK(anticanonical_degree(fx::quartic_simplex()) == 4);
    CHECK(anticanonical_degree(fx::cross_polytope()) == 48);
    CHECK(anticanonical_degree(fx::projective_space()) == 64);
}

TEST_CASE("two volume paths agree") {
    for (const auto& p : {fx::tetra_z2z8(), fx::octa_z2(), fx::octa_z2z4(), fx::quartic_simplex(), fx::cross_polytope()}) {
        auto q = polar(p);
        CHECK(volume(q) == volume_by_facet_pyramids(q));
        CHECK(volume(p.hull()) == volume_by_facet_pyramids(p.hull()));
    }
}

TEST_CASE("Fano validation") {
    CHECK_THROWS_AS(FanoPolytope(th::rows({{2, 0}, {0, 1}, {-1, -1}})), ComputationError);
    CHECK_THROWS_AS(FanoPolytope(th::rows({{1, 0}, {0, 1}, {1, 1}})), ComputationError);
    CHECK_THROWS_AS(FanoPolytope(th::rows({{1, 0}, {0, 1}, {-1, -1}, {0, 0}})), ComputationError);
}

TEST_CASE("normal form") {
    auto p = fx::tetra_z2z8();
    auto nf = gl_normal_form(p);
    CHECK(gl_normal_form(nf) == nf);
    IntMatrix g = IntMatrix::from_rows(th::rows({{1, 2, 0}, {0, 1, 3}, {1, 2, 1}}));
    REQUIRE(abs(g.determinant()) == 1);
    std::vector<IntVector> image;
    for (const auto& v : p.vertices()) image.push_back(g * v);
    std::reverse(image.begin(), image.end());
    CHECK(gl_normal_form(FanoPolytope(image)) == nf);
    CHECK_FALSE(gl_normal_form(fx::quartic_simplex()) == nf);
    CHECK(anticanonical_degree(nf) == anticanonical_degree(p));
    for (const auto& w : gl_normal_form_with_transforms(p).transforms) {
        std::set<IntVector, bool (*)(const IntVector&, const IntVector&)> a(&lex_less<Integer>), b(&lex_less<Integer>);
        for (const auto& v : p.vertices()) a.insert(w * v);
        for (const auto& v : nf.vertices()) b.insert(v);
        CHECK(a == b);
    }
}

TEST_CASE("lattice points") {
    CHECK(lattice_points(fx::projective_space().hull()).size() == 5);
    CHECK(lattice_points(polar(fx::tetra_z2z8())).size() == 5);
}
