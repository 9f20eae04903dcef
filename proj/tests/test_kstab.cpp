#include "fanolab/kstab.hpp"
#include "fanolab/kstab_io.hpp"

#include "helpers.hpp"
#include "oracles/surface_oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace fanolab;
using th::q;

namespace {

io::SurfaceFile no29() { return io::load_surface(th::data_path("surfaces/no29.json")); }
io::SurfaceFile no33() { return io::load_surface(th::data_path("surfaces/no33.json")); }

DivisorClass cls(const io::SurfaceFile& s, const char* text) { return io::parse_divisor(text, s); }

oracle::FloatSurface to_float(const SurfaceModel& s) {
    oracle::FloatSurface f;
    for (const auto& row : s.gram()) {
        std::vector<double> r;
        for (const auto& x : row) r.push_back(x.get_d());
        f.gram.push_back(r);
    }
    return f;
}

std::vector<double> to_float(const DivisorClass& d) {
    std::vector<double> out;
    for (const auto& x : d) out.push_back(x.get_d());
    return out;
}

std::vector<Rational> poly(std::initializer_list<const char*> c) { return th::rv(c); }

// Checks the defining properties of a Zariski decomposition.
void check_zariski(const SurfaceModel& s, const DivisorClass& d, const ZariskiDecomposition& z) {
    DivisorClass sum = z.positive;
    std::vector<std::size_t> support;
    for (const auto& [c, x] : z.negative) {
        CHECK(x > 0);
        sum[c] += x;
        support.push_back(c);
        CHECK(s.degrees(z.positive)[c] == 0);
    }
    CHECK(is_zero(s.degrees(sub(sum, d))));
    CHECK(s.is_nef(z.positive));
    CHECK(z.volume == s.intersect(z.positive, z.positive));
    RatMatrix g;
    for (auto i : support) {
        RatVector row;
        for (auto j : support) row.push_back(s.gram()[i][j]);
        g.push_back(row);
    }
    for (std::size_t k = 1; k <= g.size(); ++k) {
        RatMatrix m(k, RatVector(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m[i][j] = g[i][j];
        Rational det = determinant(m);
        CHECK(((k % 2 == 1) ? det < 0 : det > 0));
    }
}

}  // namespace

TEST_CASE("surface model validation") {
    CHECK_THROWS_AS(SurfaceModel({"A", "B"}, {th::rv({"-1", "1"}), th::rv({"0", "-1"})}, {"A"}, std::nullopt),
                    InputError);
    CHECK_THROWS_AS(SurfaceModel({"A"}, {th::rv({"-1"})}, {"Z"}, std::nullopt), InputError);
    CHECK_THROWS_AS(SurfaceModel({"A"}, {th::rv({"-1"})}, {"A"}, th::rv({"1"})), InputError);
    CHECK_THROWS_AS(SurfaceModel({"A", "A"}, {th::rv({"0", "0"}), th::rv({"0", "0"})}, {"A"}, std::nullopt),
                    InputError);

    auto s = no29();
    CHECK(s.model.intersect(*s.model.anticanonical(), *s.model.anticanonical()) == 4);
    auto t = no33();
    CHECK(t.model.intersect(*t.model.anticanonical(), *t.model.anticanonical()) == 4);
    // pullbacks of O(2) agree numerically
    CHECK(is_zero(t.model.degrees(sub(cls(t, "C1 + E1"), cls(t, "C2 + E2")))));
    CHECK(is_zero(t.model.degrees(sub(cls(t, "-K"), cls(t, "2 B + E1 + E2")))));
}

TEST_CASE("divisor expressions") {
    auto s = no29();
    CHECK(cls(s, "2 C + 1/2 B' - C'") == th::rv({"2", "-1", "0", "1/2"}));
    CHECK(cls(s, "-K - 3/2*C") == th::rv({"1/2", "2", "0", "0"}));
    CHECK(cls(s, "Db") == th::rv({"0", "0", "0", "2"}));
    CHECK_THROWS_WITH_AS(cls(s, "2 X"), "divisor '2 X': unknown name 'X' at column 3", InputError);
    CHECK_THROWS_AS(cls(s, "C C'"), InputError);
    CHECK_THROWS_AS(cls(s, ""), InputError);
    CHECK(s.model.format(cls(s, "2 C - 1/2 B'")) == "2 C - 1/2 B'");
}

TEST_CASE("No. 29 Zariski decompositions and thresholds") {
    auto s = no29();
    const auto& m = s.model;
    auto antik = *m.anticanonical();

    auto z = zariski_decompose(m, cls(s, "-K - 3/2 C"));
    check_zariski(m, cls(s, "-K - 3/2 C"), z);
    // positive (1/2)(C + 2C'), negative 1 * C'
    CHECK(is_zero(m.degrees(sub(z.positive, cls(s, "1/2 C + C'")))));
    REQUIRE(z.negative.size() == 1);
    CHECK(z.negative[0].first == m.index("C'"));
    CHECK(z.negative[0].second == 1);

    auto nef = zariski_decompose(m, antik);
    CHECK(nef.negative.empty());
    CHECK(nef.volume == 4);

    CHECK(pseff_threshold(m, antik, cls(s, "C")) == 2);
    CHECK(pseff_threshold(m, antik, cls(s, "B")) == 3);
    CHECK_THROWS_AS(pseff_threshold(m, antik, m.zero()), ComputationError);

    DivisorClass bad = cls(s, "-C");
    CHECK_FALSE(is_pseudo_effective(m, bad));
    try {
        zariski_decompose(m, bad);
        FAIL("expected NotPseudoEffective");
    } catch (const NotPseudoEffective& e) {
        for (auto g : m.mori()) CHECK(m.degrees(e.witness())[g] >= 0);
        CHECK(m.intersect(e.witness(), bad) < 0);
    }
}

TEST_CASE("No. 29 volume functions and S-invariants") {
    auto s = no29();
    const auto& m = s.model;
    auto antik = *m.anticanonical();

    auto vc = volume_fn(m, antik, cls(s, "C"));
    CHECK(vc.breakpoints == th::rv({"0", "1", "2"}));
    REQUIRE(vc.pieces.size() == 2);
    CHECK(vc.pieces[0] == poly({"4", "-2", "-1/2"}));
    CHECK(vc.pieces[1] == poly({"6", "-6", "3/2"}));  // (3/2)(2 - t)^2
    CHECK(vc.to_string() == "[0, 1]: 4 - 2*t - 1/2*t^2; [1, 2]: 6 - 6*t + 3/2*t^2");

    auto vb = volume_fn(m, antik, cls(s, "B"));
    CHECK(vb.breakpoints == th::rv({"0", "2", "3"}));
    REQUIRE(vb.pieces.size() == 2);
    CHECK(vb.pieces[0] == poly({"4", "-2", "1/6"}));
    CHECK(vb.pieces[1] == poly({"6", "-4", "2/3"}));  // (2/3)(3 - t)^2
    // continuity and endpoint values
    CHECK(vb(q("2")) == Rational(2, 3));
    CHECK(vb(q("0")) == 4);
    CHECK(vb(q("3")) == 0);
    CHECK(vb(q("7/2")) == 0);

    CHECK(s_invariant(m, antik, cls(s, "C")) == Rational(5, 6));
    CHECK(s_invariant(m, antik, cls(s, "C'")) == Rational(5, 6));
    CHECK(s_invariant(m, antik, cls(s, "B")) == Rational(7, 6));
    CHECK(s_invariant(m, antik, cls(s, "B'")) == Rational(7, 6));
    CHECK(s_invariant(m, antik, cls(s, "O2")) == Rational(1, 3));
    CHECK(s_invariant(m, antik, cls(s, "Da")) == Rational(1, 3));
    CHECK(s_invariant(m, antik, cls(s, "Db")) == Rational(7, 12));
}

TEST_CASE("volume functions agree with sampled Zariski volumes") {
    auto s = no29();
    const auto& m = s.model;
    auto antik = *m.anticanonical();
    for (const char* f : {"C", "B", "Db"}) {
        DivisorClass fc = cls(s, f);
        auto vf = volume_fn(m, antik, fc);
        Rational tau = vf.breakpoints.back();
        for (int k = 0; k <= 10000; k += 37) {
            Rational t = tau * Rational(k) / Rational(10000);
            CHECK(vf(t) == volume(m, sub(antik, scale(t, fc))));
        }
    }
}

TEST_CASE("No. 33 invariants") {
    auto s = no33();
    const auto& m = s.model;
    auto antik = *m.anticanonical();

    CHECK(s_invariant(m, antik, cls(s, "B")) == Rational(5, 6));
    CHECK(s_invariant(m, antik, cls(s, "F")) == Rational(7, 6));
    CHECK(s_invariant(m, antik, cls(s, "C1")) == Rational(7, 8));
    CHECK(s_invariant(m, antik, cls(s, "C2")) == Rational(7, 8));
    CHECK(s_invariant(m, antik, cls(s, "Qa")) == Rational(7, 12));

    auto v1 = volume_fn(m, antik, cls(s, "C1"));
    CHECK(v1.breakpoints == th::rv({"0", "1", "3/2", "2"}));
    REQUIRE(v1.pieces.size() == 3);
    CHECK(v1.pieces[0] == poly({"4", "-2", "-1/3"}));
    CHECK(v1.pieces[1] == poly({"5", "-4", "2/3"}));
    CHECK(v1.pieces[2] == poly({"8", "-8", "2"}));  // 2(2 - t)^2

    CHECK(pseff_threshold(m, antik, cls(s, "E1")) == Rational(3, 2));

    // -K - (3/2)B: positive part is pi^*O(3/2), negative (1/2)(E1 + E2)
    DivisorClass d = cls(s, "-K - 3/2 B");
    auto z = zariski_decompose(m, d);
    check_zariski(m, d, z);
    CHECK(is_zero(m.degrees(sub(z.positive, cls(s, "1/2 piO3")))));
    REQUIRE(z.negative.size() == 2);
    CHECK(z.negative[0] == std::make_pair(m.index("E1"), Rational(1, 2)));
    CHECK(z.negative[1] == std::make_pair(m.index("E2"), Rational(1, 2)));
}

TEST_CASE("No. 33 S(E1) against the quadrature oracle") {
    auto s = no33();
    const auto& m = s.model;
    auto antik = *m.anticanonical();
    Rational exact = s_invariant(m, antik, cls(s, "E1"));
    double numeric = oracle::s_invariant_numeric(to_float(m), to_float(antik), to_float(cls(s, "E1")));
    CHECK(std::fabs(exact.get_d() - numeric) < 1e-9);
    CHECK(exact == Rational(17, 24));
    CHECK(s_invariant(m, antik, cls(s, "E2")) == exact);
}

TEST_CASE("exact S-invariants agree with the oracle on both surfaces") {
    for (auto s : {no29(), no33()}) {
        const auto& m = s.model;
        auto antik = *m.anticanonical();
        for (const auto& name : m.curves()) {
            DivisorClass f = m.curve(name);
            double numeric = oracle::s_invariant_numeric(to_float(m), to_float(antik), to_float(f));
            CHECK(std::fabs(s_invariant(m, antik, f).get_d() - numeric) < 1e-9);
        }
    }
}

TEST_CASE("valuations, beta and walls") {
    ValuationSpec c8{1, 8, Rational(5, 6)};
    CHECK(beta(Rational(1, 28), 4, c8) == 0);
    CHECK(*wall_solve(c8, 4) == Rational(1, 28));
    CHECK(*wall_solve({1, 7, Rational(5, 6)}, 4) == Rational(1, 22));
    CHECK(*wall_solve({2, 13, Rational(5, 3)}, 4) == Rational(1, 19));
    CHECK(*wall_solve({1, 6, Rational(5, 6)}, 4) == Rational(1, 16));
    CHECK(beta(Rational(1, 19), 4, {1, 6, Rational(5, 6)}) == Rational(1, 38));
    CHECK(beta(Rational(1, 19), 4, {1, 0, Rational(7, 6)}) == Rational(3, 38));
    ValuationSpec v2{2, 5, Rational(7, 3)};
    for (const char* c : {"0", "1/100", "1/16", "1/13", "3/7"})
        CHECK(beta(q(c), 4, v2) == (13 * q(c) - 1) / 3);
    CHECK(beta(0, 4, v2) == v2.beta_without_boundary());
    CHECK_FALSE(wall_solve({1, 4, 1}, 4));

    auto s = no29();
    auto antik = *s.model.anticanonical();
    auto part = [&](const char* w, const char* d) {
        return QuasiMonomialPart{q(w), 1, 1 - s_invariant(s.model, antik, cls(s, d))};
    };
    auto v0 = quasimonomial_combine({part("1", "C"), part("1", "C'")});
    CHECK(v0.A == 2);
    CHECK(v0.S == Rational(5, 3));
    auto v1 = quasimonomial_combine({part("2/3", "B"), part("1/3", "B'")});
    CHECK(v1.A == 1);
    CHECK(v1.S == Rational(7, 6));
    auto v2c = quasimonomial_combine({part("1", "B"), part("1", "B'")});
    CHECK(v2c.A == 2);
    CHECK(v2c.S == Rational(7, 3));
    CHECK_THROWS_AS(quasimonomial_combine({}), ComputationError);
    CHECK_THROWS_AS(quasimonomial_combine({{0, 1, 1}}), ComputationError);

    auto w29 = io::load_walls(th::data_path("valuations/no29_walls.json"));
    auto walls = walls_in_range(w29.valuations, w29.slope, w29.lo, w29.hi);
    std::vector<Rational> cs;
    for (const auto& w : walls) cs.push_back(w.c);
    CHECK(cs == th::rv({"1/28", "1/22", "1/19", "1/16"}));
    CHECK(walls[2].sources.size() == 1);
    CHECK(walls[3].sources.size() == 3);
    // every source valuation has beta = 0 on its wall
    for (const auto& w : walls)
        for (const auto& v : w29.valuations)
            if (std::find(w.sources.begin(), w.sources.end(), v.name) != w.sources.end())
                CHECK(beta(w.c, w29.slope, v.spec) == 0);
    CHECK(walls_in_range(w29.valuations, 4, Rational(1, 16), Rational(1, 16)).empty());
    CHECK_THROWS_AS(walls_in_range({}, 4, 0, 1), ComputationError);

    auto w33 = io::load_walls(th::data_path("valuations/no33_walls.json"));
    auto walls33 = walls_in_range(w33.valuations, w33.slope, w33.lo, w33.hi);
    REQUIRE(walls33.size() == 1);
    CHECK(walls33[0].c == Rational(1, 16));
}

TEST_CASE("beta is affine in c with its root at the wall") {
    for (int ord = 0; ord <= 9; ++ord)
        for (const char* sv : {"5/6", "7/6", "5/3", "7/3", "1/3"}) {
            ValuationSpec v{1, ord, q(sv)};
            Rational b0 = beta(0, 4, v), b1 = beta(1, 4, v), b2 = beta(2, 4, v);
            CHECK(b2 - b1 == b1 - b0);
            auto c = wall_solve(v, 4);
            if (!c) CHECK(b1 == b0);
            else if (*c >= 0) CHECK(beta(*c, 4, v) == 0);
            else CHECK(b0 + *c * (b1 - b0) == 0);
        }
}

TEST_CASE("cell integration") {
    // area of the triangle 0 <= u <= 1, 0 <= v <= 2u
    CHECK(integrate_cell(LaurentPolynomial::constant(2, 1), 0, 1, {0, 0}, {0, 2}) == 1);
    // int_0^1 int_u^1 u v dv du = 1/8
    LaurentPolynomial uv = LaurentPolynomial::monomial({1, 1});
    CHECK(integrate_cell(uv, 0, 1, {0, 1}, {1, 0}) == Rational(1, 8));
    LaurentPolynomial v2 = LaurentPolynomial::monomial({0, 2});
    CHECK(integrate_cell(v2, 0, 2, {0, 0}, {3, 0}) == 18);
}

TEST_CASE("threefold flag: smooth fibre") {
    auto f = io::load_flag(th::data_path("flags/smooth_fibre.json"));
    auto r = flag_refine(f);
    CHECK(r.L_cubed == 4);
    CHECK(r.volume_polynomial == th::rv({"4", "-6", "0", "2"}));
    CHECK(r.S_surface == Rational(3, 8));
    CHECK(r.beta_surface == Rational(5, 8));
    CHECK(r.S_curve == Rational(3, 4));
    CHECK_FALSE(r.S_point);

    auto cells = flag_volume_2d(f);
    REQUIRE(cells.size() == 2);
    // 2 - 2u^2 + 2uv - 2v below v = 2u, (v - 2)^2 / 2 above
    LaurentPolynomial below(2), above(2);
    below.add_term({0, 0}, 2);
    below.add_term({2, 0}, -2);
    below.add_term({1, 1}, 2);
    below.add_term({0, 1}, -2);
    above.add_term({0, 0}, 2);
    above.add_term({0, 1}, -2);
    above.add_term({0, 2}, Rational(1, 2));
    CHECK(cells[0].volume == below);
    CHECK(cells[0].v_hi == std::array<Rational, 2>{0, 2});
    CHECK(cells[1].volume == above);
    CHECK(cells[1].v_hi == std::array<Rational, 2>{2, 0});
}

TEST_CASE("threefold flag: singular fibre") {
    auto f = io::load_flag(th::data_path("flags/singular_fibre.json"));
    auto r = flag_refine(f);
    CHECK(r.volume_polynomial == th::rv({"4", "-6", "0", "2"}));
    CHECK(r.S_surface == Rational(3, 8));
    CHECK(r.S_curve == Rational(13, 16));
    REQUIRE(r.F_point);
    CHECK(*r.F_point == Rational(183, 320));
    CHECK(*r.S_point - *r.F_point == Rational(77, 320));
    CHECK(*r.S_point == Rational(13, 16));
    CHECK(r.delta_lower_bound == Rational(16, 13));
    CHECK(r.delta_lower_bound > 1);

    auto cells = flag_volume_2d(f);
    // u = 1/5 is the only interior u-breakpoint
    std::set<Rational> us;
    for (const auto& c : cells) us.insert(c.u_lo), us.insert(c.u_hi);
    CHECK(std::vector<Rational>(us.begin(), us.end()) == th::rv({"0", "1/5", "1"}));
    // four chambers over 0 < u < 1/5, as in the case table
    int left = 0;
    for (const auto& c : cells)
        if (c.u_lo < Rational(1, 5)) ++left;
    CHECK(left == 4);

    // the top cell carries 7/12 (2 - v)^2
    LaurentPolynomial top(2);
    top.add_term({0, 0}, Rational(7, 3));
    top.add_term({0, 1}, Rational(-7, 3));
    top.add_term({0, 2}, Rational(7, 12));
    bool found = false;
    for (const auto& c : cells) found = found || (c.volume == top && c.v_hi == std::array<Rational, 2>{2, 0});
    CHECK(found);
}

TEST_CASE("flag cells tile the region and the volume is continuous") {
    for (const char* file : {"flags/smooth_fibre.json", "flags/singular_fibre.json"}) {
        auto f = io::load_flag(th::data_path(file));
        auto cells = flag_volume_2d(f);
        Rational area = 0;
        for (const auto& c : cells)
            area += integrate_cell(LaurentPolynomial::constant(2, 1), c.u_lo, c.u_hi, c.v_lo, c.v_hi);
        CHECK(area == 2);  // [0, 1] x [0, 2]
        // on a rational grid, every cell containing a point gives the same value
        auto value = [](const LaurentPolynomial& p, const Rational& u, const Rational& v) {
            Rational r = 0;
            for (const auto& [e, c] : p.terms()) {
                Rational t = c;
                for (long k = 0; k < e[0]; ++k) t *= u;
                for (long k = 0; k < e[1]; ++k) t *= v;
                r += t;
            }
            return r;
        };
        for (int i = 0; i <= 20; ++i)
            for (int j = 0; j <= 40; ++j) {
                Rational u = Rational(i) / 20, v = Rational(j) / 20;
                std::optional<Rational> seen;
                int hits = 0;
                for (const auto& c : cells) {
                    if (u < c.u_lo || u > c.u_hi) continue;
                    Rational lo = c.v_lo[0] + c.v_lo[1] * u, hi = c.v_hi[0] + c.v_hi[1] * u;
                    if (v < lo || v > hi) continue;
                    ++hits;
                    Rational val = value(c.volume, u, v);
                    if (seen) CHECK(*seen == val);
                    seen = val;
                }
                CHECK(hits >= 1);
            }
    }
}

TEST_CASE("flag integrals agree with nested quadrature") {
    auto f = io::load_flag(th::data_path("flags/singular_fibre.json"));
    auto r = flag_refine(f);
    auto fs = to_float(f.surface_model);
    const std::size_t c0 = f.flag_curve;
    auto restricted = [&](double u, double v) {
        std::vector<double> d(f.surface_model.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            d[i] = f.restriction.constant[i].get_d() + u * f.restriction.slope[i].get_d();
        d[c0] -= v;
        return d;
    };
    auto inner = [&](double u, auto&& g) {
        return oracle::integrate([&](double v) { return g(u, v); }, 0, 2, 1e-13, 16);
    };
    auto outer = [&](auto&& g) {
        return oracle::integrate([&](double u) { return inner(u, g); }, 0, 1, 1e-12, 16);
    };
    double vol = outer([&](double u, double v) { return oracle::volume_lp(fs, restricted(u, v)); });
    CHECK(std::fabs(3 * vol / 4 - r.S_curve.get_d()) < 1e-9);

    const std::size_t c1 = f.surface_model.index("C1");
    double fx = outer([&](double u, double v) {
        auto z = oracle::zariski_lp(fs, restricted(u, v));
        if (!z) return 0.0;
        std::vector<double> p = restricted(u, v);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= z->negative[i];
        double deg = 0;
        for (std::size_t i = 0; i < p.size(); ++i) deg += p[i] * fs.gram[i][c0];
        return deg * z->negative[c1];
    });
    CHECK(std::fabs(6 * fx / 4 - r.F_point->get_d()) < 1e-9);
}

TEST_CASE("flag input errors") {
    auto f = io::load_flag(th::data_path("flags/singular_fibre.json"));
    auto g = f;
    g.point_multiplicity->erase(f.surface_model.index("C1"));
    CHECK_THROWS_WITH_AS(flag_refine(g), doctest::Contains("incomplete incidence data"), ComputationError);

    auto j = io::parse_json(io::read_file(th::data_path("flags/singular_fibre.json")), "flag");
    j["restriction"]["quadratic"] = {{"C0", "1"}};
    CHECK_THROWS_WITH_AS(io::flag_from_json(j), doctest::Contains("affine in u"), InputError);

    // a curve missing from the model leaves part of the region uncovered
    CubicForm x({"A"});
    x.set(0, 0, 0, 1);
    CHECK(x(th::rv({"2"}), th::rv({"1"}), th::rv({"1"})) == 2);
    CHECK_THROWS_AS(x.set(0, 0, 0, 2), InputError);
}

TEST_CASE("local bounds") {
    CHECK(local_volume_bound(Rational(1, 16)) == 4);
    CHECK(local_volume_bound(0) == 2);
    CHECK(local_volume_bound(Rational(1, 28)) == 3);
    CHECK_THROWS_AS(local_volume_bound(Rational(1, 4)), ComputationError);
    CHECK_THROWS_AS(local_volume_bound(-1), ComputationError);
    CHECK(dp_plurianticanonical_dim(4, 4) == 41);
    CHECK(dp_plurianticanonical_dim(7, 0) == 1);
    CHECK(dp_plurianticanonical_dim(1, 1) == 2);
    CHECK_THROWS_AS(dp_plurianticanonical_dim(0, 1), ComputationError);
}
