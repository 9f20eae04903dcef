// Randomised property suites.  Every suite runs kCases generated cases from a
// fixed seed, so failures reproduce.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fanolab/kstab.hpp"
#include "fanolab/mutation.hpp"
#include "fanolab/polytope.hpp"
#include "oracles/surface_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace fanolab;

namespace {

constexpr int kCases = 500;

using Rng = std::mt19937_64;

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

IntVector random_vector(Rng& rng, std::size_t n, long bound) {
    IntVector v;
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(uniform(rng, -bound, bound));
    return v;
}

// Product of random elementary matrices and coordinate sign flips.
IntMatrix random_unimodular(Rng& rng, std::size_t n) {
    IntMatrix w = IntMatrix::identity(n);
    for (int k = 0; k < 6; ++k) {
        std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
        std::size_t j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 2));
        if (j >= i) ++j;
        IntMatrix e = IntMatrix::identity(n);
        e(i, j) = uniform(rng, -2, 2);
        if (uniform(rng, 0, 3) == 0) e(i, i) = -1;
        w = e * w;
    }
    return w;
}

RatVector times(const IntMatrix& m, const RatVector& v) {
    RatVector out(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += Rational(m(i, j)) * v[j];
    return out;
}

std::set<RatVector> as_set(const std::vector<RatVector>& v) { return {v.begin(), v.end()}; }

FanoPolytope random_fano(Rng& rng, std::size_t dim) {
    while (true) {
        std::vector<IntVector> pts;
        std::size_t n = static_cast<std::size_t>(uniform(rng, static_cast<long>(dim) + 1, static_cast<long>(dim) + 5));
        for (std::size_t i = 0; i < n; ++i) pts.push_back(random_vector(rng, dim, 3));
        try {
            return fano_hull(pts);
        } catch (const std::exception&) {
        }
    }
}

// Complete toric surface: rays in counter-clockwise order, each consecutive
// pair spanning a strictly convex cone.
struct ToricSurface {
    std::vector<IntVector> rays;
    SurfaceModel model;
};

Integer det2(const IntVector& a, const IntVector& b) { return a[0] * b[1] - a[1] * b[0]; }

ToricSurface random_toric_surface(Rng& rng, long max_rays) {
    while (true) {
        long n = uniform(rng, 3, max_rays);
        std::vector<IntVector> rays;
        for (long i = 0; i < n; ++i) {
            IntVector v = random_vector(rng, 2, 3);
            if (v[0] == 0 && v[1] == 0) continue;
            v = primitive(v);
            if (std::find(rays.begin(), rays.end(), v) == rays.end()) rays.push_back(v);
        }
        if (rays.size() < 3) continue;
        std::sort(rays.begin(), rays.end(), [](const IntVector& a, const IntVector& b) {
            return std::atan2(a[1].get_d(), a[0].get_d()) < std::atan2(b[1].get_d(), b[0].get_d());
        });
        const std::size_t m = rays.size();
        bool complete = true;
        for (std::size_t i = 0; i < m; ++i) complete = complete && det2(rays[i], rays[(i + 1) % m]) > 0;
        if (!complete) continue;

        RatMatrix g(m, RatVector(m, 0));
        std::vector<std::string> names;
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t prev = (i + m - 1) % m, next = (i + 1) % m;
            Integer dp = det2(rays[prev], rays[i]), dn = det2(rays[i], rays[next]);
            g[i][next] = g[next][i] = Rational(1) / dn;
            g[i][i] = -Rational(det2(rays[prev], rays[next])) / (dp * dn);
            names.push_back("D" + std::to_string(i));
        }
        return {rays, SurfaceModel(names, g, names, std::nullopt)};
    }
}

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

DivisorClass random_effective(Rng& rng, std::size_t n) {
    DivisorClass d(n, 0);
    while (is_zero(d))
        for (auto& x : d) x = Rational(uniform(rng, 0, 6)) / 2;
    return d;
}

// w-homogeneous factor 1 + c x^a with <w, a> = 0.
MutationData random_mutation(Rng& rng, std::size_t n) {
    while (true) {
        IntVector w = random_vector(rng, n, 2);
        if (is_zero(w)) continue;
        w = primitive(w);
        IntVector a;
        if (n == 2) {
            a = {Integer(-w[1]), w[0]};
        } else {
            IntVector r = random_vector(rng, 3, 2);
            a = {Integer(w[1] * r[2] - w[2] * r[1]), Integer(w[2] * r[0] - w[0] * r[2]), Integer(w[0] * r[1] - w[1] * r[0])};
            if (is_zero(a)) continue;
            a = primitive(a);
        }
        if (uniform(rng, 0, 1)) for (auto& x : a) x = -x;
        Exponent e;
        for (const auto& x : a) e.push_back(x.get_si());
        LaurentPolynomial f = LaurentPolynomial::constant(n, 1);
        f.add_term(e, Rational(uniform(rng, 1, 3)));
        return {w, f};
    }
}

// Random polynomial on which m is defined: terms at level k < 0 carry F^(-k).
LaurentPolynomial random_mutable(Rng& rng, const MutationData& m, std::size_t n) {
    LaurentPolynomial f(n);
    long terms = uniform(rng, 2, 5);
    for (long t = 0; t < terms; ++t) {
        IntVector v = random_vector(rng, n, 2);
        Exponent e;
        for (const auto& x : v) e.push_back(x.get_si());
        Integer level = 0;
        for (std::size_t i = 0; i < n; ++i) level += v[i] * m.weight[i];
        LaurentPolynomial term = LaurentPolynomial::monomial(e, Rational(uniform(rng, 1, 3)));
        if (level < 0) term = term * m.factor.pow(static_cast<unsigned>(-level.get_si()));
        f += term;
    }
    return f;
}

std::set<std::vector<Integer>> normal_form_set(const SearchResult& r) {
    std::set<std::vector<Integer>> out;
    for (const auto& d : r.discovered) {
        std::vector<Integer> flat;
        for (const auto& v : d.normal_form.vertices()) flat.insert(flat.end(), v.begin(), v.end());
        out.insert(flat);
    }
    return out;
}

}  // namespace

TEST_CASE("Smith normal form reconstructs: U A V = D") {
    Rng rng(101);
    for (int c = 0; c < kCases; ++c) {
        std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 5)), k = static_cast<std::size_t>(uniform(rng, 1, 5));
        std::vector<IntVector> rows;
        for (std::size_t i = 0; i < r; ++i) rows.push_back(random_vector(rng, k, 9));
        IntMatrix a = IntMatrix::from_rows(rows, k);
        SnfResult s = smith_normal_form(a);
        REQUIRE(s.U * a * s.V == s.D);
        CHECK(s.U * s.U_inv == IntMatrix::identity(r));
        CHECK(s.V * s.V_inv == IntMatrix::identity(k));
        auto f = s.invariant_factors();
        CHECK(f.size() == s.rank);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i != j) CHECK(s.D(i, j) == 0);
        for (std::size_t i = 0; i + 1 < f.size(); ++i) CHECK(mpz_divisible_p(f[i + 1].get_mpz_t(), f[i].get_mpz_t()));
    }
}

TEST_CASE("polar of the polar is the polytope") {
    Rng rng(202);
    for (int c = 0; c < kCases; ++c) {
        FanoPolytope p = random_fano(rng, c % 2 ? 3 : 2);
        RationalPolytope q = polar(p);
        CHECK(q.vertices.size() == p.facets().size());
        CHECK(q.facets.size() == p.vertices().size());
        std::vector<RatVector> pv;
        for (const auto& v : p.vertices()) pv.push_back(to_rational(v));
        CHECK(as_set(polar(q).vertices) == as_set(pv));
    }
}

TEST_CASE("barycentre of the polar is GL(n, Z)-equivariant") {
    Rng rng(303);
    for (int c = 0; c < kCases; ++c) {
        std::size_t dim = c % 2 ? 3 : 2;
        FanoPolytope p = random_fano(rng, dim);
        IntMatrix w = random_unimodular(rng, dim);
        std::vector<IntVector> moved;
        for (const auto& v : p.vertices()) moved.push_back(w * v);
        FanoPolytope wp(moved);
        // (W P)° = W^{-T} P°
        IntMatrix dual = unimodular_inverse(w).transpose();
        KpsCheck a = kps_toric_check(p), b = kps_toric_check(wp);
        CHECK(b.barycentre == times(dual, a.barycentre));
        CHECK(a.polystable == b.polystable);
        CHECK(anticanonical_degree(p) == anticanonical_degree(wp));
    }
}

TEST_CASE("Zariski decompositions on random toric surfaces") {
    Rng rng(404);
    for (int c = 0; c < kCases; ++c) {
        ToricSurface t = random_toric_surface(rng, 7);
        const SurfaceModel& s = t.model;
        // linear equivalence: div(chi^m) = sum <m, v_i> D_i is numerically trivial
        for (std::size_t k = 0; k < 2; ++k) {
            DivisorClass principal;
            for (const auto& v : t.rays) principal.push_back(Rational(v[k]));
            REQUIRE(is_zero(s.degrees(principal)));
        }
        DivisorClass d = random_effective(rng, s.size());
        ZariskiDecomposition z = zariski_decompose(s, d);
        DivisorClass sum = z.positive;
        std::vector<std::size_t> support;
        for (const auto& [i, x] : z.negative) {
            CHECK(x > 0);
            sum[i] += x;
            support.push_back(i);
            CHECK(s.degrees(z.positive)[i] == 0);  // orthogonality
        }
        CHECK(is_zero(s.degrees(sub(sum, d))));
        CHECK(s.is_nef(z.positive));
        CHECK(z.volume == s.intersect(z.positive, z.positive));
        // leading principal minors of the support Gram matrix alternate in sign
        for (std::size_t k = 1; k <= support.size(); ++k) {
            RatMatrix m(k, RatVector(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) m[i][j] = s.gram()[support[i]][support[j]];
            Rational det = determinant(m);
            CHECK(((k % 2 == 1) ? det < 0 : det > 0));
        }
        auto lp = oracle::zariski_lp(to_float(s), to_float(d));
        REQUIRE(lp);
        CHECK(std::fabs(lp->volume - z.volume.get_d()) < 1e-9 * (1 + std::fabs(lp->volume)));
    }
}

TEST_CASE("exact S-invariants agree with quadrature on random toric surfaces") {
    Rng rng(505);
    for (int c = 0; c < kCases; ++c) {
        ToricSurface t = random_toric_surface(rng, 5);
        const SurfaceModel& s = t.model;
        DivisorClass l(s.size(), 1);  // -K
        DivisorClass f = c % 2 ? s.curve("D" + std::to_string(uniform(rng, 0, static_cast<long>(s.size()) - 1)))
                               : random_effective(rng, s.size());
        Rational exact = s_invariant(s, l, f);
        double numeric = oracle::s_invariant_numeric(to_float(s), to_float(l), to_float(f));
        INFO("case " << c << ": exact " << to_string(exact) << ", quadrature " << numeric);
        CHECK(std::fabs(exact.get_d() - numeric) < 1e-9);
    }
}

TEST_CASE("mutation is an involution up to inverse and preserves periods") {
    Rng rng(606);
    for (int c = 0; c < kCases; ++c) {
        std::size_t n = c % 2 ? 3 : 2;
        MutationData m = random_mutation(rng, n);
        LaurentPolynomial f = random_mutable(rng, m, n);
        LaurentPolynomial g = mutate(f, m);
        CHECK(mutate(g, m.inverse()) == f);
        CHECK(classical_period_coeffs(g, n == 2 ? 8 : 6) == classical_period_coeffs(f, n == 2 ? 8 : 6));
    }
}

TEST_CASE("mutation search is deterministic and independent of candidate order") {
    Rng rng(707);
    std::vector<LaurentPolynomial> seeds;
    {
        LaurentPolynomial p2(2), p1p1(2), dp7(2);
        for (Exponent e : {Exponent{1, 0}, Exponent{0, 1}, Exponent{-1, -1}}) p2.add_term(e, 1);
        for (Exponent e : {Exponent{1, 0}, Exponent{0, 1}, Exponent{-1, 0}, Exponent{0, -1}}) p1p1.add_term(e, 1);
        for (Exponent e : {Exponent{1, 0}, Exponent{0, 1}, Exponent{-1, 0}, Exponent{-1, -1}}) dp7.add_term(e, 1);
        seeds = {p2, p1p1, dp7};
    }
    for (int c = 0; c < kCases; ++c) {
        LaurentPolynomial f = seeds[static_cast<std::size_t>(c) % seeds.size()].transform(random_unimodular(rng, 2));
        SearchOptions plain;
        plain.depth = 1;
        plain.max_weight = 2;
        plain.max_factor = 1;
        SearchOptions shuffled = plain;
        shuffled.shuffle_seed = static_cast<std::uint64_t>(uniform(rng, 1, 1 << 30));
        SearchResult a = mutation_search(f, plain), b = mutation_search(f, plain), r = mutation_search(f, shuffled);
        REQUIRE(a.nodes.size() == b.nodes.size());
        for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK(a.nodes[i].polynomial == b.nodes[i].polynomial);
        CHECK(normal_form_set(a) == normal_form_set(r));
        CHECK(a.nodes.size() == r.nodes.size());
    }
}
