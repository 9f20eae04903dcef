#include "fanolab/toric.hpp"

#include "fanolab/linalg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace fanolab {

ClassGroupResult class_group(const FanoPolytope& p) {
    Cokernel c = cokernel(IntMatrix::from_rows(p.vertices(), p.dim()));
    return {c.free_rank, c.torsion, c.free_rank};
}

std::vector<CyclicAction> quotient_weights(const FanoPolytope& p) {
    if (p.vertices().size() != p.dim() + 1) throw ComputationError("quotient_weights: polytope is not a simplex");
    IntMatrix a = IntMatrix::from_rows(p.vertices(), p.dim());
    SnfResult s = smith_normal_form(a);
    std::vector<CyclicAction> out;
    for (std::size_t i = 0; i < s.rank; ++i) {
        const Integer& d = s.D(i, i);
        if (d == 1) continue;
        CyclicAction act{d, {}};
        for (std::size_t j = 0; j < a.rows(); ++j) {
            Integer w;
            mpz_fdiv_r(w.get_mpz_t(), s.U(i, j).get_mpz_t(), d.get_mpz_t());
            act.weights.push_back(w);
        }
        out.push_back(std::move(act));
    }
    return out;
}

std::string ConeSingularityReport::label() const {
    switch (kind) {
        case ConeKind::Smooth: return "smooth";
        case ConeKind::A: return "A" + a_index.get_str();
        case ConeKind::CyclicQuotient: return "1/" + order.get_str() + "(1," + weight.get_str() + ")";
        case ConeKind::GorensteinPoint:
            return "index " + gorenstein_index.get_str() + (canonical ? " canonical" : " non-canonical");
    }
    return "";
}

namespace {

std::vector<std::size_t> facets_containing(const FanoPolytope& p, const std::vector<std::size_t>& verts) {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < p.facets().size(); ++f) {
        const auto& fv = p.facets()[f].vertices;
        if (std::includes(fv.begin(), fv.end(), verts.begin(), verts.end())) out.push_back(f);
    }
    return out;
}

// smallest face containing the given vertices
std::vector<std::size_t> face_closure(const FanoPolytope& p, std::vector<std::size_t> verts) {
    std::sort(verts.begin(), verts.end());
    auto fs = facets_containing(p, verts);
    if (fs.empty()) {
        std::vector<std::size_t> all(p.vertices().size());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::vector<std::size_t> face = p.facets()[fs[0]].vertices;
    for (std::size_t k = 1; k < fs.size(); ++k) {
        std::vector<std::size_t> meet;
        const auto& g = p.facets()[fs[k]].vertices;
        std::set_intersection(face.begin(), face.end(), g.begin(), g.end(), std::back_inserter(meet));
        face = std::move(meet);
    }
    return face;
}

Integer mod_pos(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) throw ComputationError("no modular inverse");
    return r;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> edges(const FanoPolytope& p) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = p.vertices().size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (face_closure(p, {i, j}) == std::vector<std::size_t>{i, j}) out.emplace_back(i, j);
    return out;
}

ConeSingularityReport analyze_2d_cone(const FanoPolytope& p, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    if (i == j || j >= p.vertices().size() || face_closure(p, {i, j}) != std::vector<std::size_t>{i, j})
        throw ComputationError("analyze_2d_cone: rays do not span a face");
    const IntVector& r1 = p.vertices()[i];
    const IntVector& r2 = p.vertices()[j];
    SublatticeIndex sat = sublattice_index({r1, r2});

    // coordinates of the rays in the saturated basis (w1, w2)
    auto coords = [&](const IntVector& r) {
        RatMatrix m(p.dim(), RatVector(2));
        for (std::size_t k = 0; k < p.dim(); ++k) {
            m[k][0] = sat.saturation_basis[0][k];
            m[k][1] = sat.saturation_basis[1][k];
        }
        // two independent coordinate rows determine the coefficients
        for (std::size_t a = 0; a < p.dim(); ++a)
            for (std::size_t b = a + 1; b < p.dim(); ++b) {
                RatMatrix sq{m[a], m[b]};
                auto x = solve_square(sq, {Rational(r[a]), Rational(r[b])});
                if (x) return to_integer(*x);
            }
        throw ComputationError("analyze_2d_cone: saturation basis is degenerate");
    };
    IntVector u1 = coords(r1), u2 = coords(r2);
    Integer det = u1[0] * u2[1] - u1[1] * u2[0];
    Integer m = abs(det);

    // send u1 to (0,1): complete u1 to a basis {b, u1} with det(b, u1) = 1
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), u1[0].get_mpz_t(), u1[1].get_mpz_t());
    // b = (t, -s) has det(b, u1) = 1 and u2 = +-m b + y u1 with y = (s, t).u2;
    // reflecting b if needed puts u2 at (m, y)
    Integer y = s * u2[0] + t * u2[1];
    ConeSingularityReport rep;
    rep.rays = {i, j};
    rep.order = m;
    if (m == 1) {
        rep.kind = ConeKind::Smooth;
        rep.weight = 0;
        return rep;
    }
    // cone((0,1),(m,y)) ~ cone((0,1),(m,-k)) with k = -y mod m, type 1/m(1,k)
    Integer k = mod_pos(-y, m);
    Integer kinv = inverse_mod(k, m);
    rep.weight = std::min(k, kinv);
    if (mod_pos(k + 1, m) == 0) {
        rep.kind = ConeKind::A;
        rep.a_index = m - 1;
    } else {
        rep.kind = ConeKind::CyclicQuotient;
    }
    return rep;
}

ConeSingularityReport analyze_maximal_cone(const FanoPolytope& p, std::size_t facet) {
    const Facet& f = p.facets().at(facet);
    ConeSingularityReport rep;
    rep.rays = f.vertices;
    rep.dual_vector = scale(1 / f.offset, to_rational(f.normal));
    Integer idx = 1;
    for (const auto& x : rep.dual_vector) idx = lcm(idx, x.get_den());
    rep.gorenstein_index = idx;

    std::vector<RatVector> duals;
    for (const auto& g : p.facets()) duals.push_back(scale(1 / g.offset, to_rational(g.normal)));

    // lattice points of conv{0, rays} lying in the cone strictly below height 1
    const std::size_t d = p.dim();
    IntVector lo(d, 0), hi(d, 0);
    for (auto v : f.vertices)
        for (std::size_t k = 0; k < d; ++k) {
            lo[k] = std::min(lo[k], p.vertices()[v][k]);
            hi[k] = std::max(hi[k], p.vertices()[v][k]);
        }
    std::optional<IntVector> best;
    Rational best_h;
    IntVector x = lo;
    while (true) {
        if (!is_zero(x)) {
            RatVector xr = to_rational(x);
            Rational h = dot(rep.dual_vector, xr);
            if (h > 0 && h < 1) {
                bool in_cone = true;
                for (const auto& u : duals)
                    if (dot(u, xr) > h) {
                        in_cone = false;
                        break;
                    }
                if (in_cone && (!best || h < best_h || (h == best_h && lex_less(x, *best)))) {
                    best = x;
                    best_h = h;
                }
            }
        }
        std::size_t k = 0;
        while (k < d && x[k] == hi[k]) x[k] = lo[k], ++k;
        if (k == d) break;
        ++x[k];
    }
    rep.canonical = !best.has_value();
    rep.witness = best;

    bool unimodular = false;
    if (f.vertices.size() == d) {
        IntMatrix m(d, d);
        for (std::size_t c = 0; c < d; ++c)
            for (std::size_t r = 0; r < d; ++r) m(r, c) = p.vertices()[f.vertices[c]][r];
        unimodular = abs(m.determinant()) == 1;
    }
    rep.kind = unimodular ? ConeKind::Smooth : ConeKind::GorensteinPoint;
    return rep;
}

ConeSingularityReport analyze_3d_cone(const FanoPolytope& p, const std::vector<std::size_t>& rays) {
    std::vector<std::size_t> sorted = rays;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t f = 0; f < p.facets().size(); ++f)
        if (p.facets()[f].vertices == sorted) return analyze_maximal_cone(p, f);
    throw ComputationError("analyze_3d_cone: rays do not span a maximal cone");
}

EmbeddingResult wps_embedding(const FanoPolytope& p, const Integer& denominator_cap) {
    RationalPolytope q = polar(p);
    Integer maxden = 1;
    for (const auto& v : q.vertices)
        for (const auto& x : v) maxden = std::max(maxden, Integer(x.get_den()));
    if (maxden > denominator_cap)
        throw ComputationError("wps_embedding: polar denominators up to " + maxden.get_str() + " exceed the cap " +
                               denominator_cap.get_str());
    const std::size_t d = p.dim();
    // every Hilbert basis element lies in the open parallelepiped of a simplicial
    // subcone spanned by vertex lifts of height <= maxden
    const long max_height = static_cast<long>(d + 1) * maxden.get_si() - 1;

    std::vector<std::vector<long>> verts;
    for (const auto& v : p.vertices()) {
        std::vector<long> w;
        for (const auto& x : v) w.push_back(x.get_si());
        verts.push_back(w);
    }
    auto in_cone = [&](const std::vector<long>& m, long k) {
        if (k < 0) return false;
        for (const auto& v : verts) {
            long s = 0;
            for (std::size_t i = 0; i < d; ++i) s += v[i] * m[i];
            if (s < -k) return false;
        }
        return true;
    };

    std::vector<std::vector<long>> basis;  // (m, k)
    for (long k = 1; k <= max_height; ++k) {
        RationalPolytope kq = q;
        for (auto& v : kq.vertices) v = scale(Rational(k), v);
        for (auto& f : kq.facets) f.offset *= k;
        std::vector<IntVector> pts = lattice_points(kq);
        std::sort(pts.begin(), pts.end(), lex_less<Integer>);
        for (const auto& pt : pts) {
            std::vector<long> m;
            for (const auto& x : pt) m.push_back(x.get_si());
            bool reducible = false;
            for (const auto& h : basis) {
                if (h[d] >= k) continue;
                std::vector<long> diff(d);
                for (std::size_t i = 0; i < d; ++i) diff[i] = m[i] - h[i];
                if (in_cone(diff, k - h[d])) {
                    reducible = true;
                    break;
                }
            }
            if (!reducible) {
                m.push_back(k);
                basis.push_back(m);
            }
        }
    }
    EmbeddingResult e;
    for (const auto& b : basis) {
        IntVector g;
        for (long x : b) g.emplace_back(x);
        e.degrees.push_back(g.back());
        e.generators.push_back(std::move(g));
    }
    return e;
}

RelationResult relation_binomials(const EmbeddingResult& e, const Integer& degree_bound) {
    const std::size_t n = e.generators.size();
    const long bound = degree_bound.get_si();
    std::vector<long> deg;
    for (const auto& d : e.degrees) deg.push_back(d.get_si());

    // monomials of degree <= bound, grouped by their image in M + Z
    std::map<IntVector, std::vector<IntVector>, bool (*)(const IntVector&, const IntVector&)> fibres(&lex_less<Integer>);
    IntVector a(n, 0);
    std::function<void(std::size_t, long)> rec = [&](std::size_t i, long used) {
        if (i == n) {
            if (used == 0) return;
            IntVector img(e.generators.front().size(), 0);
            for (std::size_t k = 0; k < n; ++k)
                if (a[k] != 0)
                    for (std::size_t c = 0; c < img.size(); ++c) img[c] += a[k] * e.generators[k][c];
            fibres[img].push_back(a);
            return;
        }
        for (long x = 0; used + x * deg[i] <= bound; ++x) {
            a[i] = x;
            rec(i + 1, used + x * deg[i]);
        }
        a[i] = 0;
    };
    rec(0, 0);

    auto disjoint = [&](const IntVector& u, const IntVector& v) {
        for (std::size_t k = 0; k < n; ++k)
            if (u[k] != 0 && v[k] != 0) return false;
        return true;
    };

    RelationResult out;
    for (auto& [img, monos] : fibres) {
        if (monos.size() < 2) continue;
        std::sort(monos.begin(), monos.end(), [](const IntVector& x, const IntVector& y) { return lex_less(y, x); });
        Integer degree = img.back();
        for (std::size_t i = 0; i < monos.size(); ++i)
            for (std::size_t j = i + 1; j < monos.size(); ++j)
                if (disjoint(monos[i], monos[j])) out.binomials.push_back({monos[i], monos[j], degree});

        // components of the support-overlap graph; each extra component needs one generator
        std::vector<std::size_t> comp(monos.size());
        std::iota(comp.begin(), comp.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return comp[x] == x ? x : comp[x] = find(comp[x]);
        };
        for (std::size_t i = 0; i < monos.size(); ++i)
            for (std::size_t j = i + 1; j < monos.size(); ++j)
                if (!disjoint(monos[i], monos[j])) comp[find(i)] = find(j);
        std::vector<std::size_t> reps;
        for (std::size_t i = 0; i < monos.size(); ++i)
            if (find(i) == i) reps.push_back(i);
        for (std::size_t r = 1; r < reps.size(); ++r) {
            out.minimal_generators.push_back({monos[reps[0]], monos[reps[r]], degree});
            out.minimal_degrees.push_back(degree);
        }
    }
    std::sort(out.minimal_degrees.begin(), out.minimal_degrees.end());
    const std::size_t codim = n - e.generators.front().size();
    out.complete_intersection_224 = out.minimal_degrees == IntVector{2, 2, 4} && codim == 3;
    return out;
}

std::vector<IntVector> cyclic_invariant_generators(const IntVector& weights, const Integer& order,
                                                   const IntVector& degrees, const Integer& degree_bound) {
    const std::size_t n = weights.size();
    if (degrees.size() != n) throw ComputationError("cyclic_invariant_generators: weight/degree length mismatch");
    if (order <= 0) throw ComputationError("cyclic_invariant_generators: order must be positive");
    for (const auto& d : degrees)
        if (d <= 0) throw ComputationError("cyclic_invariant_generators: degrees must be positive");

    std::vector<std::pair<Integer, IntVector>> invariants;
    IntVector a(n, 0);
    std::function<void(std::size_t, Integer)> rec = [&](std::size_t i, Integer used) {
        if (i == n) {
            if (used == 0) return;
            Integer w = 0;
            for (std::size_t k = 0; k < n; ++k) w += a[k] * weights[k];
            if (mod_pos(w, order) == 0) invariants.emplace_back(used, a);
            return;
        }
        for (Integer x = 0; used + x * degrees[i] <= degree_bound; ++x) {
            a[i] = x;
            rec(i + 1, used + x * degrees[i]);
        }
        a[i] = 0;
    };
    rec(0, 0);
    std::sort(invariants.begin(), invariants.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return lex_less(y.second, x.second);
    });
    std::vector<IntVector> gens;
    for (const auto& [deg, mono] : invariants) {
        bool reducible = false;
        for (const auto& g : gens) {
            bool le = true;
            for (std::size_t k = 0; k < n && le; ++k) le = g[k] <= mono[k];
            if (le) {
                reducible = true;
                break;
            }
        }
        if (!reducible) gens.push_back(mono);
    }
    return gens;
}

Dossier toric_dossier(const FanoPolytope& p, const Integer& degree_bound) {
    Dossier d;
    d.polytope = p;
    d.polar = polar(p);
    d.kps = kps_toric_check(p);
    d.degree = anticanonical_degree(p);
    d.class_group = class_group(p);
    if (p.dim() >= 3)
        for (auto [i, j] : edges(p)) d.curves.push_back(analyze_2d_cone(p, i, j));
    for (std::size_t f = 0; f < p.facets().size(); ++f) d.points.push_back(analyze_maximal_cone(p, f));
    try {
        d.embedding = wps_embedding(p);
        d.relations = relation_binomials(*d.embedding, degree_bound);
    } catch (const ComputationError& e) {
        d.embedding_error = e.what();
    }
    return d;
}

}  // namespace fanolab
