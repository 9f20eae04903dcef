#include "fanolab/kstab.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace fanolab {

namespace {

// Affine function of m parameters: coefficients (constant, p_1, ..., p_m).
using Affine = RatVector;

Rational eval(const Affine& a, const RatVector& params) {
    Rational r = a[0];
    for (std::size_t k = 0; k < params.size(); ++k) r += a[k + 1] * params[k];
    return r;
}

std::string poly_string(const std::vector<Rational>& c, char var) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        Rational mag = abs(c[k]);
        os << (c[k] < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        first = false;
        if (k == 0 || mag != 1) os << to_string(mag);
        if (k > 0) os << (mag != 1 ? "*" : "") << var;
        if (k > 1) os << '^' << k;
    }
    return first ? "0" : os.str();
}

bool negative_definite(const RatMatrix& g) {
    // Sylvester: leading minors alternate in sign, starting negative
    for (std::size_t k = 1; k <= g.size(); ++k) {
        RatMatrix m(k, RatVector(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m[i][j] = g[i][j];
        Rational d = determinant(m);
        if ((k % 2 == 1) ? d >= 0 : d <= 0) return false;
    }
    return true;
}

RatMatrix sub_gram(const SurfaceModel& s, const std::vector<std::size_t>& idx) {
    RatMatrix g(idx.size(), RatVector(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) g[i][j] = s.gram()[idx[i]][idx[j]];
    return g;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// The cone spanned by the Mori generators, described by intersection with
// classes: D is pseudo-effective iff H.D >= 0 for every facet class and
// H.D = 0 for every equality class.
struct EffectiveCone {
    std::vector<DivisorClass> facets, equalities;
};

EffectiveCone effective_cone(const SurfaceModel& s) {
    const std::size_t n = s.size();
    // numerical coordinates: D -> (D . b) for a maximal independent set of curves b
    std::vector<std::size_t> basis;
    RatMatrix rows;
    for (std::size_t i = 0; i < n; ++i) {
        RatMatrix trial = rows;
        trial.push_back(s.gram()[i]);
        if (rank_of(trial) == trial.size()) {
            rows = std::move(trial);
            basis.push_back(i);
        }
    }
    const std::size_t r = basis.size();
    auto coords = [&](const DivisorClass& d) {
        RatVector c(r);
        for (std::size_t k = 0; k < r; ++k) c[k] = s.intersect(s.curve(s.curves()[basis[k]]), d);
        return c;
    };
    // a functional phi on coordinates corresponds to the class sum phi_k b_k
    auto as_class = [&](const RatVector& phi) {
        DivisorClass h = s.zero();
        for (std::size_t k = 0; k < r; ++k) h[basis[k]] += phi[k];
        return h;
    };

    RatMatrix gens;
    for (auto m : s.mori()) gens.push_back(coords(s.curve(s.curves()[m])));
    EffectiveCone cone;
    for (const auto& h : null_space(gens, r)) cone.equalities.push_back(as_class(h));

    // span coordinates: choose independent generators w_1..w_k and an
    // invertible k x k block of their coordinates
    RatMatrix w;
    for (const auto& g : gens) {
        RatMatrix trial = w;
        trial.push_back(g);
        if (rank_of(trial) == trial.size()) w = std::move(trial);
    }
    const std::size_t k = w.size();
    if (k == 0) return cone;
    std::vector<std::size_t> pick;
    for (std::size_t c = 0; c < r && pick.size() < k; ++c) {
        RatMatrix block(k, RatVector(pick.size() + 1));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < pick.size(); ++j) block[i][j] = w[i][pick[j]];
            block[i][pick.size()] = w[i][c];
        }
        // columns independent iff the transpose has full row rank
        RatMatrix t(pick.size() + 1, RatVector(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j <= pick.size(); ++j) t[j][i] = block[i][j];
        if (rank_of(t) == pick.size() + 1) pick.push_back(c);
    }
    // y = M c with M w_j = e_j:  M = (block^T)^-1 on the picked coordinates
    RatMatrix bt(k, RatVector(k));  // bt[a][j] = w_j[pick[a]]
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t j = 0; j < k; ++j) bt[a][j] = w[j][pick[a]];
    RatMatrix minv(k, RatVector(r, 0));  // rows of M
    for (std::size_t col = 0; col < k; ++col) {
        RatVector e(k, 0);
        e[col] = 1;
        auto sol = solve_square(bt, e);  // column col of bt^-1
        for (std::size_t row = 0; row < k; ++row) minv[row][pick[col]] = (*sol)[row];
    }
    auto span_coords = [&](const RatVector& c) {
        RatVector y(k, 0);
        for (std::size_t i = 0; i < k; ++i) y[i] = dot(minv[i], c);
        return y;
    };
    RatMatrix ys;
    for (const auto& g : gens) ys.push_back(span_coords(g));
    std::set<RatVector, bool (*)(const RatVector&, const RatVector&)> seen(&lex_less<Rational>);
    for_each_subset(ys.size(), k - 1, [&](const std::vector<std::size_t>& sub) {
        RatMatrix m;
        for (auto i : sub) m.push_back(ys[i]);
        auto ns = null_space(m, k);
        if (ns.size() != 1) return;
        RatVector f = ns[0];
        int sign = 0;
        for (const auto& y : ys) {
            Rational v = dot(f, y);
            int c = (v > 0) - (v < 0);
            if (c == 0) continue;
            if (sign == 0) sign = c;
            else if (c != sign) return;
        }
        if (sign == 0) return;
        if (sign < 0) f = scale(-1, f);
        // normalise so duplicates are detected
        Rational lead = 0;
        for (const auto& x : f)
            if (x != 0) {
                lead = abs(x);
                break;
            }
        f = scale(1 / lead, f);
        if (!seen.insert(f).second) return;
        // phi(c) = f . (M c)
        RatVector phi(r, 0);
        for (std::size_t i = 0; i < k; ++i) phi = add(phi, scale(f[i], minv[i]));
        cone.facets.push_back(as_class(phi));
    });
    return cone;
}

std::optional<DivisorClass> pseff_obstruction(const SurfaceModel& s, const DivisorClass& d) {
    EffectiveCone cone = effective_cone(s);
    for (const auto& h : cone.equalities) {
        Rational v = s.intersect(h, d);
        if (v != 0) return v > 0 ? scale(-1, h) : h;
    }
    for (const auto& h : cone.facets)
        if (s.intersect(h, d) < 0) return h;
    return std::nullopt;
}

// The Zariski chamber with a given negative support, for D = D_0 + sum p_k D_k.
struct Chamber {
    std::vector<std::size_t> support;
    std::vector<Affine> x;         // coefficient of each support curve
    std::vector<Affine> positive;  // coefficient of each curve in P
    std::vector<Affine> conditions;  // all >= 0 on the chamber
};

Affine affine_degree(const SurfaceModel& s, const std::vector<Affine>& cls, std::size_t curve, std::size_t m) {
    Affine out(m + 1, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Rational& g = s.gram()[i][curve];
        if (g == 0) continue;
        for (std::size_t k = 0; k <= m; ++k) out[k] += g * cls[i][k];
    }
    return out;
}

std::vector<Chamber> chambers(const SurfaceModel& s, const std::vector<DivisorClass>& d) {
    const std::size_t m = d.size() - 1, n = s.size();
    std::vector<Affine> cls(n, Affine(m + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= m; ++k) cls[i][k] = d[k][i];
    std::vector<std::size_t> negative;
    for (std::size_t i = 0; i < n; ++i)
        if (s.gram()[i][i] < 0) negative.push_back(i);

    std::vector<Chamber> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << negative.size()); ++mask) {
        Chamber ch;
        for (std::size_t b = 0; b < negative.size(); ++b)
            if (mask >> b & 1u) ch.support.push_back(negative[b]);
        RatMatrix g = sub_gram(s, ch.support);
        if (!ch.support.empty() && !negative_definite(g)) continue;
        const std::size_t q = ch.support.size();
        ch.x.assign(q, Affine(m + 1, 0));
        for (std::size_t k = 0; k <= m; ++k) {
            RatVector rhs(q);
            for (std::size_t i = 0; i < q; ++i) rhs[i] = s.intersect(d[k], s.curve(s.curves()[ch.support[i]]));
            auto sol = q ? solve_square(g, rhs) : std::optional<RatVector>(RatVector{});
            for (std::size_t i = 0; i < q; ++i) ch.x[i][k] = (*sol)[i];
        }
        ch.positive = cls;
        for (std::size_t i = 0; i < q; ++i) ch.positive[ch.support[i]] = sub(ch.positive[ch.support[i]], ch.x[i]);
        for (const auto& x : ch.x) ch.conditions.push_back(x);
        for (std::size_t c = 0; c < n; ++c)
            if (!std::binary_search(ch.support.begin(), ch.support.end(), c))
                ch.conditions.push_back(affine_degree(s, ch.positive, c, m));
        out.push_back(std::move(ch));
    }
    return out;
}

// Polynomial in the parameters (variables p_1..p_m) from an affine function.
LaurentPolynomial to_poly(const Affine& a) {
    const std::size_t m = a.size() - 1;
    LaurentPolynomial p = LaurentPolynomial::constant(m, a[0]);
    for (std::size_t k = 0; k < m; ++k) p += LaurentPolynomial::variable(m, k) * a[k + 1];
    return p;
}

LaurentPolynomial self_intersection(const SurfaceModel& s, const std::vector<Affine>& cls) {
    const std::size_t m = cls.front().size() - 1;
    std::vector<LaurentPolynomial> p;
    for (const auto& c : cls) p.push_back(to_poly(c));
    LaurentPolynomial out(m);
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (s.gram()[i][j] != 0) out += p[i] * p[j] * s.gram()[i][j];
    return out;
}

std::vector<Rational> univariate(const LaurentPolynomial& p) {
    std::vector<Rational> c;
    for (const auto& [e, x] : p.terms()) {
        auto k = static_cast<std::size_t>(e.at(0));
        if (c.size() <= k) c.resize(k + 1, 0);
        c[k] = x;
    }
    if (c.empty()) c.push_back(0);
    return c;
}

Rational eval_poly(const std::vector<Rational>& c, const Rational& t) {
    Rational r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * t + *it;
    return r;
}

Rational integrate_poly(const std::vector<Rational>& c, const Rational& a, const Rational& b) {
    std::vector<Rational> anti{0};
    for (std::size_t k = 0; k < c.size(); ++k) anti.push_back(c[k] / Rational(static_cast<long>(k + 1)));
    return eval_poly(anti, b) - eval_poly(anti, a);
}

// Interval of t where every condition a + b t >= 0 holds, intersected with [lo, hi].
std::optional<std::pair<Rational, Rational>> interval(const std::vector<Affine>& conds, Rational lo, Rational hi) {
    for (const auto& c : conds) {
        if (c[1] == 0) {
            if (c[0] < 0) return std::nullopt;
        } else if (c[1] > 0) {
            lo = std::max<Rational>(lo, -c[0] / c[1]);
        } else {
            hi = std::min<Rational>(hi, -c[0] / c[1]);
        }
    }
    if (lo >= hi) return std::nullopt;
    return std::make_pair(lo, hi);
}

// Polygon {(u,v) : a + b u + c v >= 0} as its vertex list (unordered).
std::vector<RatVector> polygon_vertices(const std::vector<Affine>& conds) {
    std::vector<RatVector> pts;
    for (std::size_t i = 0; i < conds.size(); ++i)
        for (std::size_t j = i + 1; j < conds.size(); ++j) {
            auto sol = solve_square({{conds[i][1], conds[i][2]}, {conds[j][1], conds[j][2]}}, {-conds[i][0], -conds[j][0]});
            if (!sol) continue;
            bool inside = std::all_of(conds.begin(), conds.end(), [&](const Affine& c) { return eval(c, *sol) >= 0; });
            if (inside && std::find(pts.begin(), pts.end(), *sol) == pts.end()) pts.push_back(*sol);
        }
    return pts;
}

struct Strip {
    std::array<Rational, 2> lo, hi;
};

// Cross-section of a polygon over the open strip (u0, u1), which contains no vertex.
std::optional<Strip> cross_section(const std::vector<Affine>& conds, const Rational& u0, const Rational& u1) {
    Rational um = (u0 + u1) / 2;
    std::optional<std::array<Rational, 2>> lo, hi;
    Rational lo_val, hi_val;
    for (const auto& c : conds) {
        if (c[2] == 0) {
            if (c[0] + c[1] * um < 0) return std::nullopt;
            continue;
        }
        std::array<Rational, 2> bound{-c[0] / c[2], -c[1] / c[2]};
        Rational at = bound[0] + bound[1] * um;
        if (c[2] > 0) {
            if (!lo || at > lo_val) lo = bound, lo_val = at;
        } else {
            if (!hi || at < hi_val) hi = bound, hi_val = at;
        }
    }
    if (!lo || !hi || lo_val >= hi_val) return std::nullopt;
    return Strip{*lo, *hi};
}

LaurentPolynomial affine_u(const std::array<Rational, 2>& a) {
    LaurentPolynomial p = LaurentPolynomial::constant(1, a[0]);
    p.add_term({1}, a[1]);
    return p;
}

}  // namespace

// ---------------------------------------------------------------- SurfaceModel

SurfaceModel::SurfaceModel(std::vector<std::string> curves, RatMatrix gram, std::vector<std::string> mori,
                           std::optional<DivisorClass> anticanonical)
    : curves_(std::move(curves)), gram_(std::move(gram)), antik_(std::move(anticanonical)) {
    const std::size_t n = curves_.size();
    if (n == 0) throw InputError("surface model: no curves");
    std::set<std::string> names(curves_.begin(), curves_.end());
    if (names.size() != n) throw InputError("surface model: duplicate curve names");
    if (gram_.size() != n) throw InputError("surface model: intersection matrix has the wrong number of rows");
    for (std::size_t i = 0; i < n; ++i) {
        if (gram_[i].size() != n) throw InputError("surface model: intersection matrix is not square");
        for (std::size_t j = 0; j < i; ++j)
            if (gram_[i][j] != gram_[j][i])
                throw InputError("surface model: intersection matrix is not symmetric at (" + curves_[i] + ", " +
                                 curves_[j] + ")");
    }
    if (mori.empty()) throw InputError("surface model: no Mori cone generators");
    for (const auto& m : mori) {
        auto it = std::find(curves_.begin(), curves_.end(), m);
        if (it == curves_.end()) throw InputError("surface model: Mori generator '" + m + "' is not a curve");
        mori_.push_back(static_cast<std::size_t>(it - curves_.begin()));
    }
    if (antik_) {
        if (antik_->size() != n) throw InputError("surface model: anticanonical class has the wrong length");
        if (intersect(*antik_, *antik_) <= 0) throw InputError("surface model: (-K)^2 must be positive");
    }
}

std::size_t SurfaceModel::index(const std::string& name) const {
    auto it = std::find(curves_.begin(), curves_.end(), name);
    if (it == curves_.end()) throw InputError("unknown curve '" + name + "'");
    return static_cast<std::size_t>(it - curves_.begin());
}

DivisorClass SurfaceModel::curve(const std::string& name) const {
    DivisorClass d = zero();
    d[index(name)] = 1;
    return d;
}

Rational SurfaceModel::intersect(const DivisorClass& a, const DivisorClass& b) const {
    Rational r = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < size(); ++j)
            if (b[j] != 0) r += a[i] * gram_[i][j] * b[j];
    }
    return r;
}

RatVector SurfaceModel::degrees(const DivisorClass& d) const {
    RatVector out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = dot(gram_[i], d);
    return out;
}

bool SurfaceModel::is_nef(const DivisorClass& d) const {
    auto deg = degrees(d);
    return std::all_of(deg.begin(), deg.end(), [](const Rational& x) { return x >= 0; });
}

std::string SurfaceModel::format(const DivisorClass& d) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < size(); ++i) {
        if (d[i] == 0) continue;
        Rational mag = abs(d[i]);
        os << (d[i] < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        first = false;
        if (mag != 1) os << to_string(mag) << ' ';
        os << curves_[i];
    }
    return first ? "0" : os.str();
}

// ---------------------------------------------------------------- Zariski

bool is_pseudo_effective(const SurfaceModel& s, const DivisorClass& d) { return !pseff_obstruction(s, d); }

ZariskiDecomposition zariski_decompose(const SurfaceModel& s, const DivisorClass& d) {
    if (d.size() != s.size()) throw ComputationError("zariski_decompose: class has the wrong length");
    if (auto h = pseff_obstruction(s, d))
        throw NotPseudoEffective("zariski_decompose: " + s.format(d) + " is not pseudo-effective (" + s.format(*h) +
                                     " is non-negative on the Mori cone but negative on it)",
                                 *h);
    std::vector<std::size_t> support;
    RatVector x;
    DivisorClass p = d;
    while (true) {
        RatVector rhs;
        for (auto c : support) rhs.push_back(s.degrees(d)[c]);
        x = support.empty() ? RatVector{} : *solve_square(sub_gram(s, support), rhs);
        p = d;
        for (std::size_t i = 0; i < support.size(); ++i) p[support[i]] -= x[i];
        auto deg = s.degrees(p);
        std::vector<std::size_t> bad;
        for (std::size_t c = 0; c < s.size(); ++c)
            if (deg[c] < 0 && !std::binary_search(support.begin(), support.end(), c)) bad.push_back(c);
        if (bad.empty()) break;
        support.insert(support.end(), bad.begin(), bad.end());
        std::sort(support.begin(), support.end());
        if (!negative_definite(sub_gram(s, support)))
            throw ComputationError("zariski_decompose: negative part support is not negative definite");
    }
    ZariskiDecomposition z;
    z.positive = p;
    for (std::size_t i = 0; i < support.size(); ++i)
        if (x[i] != 0) z.negative.emplace_back(support[i], x[i]);
    z.volume = s.intersect(p, p);
    return z;
}

Rational volume(const SurfaceModel& s, const DivisorClass& d) {
    if (!is_pseudo_effective(s, d)) return 0;
    return zariski_decompose(s, d).volume;
}

Rational pseff_threshold(const SurfaceModel& s, const DivisorClass& l, const DivisorClass& f) {
    if (is_zero(s.degrees(f)))
        throw ComputationError("pseff_threshold: F is numerically trivial");
    if (auto h = pseff_obstruction(s, l))
        throw NotPseudoEffective("pseff_threshold: L is not pseudo-effective", *h);
    EffectiveCone cone = effective_cone(s);
    for (const auto& h : cone.equalities)
        if (s.intersect(h, f) != 0) return 0;
    std::optional<Rational> tau;
    for (const auto& h : cone.facets) {
        Rational hf = s.intersect(h, f);
        if (hf <= 0) continue;
        Rational t = s.intersect(h, l) / hf;
        if (!tau || t < *tau) tau = t;
    }
    if (!tau) throw ComputationError("pseff_threshold: L - tF stays pseudo-effective for all t");
    return *tau;
}

// ---------------------------------------------------------------- volume functions

Rational PiecewisePolynomial::operator()(const Rational& t) const {
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (breakpoints[i] <= t && t <= breakpoints[i + 1]) return eval_poly(pieces[i], t);
    return 0;
}

Rational PiecewisePolynomial::integral() const {
    Rational r = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) r += integrate_poly(pieces[i], breakpoints[i], breakpoints[i + 1]);
    return r;
}

std::string PiecewisePolynomial::to_string(char var) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (i) os << "; ";
        os << "[" << fanolab::to_string(breakpoints[i]) << ", " << fanolab::to_string(breakpoints[i + 1])
           << "]: " << poly_string(pieces[i], var);
    }
    return pieces.empty() ? "0" : os.str();
}

PiecewisePolynomial volume_fn(const SurfaceModel& s, const DivisorClass& l, const DivisorClass& f) {
    const Rational tau = pseff_threshold(s, l, f);
    PiecewisePolynomial out;
    out.breakpoints.push_back(0);
    if (tau == 0) return out;
    std::vector<std::pair<std::pair<Rational, Rational>, std::vector<Rational>>> found;
    for (const auto& ch : chambers(s, {l, scale(-1, f)})) {
        auto iv = interval(ch.conditions, 0, tau);
        if (!iv) continue;
        bool dup = std::any_of(found.begin(), found.end(), [&](const auto& e) { return e.first == *iv; });
        if (!dup) found.emplace_back(*iv, univariate(self_intersection(s, ch.positive)));
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first.first < b.first.first; });
    Rational at = 0;
    for (const auto& [iv, poly] : found) {
        if (iv.first != at)
            throw ComputationError("volume_fn: Zariski chambers do not cover [" + to_string(at) + ", " +
                                   to_string(iv.first) + "]; the curve list is incomplete");
        if (!out.pieces.empty() && out.pieces.back() == poly) {
            out.breakpoints.back() = iv.second;
        } else {
            out.pieces.push_back(poly);
            out.breakpoints.push_back(iv.second);
        }
        at = iv.second;
    }
    if (at != tau) throw ComputationError("volume_fn: Zariski chambers stop before the pseudo-effective threshold");
    return out;
}

Rational s_invariant(const SurfaceModel& s, const DivisorClass& l, const DivisorClass& f) {
    Rational vl = volume(s, l);
    if (vl <= 0) throw ComputationError("s_invariant: L is not big");
    return volume_fn(s, l, f).integral() / vl;
}

// ---------------------------------------------------------------- valuations and walls

ValuationSpec quasimonomial_combine(const std::vector<QuasiMonomialPart>& parts) {
    if (parts.empty()) throw ComputationError("quasimonomial_combine: no parts");
    ValuationSpec v{0, 0, 0};
    Rational b = 0;
    for (const auto& p : parts) {
        if (p.weight <= 0) throw ComputationError("quasimonomial_combine: weights must be positive");
        v.A += p.weight * p.A;
        b += p.weight * p.beta;
    }
    v.S = v.A - b;
    return v;
}

Rational beta(const Rational& c, const Rational& slope, const ValuationSpec& v) {
    if (c < 0) throw ComputationError("beta: negative coefficient");
    return v.A - c * v.ord - (1 - slope * c) * v.S;
}

std::optional<Rational> wall_solve(const ValuationSpec& v, const Rational& slope) {
    Rational den = v.ord - slope * v.S;
    if (den == 0) return std::nullopt;
    return (v.A - v.S) / den;
}

std::vector<Wall> walls_in_range(const std::vector<NamedValuation>& vals, const Rational& slope, const Rational& lo,
                                 const Rational& hi) {
    if (vals.empty()) throw ComputationError("walls: no valuations given");
    std::map<Rational, std::vector<std::string>> found;
    for (const auto& v : vals) {
        auto c = wall_solve(v.spec, slope);
        if (c && lo < *c && *c <= hi) found[*c].push_back(v.name);
    }
    std::vector<Wall> out;
    for (auto& [c, names] : found) out.push_back({c, std::move(names)});
    return out;
}

// ---------------------------------------------------------------- threefold flags

std::size_t CubicForm::index(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InputError("unknown divisor '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

void CubicForm::set(std::size_t i, std::size_t j, std::size_t k, const Rational& value) {
    std::array<std::size_t, 3> key{i, j, k};
    std::sort(key.begin(), key.end());
    auto [it, inserted] = values_.emplace(key, value);
    if (!inserted && it->second != value)
        throw InputError("cubic form: conflicting values for " + names_.at(key[0]) + "." + names_.at(key[1]) + "." +
                         names_.at(key[2]));
}

Rational CubicForm::get(std::size_t i, std::size_t j, std::size_t k) const {
    std::array<std::size_t, 3> key{i, j, k};
    std::sort(key.begin(), key.end());
    auto it = values_.find(key);
    return it == values_.end() ? Rational(0) : it->second;
}

Rational CubicForm::operator()(const DivisorClass& a, const DivisorClass& b, const DivisorClass& c) const {
    Rational r = 0;
    for (const auto& [key, val] : values_) {
        // sum over the distinct permutations of the stored sorted key
        std::array<std::size_t, 3> p = key;
        do {
            r += val * a[p[0]] * b[p[1]] * c[p[2]];
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return r;
}

std::vector<FlagCell> flag_volume_2d(const FlagConfig& f) {
    const SurfaceModel& s = f.surface_model;
    // D(u, v) = R_0 + u R_1 - v C
    DivisorClass c = s.zero();
    c[f.flag_curve] = 1;
    std::vector<DivisorClass> d{f.restriction.constant, f.restriction.slope, scale(-1, c)};

    std::vector<Affine> domain{{0, 1, 0}, {f.u_max, -1, 0}, {0, 0, 1}};
    EffectiveCone cone = effective_cone(s);
    for (const auto& h : cone.equalities) {
        Affine a{s.intersect(h, d[0]), s.intersect(h, d[1]), s.intersect(h, d[2])};
        if (!is_zero(a)) throw ComputationError("flag_volume_2d: restricted class leaves the span of the Mori cone");
    }
    for (const auto& h : cone.facets) domain.push_back({s.intersect(h, d[0]), s.intersect(h, d[1]), s.intersect(h, d[2])});

    struct Region {
        const Chamber* chamber;
        std::vector<Affine> conds;
    };
    auto chs = chambers(s, d);
    std::vector<Region> regions;
    std::set<Rational> breaks{0, f.u_max};
    for (const auto& v : polygon_vertices(domain)) breaks.insert(v[0]);
    for (const auto& ch : chs) {
        std::vector<Affine> conds = domain;
        conds.insert(conds.end(), ch.conditions.begin(), ch.conditions.end());
        auto verts = polygon_vertices(conds);
        if (verts.size() < 3 || affine_rank(verts) < 2) continue;
        for (const auto& v : verts) breaks.insert(v[0]);
        regions.push_back({&ch, std::move(conds)});
    }

    std::vector<Rational> u(breaks.begin(), breaks.end());
    std::vector<FlagCell> cells;
    Rational covered = 0, domain_area = 0;
    for (std::size_t k = 0; k + 1 < u.size(); ++k) {
        if (auto st = cross_section(domain, u[k], u[k + 1]))
            domain_area += integrate_cell(LaurentPolynomial::constant(2, 1), u[k], u[k + 1], st->lo, st->hi);
    }
    for (const auto& r : regions) {
        std::optional<FlagCell> open;
        for (std::size_t k = 0; k + 1 < u.size(); ++k) {
            auto st = cross_section(r.conds, u[k], u[k + 1]);
            if (open && (!st || st->lo != open->v_lo || st->hi != open->v_hi)) {
                cells.push_back(std::move(*open));
                open.reset();
            }
            if (!st) continue;
            if (open) {
                open->u_hi = u[k + 1];
                continue;
            }
            FlagCell cell;
            cell.u_lo = u[k];
            cell.u_hi = u[k + 1];
            cell.v_lo = st->lo;
            cell.v_hi = st->hi;
            cell.support = r.chamber->support;
            cell.volume = self_intersection(s, r.chamber->positive);
            cell.degree = to_poly(affine_degree(s, r.chamber->positive, f.flag_curve, 2));
            for (std::size_t i = 0; i < cell.support.size(); ++i)
                cell.negative.emplace_back(cell.support[i], to_poly(r.chamber->x[i]));
            open = std::move(cell);
        }
        if (open) cells.push_back(std::move(*open));
    }
    for (const auto& cell : cells)
        covered += integrate_cell(LaurentPolynomial::constant(2, 1), cell.u_lo, cell.u_hi, cell.v_lo, cell.v_hi);
    if (covered != domain_area)
        throw ComputationError("flag_volume_2d: Zariski chambers cover area " + to_string(covered) + " of " +
                               to_string(domain_area) + "; the curve list is incomplete");
    std::sort(cells.begin(), cells.end(), [](const FlagCell& a, const FlagCell& b) {
        if (a.u_lo != b.u_lo) return a.u_lo < b.u_lo;
        return a.v_lo[0] + a.v_lo[1] * a.u_hi < b.v_lo[0] + b.v_lo[1] * b.u_hi;
    });
    return cells;
}

FlagRefinement flag_refine(const FlagConfig& f) {
    FlagRefinement r;
    const CubicForm& x = f.threefold;
    r.L_cubed = x(f.L, f.L, f.L);
    if (r.L_cubed <= 0) throw ComputationError("flag_refine: L^3 must be positive");
    // P(u) = A + u V
    DivisorClass a = sub(f.L, f.negative.constant);
    DivisorClass v = scale(-1, f.negative.slope);
    v[f.surface] -= 1;
    r.volume_polynomial = {x(a, a, a), 3 * x(a, a, v), 3 * x(a, v, v), x(v, v, v)};
    r.S_surface = integrate_poly(r.volume_polynomial, 0, f.u_max) / r.L_cubed;
    r.beta_surface = 1 - r.S_surface;

    auto cells = flag_volume_2d(f);
    Rational vol_int = 0, deg2_int = 0, fx_int = 0;
    for (const auto& c : cells) {
        vol_int += integrate_cell(c.volume, c.u_lo, c.u_hi, c.v_lo, c.v_hi);
        if (!f.point_multiplicity) continue;
        deg2_int += integrate_cell(c.degree * c.degree, c.u_lo, c.u_hi, c.v_lo, c.v_hi);
        LaurentPolynomial ord(2);
        for (const auto& [curve, coeff] : c.negative) {
            if (curve == f.flag_curve) continue;
            auto it = f.point_multiplicity->find(curve);
            if (it == f.point_multiplicity->end())
                throw ComputationError("flag_refine: incomplete incidence data, no multiplicity at the point for " +
                                       f.surface_model.curves()[curve]);
            ord += coeff * it->second;
        }
        fx_int += integrate_cell(c.degree * ord, c.u_lo, c.u_hi, c.v_lo, c.v_hi);
    }
    r.S_curve = 3 * vol_int / r.L_cubed;
    r.delta_lower_bound = std::min<Rational>(1 / r.S_curve, 1 / r.S_surface);
    if (f.point_multiplicity) {
        r.F_point = 6 * fx_int / r.L_cubed;
        r.S_point = 3 * deg2_int / r.L_cubed + *r.F_point;
        r.delta_lower_bound = std::min<Rational>(r.delta_lower_bound, 1 / *r.S_point);
    }
    return r;
}

Rational integrate_cell(const LaurentPolynomial& p, const Rational& u0, const Rational& u1,
                        const std::array<Rational, 2>& v_lo, const std::array<Rational, 2>& v_hi) {
    LaurentPolynomial lo = affine_u(v_lo), hi = affine_u(v_hi);
    LaurentPolynomial inner(1);
    for (const auto& [e, c] : p.terms()) {
        if (e[0] < 0 || e[1] < 0) throw ComputationError("integrate_cell: negative exponent");
        auto j = static_cast<unsigned>(e[1]);
        LaurentPolynomial prim = (hi.pow(j + 1) - lo.pow(j + 1)) * (c / Rational(static_cast<long>(j + 1)));
        inner += prim * LaurentPolynomial::monomial({e[0]});
    }
    return integrate_poly(univariate(inner), u0, u1);
}

// ---------------------------------------------------------------- local bounds

Integer local_volume_bound(const Rational& c) {
    if (c < 0 || c >= Rational(1, 4)) throw ComputationError("local_volume_bound: c must lie in [0, 1/4)");
    Rational one_minus = 1 - 4 * c;
    return floor_of(Rational(9) / (4 * one_minus * one_minus));
}

Integer dp_plurianticanonical_dim(const Integer& degree, const Integer& m) {
    if (degree < 1 || m < 0) throw ComputationError("dp_plurianticanonical_dim: need degree >= 1 and m >= 0");
    return 1 + m * (m + 1) * degree / 2;
}

}  // namespace fanolab
