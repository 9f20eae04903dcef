#include "fanolab/polytope.hpp"

#include "fanolab/linalg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace fanolab {

bool RationalPolytope::contains(const RatVector& x) const {
    for (const auto& f : facets)
        if (dot(to_rational(f.normal), x) < f.offset) return false;
    return true;
}

bool RationalPolytope::strictly_contains(const RatVector& x) const {
    for (const auto& f : facets)
        if (dot(to_rational(f.normal), x) <= f.offset) return false;
    return true;
}

DegenerateHull::DegenerateHull(int affine_rank, std::size_t ambient)
    : ComputationError("degenerate point set: affine rank " + std::to_string(affine_rank) + " in dimension " +
                       std::to_string(ambient)),
      rank_(affine_rank) {}

namespace {

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Hull arithmetic runs on __int128 when every scaled coordinate fits in 24
// bits (d <= 4 keeps all minors below 2^105) and on GMP integers otherwise.
using Wide = __int128;

Integer to_integer(Wide x) {
    bool neg = x < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(x) : static_cast<unsigned __int128>(x);
    Integer hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0UL));
    Integer r = (hi << 64) + lo;
    return neg ? Integer(-r) : r;
}
Integer to_integer(const Integer& x) { return x; }

// Determinant of a k x k matrix given as rows, k <= 3 in practice.
template <class W>
W small_det(const std::vector<std::vector<W>>& m) {
    const std::size_t k = m.size();
    if (k == 0) return 1;
    if (k == 1) return m[0][0];
    if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    W det = 0;
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<std::vector<W>> minor;
        for (std::size_t r = 1; r < k; ++r) {
            std::vector<W> row;
            for (std::size_t j = 0; j < k; ++j)
                if (j != c) row.push_back(m[r][j]);
            minor.push_back(std::move(row));
        }
        W t = m[0][c] * small_det(minor);
        if (c % 2 == 0) det += t;
        else det -= t;
    }
    return det;
}

template <class W>
W wide_gcd(W a, W b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        W t = a % b;
        a = b;
        b = t;
    }
    return a;
}

template <class W>
std::size_t integer_rank(std::vector<std::vector<W>> rows) {
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            W a = rows[rank][c], b = rows[r][c];
            W g = 0;
            for (std::size_t j = 0; j < cols; ++j) {
                rows[r][j] = rows[r][j] * a - rows[rank][j] * b;
                g = wide_gcd<W>(g, rows[r][j]);
            }
            if (g > 1)
                for (auto& x : rows[r]) x /= g;
        }
        ++rank;
    }
    return rank;
}

template <class W>
struct RawFacet {
    std::vector<W> normal;
    W offset;
    std::vector<std::size_t> vertices;
};

template <class W>
struct RawHull {
    std::vector<RawFacet<W>> facets;  // vertex indices refer to the input list
    std::vector<bool> is_vertex;
};

// All facets of the hull of a full-dimensional integral point set, testing
// every d-subset as a candidate supporting hyperplane.
template <class W>
RawHull<W> brute_hull(const std::vector<std::vector<W>>& pts, std::size_t d) {
    RawHull<W> out;
    std::set<std::vector<W>> seen;
    std::vector<W> vals(pts.size());
    for_each_subset(pts.size(), d, [&](const std::vector<std::size_t>& s) {
        std::vector<std::vector<W>> diffs(d - 1, std::vector<W>(d));
        for (std::size_t i = 1; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) diffs[i - 1][j] = pts[s[i]][j] - pts[s[0]][j];
        // cofactor expansion gives the normal to the d-1 difference vectors
        std::vector<W> n(d);
        W g = 0;
        for (std::size_t c = 0; c < d; ++c) {
            std::vector<std::vector<W>> minor;
            for (const auto& row : diffs) {
                std::vector<W> r;
                for (std::size_t j = 0; j < d; ++j)
                    if (j != c) r.push_back(row[j]);
                minor.push_back(std::move(r));
            }
            W v = small_det(minor);
            if (c % 2 == 0) n[c] = v;
            else n[c] = -v;
            g = wide_gcd<W>(g, n[c]);
        }
        if (g == 0) return;
        for (auto& x : n) x /= g;
        W b = 0;
        for (std::size_t j = 0; j < d; ++j) b += n[j] * pts[s[0]][j];
        int sign = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            W v = -b;
            for (std::size_t j = 0; j < d; ++j) v += n[j] * pts[i][j];
            int c = (v > 0) - (v < 0);
            vals[i] = v;
            if (c == 0) continue;
            if (sign == 0) sign = c;
            else if (c != sign) return;
        }
        if (sign < 0) {
            for (auto& x : n) x = -x;
            b = -b;
        }
        if (!seen.insert(n).second) return;
        RawFacet<W> f{n, b, {}};
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (vals[i] == 0) f.vertices.push_back(i);
        out.facets.push_back(std::move(f));
    });
    out.is_vertex.assign(pts.size(), false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::vector<W>> normals;
        for (const auto& f : out.facets)
            if (std::binary_search(f.vertices.begin(), f.vertices.end(), i)) normals.push_back(f.normal);
        out.is_vertex[i] = integer_rank(normals) == d;
    }
    return out;
}

template <class W>
bool outside(const RawHull<W>& h, const std::vector<W>& p) {
    for (const auto& f : h.facets) {
        W v = 0;
        for (std::size_t j = 0; j < p.size(); ++j) v += f.normal[j] * p[j];
        if (v < f.offset) return true;
    }
    return false;
}

std::vector<RatVector> dedup(const std::vector<RatVector>& points) {
    std::vector<RatVector> out;
    std::set<RatVector, bool (*)(const RatVector&, const RatVector&)> seen(&lex_less<Rational>);
    for (const auto& p : points)
        if (seen.insert(p).second) out.push_back(p);
    return out;
}

template <class W>
RationalPolytope hull_on(const std::vector<RatVector>& pts, const std::vector<std::vector<W>>& ipts, std::size_t d,
                         const Integer& scale_by) {
    // insert far-out points first so that most interior points are skipped cheaply
    std::vector<std::size_t> order(ipts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    {
        std::vector<W> sum(d, 0);
        for (const auto& p : ipts)
            for (std::size_t j = 0; j < d; ++j) sum[j] += p[j];
        const W n = static_cast<long>(ipts.size());
        std::vector<W> spread(ipts.size(), 0);
        for (std::size_t i = 0; i < ipts.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) {
                W t = n * ipts[i][j] - sum[j];
                spread[i] += t * t;
            }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return spread[a] > spread[b]; });
    }

    std::vector<std::size_t> current;
    RatMatrix basis;
    for (std::size_t idx : order) {
        if (current.size() == d + 1) break;
        if (current.empty()) {
            current.push_back(idx);
            continue;
        }
        RatMatrix trial = basis;
        trial.push_back(sub(pts[idx], pts[current.front()]));
        if (rank_of(trial) == trial.size()) {
            basis = std::move(trial);
            current.push_back(idx);
        }
    }
    auto gather = [&](const std::vector<std::size_t>& ids) {
        std::vector<std::vector<W>> v;
        for (auto i : ids) v.push_back(ipts[i]);
        return v;
    };
    RawHull<W> h = brute_hull(gather(current), d);
    std::set<std::size_t> in_current(current.begin(), current.end());
    for (std::size_t i : order) {
        if (in_current.count(i) || !outside(h, ipts[i])) continue;
        current.push_back(i);
        h = brute_hull(gather(current), d);
        std::vector<std::size_t> kept;
        for (std::size_t k = 0; k < current.size(); ++k)
            if (h.is_vertex[k]) kept.push_back(current[k]);
        if (kept.size() != current.size()) {
            current = kept;
            h = brute_hull(gather(current), d);
        }
        in_current = std::set<std::size_t>(current.begin(), current.end());
    }
    std::sort(current.begin(), current.end());
    h = brute_hull(gather(current), d);

    RationalPolytope q;
    q.dim = d;
    for (auto i : current) q.vertices.push_back(pts[i]);
    for (auto& f : h.facets) {
        Facet out;
        for (const auto& x : f.normal) out.normal.push_back(to_integer(x));
        out.offset = Rational(to_integer(f.offset)) / scale_by;
        out.vertices = std::move(f.vertices);
        q.facets.push_back(std::move(out));
    }
    return q;
}


}  // namespace

RationalPolytope convex_hull(const std::vector<RatVector>& input) {
    if (input.empty()) throw DegenerateHull(-1, 0);
    const std::size_t d = input.front().size();
    for (const auto& p : input)
        if (p.size() != d) throw ComputationError("convex_hull: points of mixed dimension");
    std::vector<RatVector> pts = dedup(input);
    int r = affine_rank(pts);
    if (r != static_cast<int>(d) || d == 0) throw DegenerateHull(r, d);
    if (d > 4) throw ComputationError("convex_hull: dimension above 4 is not supported");

    // clear denominators; the hull is computed on integral points
    Integer scale_by = 1;
    for (const auto& p : pts)
        for (const auto& x : p) scale_by = lcm(scale_by, x.get_den());
    std::vector<std::vector<Integer>> big;
    bool small = true;
    for (const auto& p : pts) {
        std::vector<Integer> q;
        for (const auto& x : p) {
            q.push_back(Rational(x * scale_by).get_num());
            small = small && abs(q.back()) <= (Integer(1) << 24);
        }
        big.push_back(std::move(q));
    }
    if (!small) return hull_on<Integer>(pts, big, d, scale_by);
    std::vector<std::vector<Wide>> ipts;
    for (const auto& q : big) {
        std::vector<Wide> r;
        for (const auto& x : q) r.push_back(x.get_si());
        ipts.push_back(std::move(r));
    }
    return hull_on<Wide>(pts, ipts, d, scale_by);
}

RationalPolytope convex_hull(const std::vector<IntVector>& points) {
    std::vector<RatVector> r;
    for (const auto& p : points) r.push_back(to_rational(p));
    return convex_hull(r);
}

std::vector<RatVector> vertex_set(const std::vector<RatVector>& input) {
    std::vector<RatVector> pts = dedup(input);
    if (pts.empty()) return {};
    const std::size_t d = pts.front().size();
    int r = affine_rank(pts);
    if (r == static_cast<int>(d)) return convex_hull(pts).vertices;
    if (r == 0) return {pts.front()};
    // project onto r coordinates where the affine hull is a graph
    std::vector<std::size_t> coords;
    for_each_subset(d, static_cast<std::size_t>(r), [&](const std::vector<std::size_t>& cs) {
        if (!coords.empty()) return;
        RatMatrix m;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            RatVector row;
            for (auto c : cs) row.push_back(pts[i][c] - pts[0][c]);
            m.push_back(row);
        }
        if (rank_of(m) == static_cast<std::size_t>(r)) coords = cs;
    });
    std::vector<RatVector> proj;
    for (const auto& p : pts) {
        RatVector x;
        for (auto c : coords) x.push_back(p[c]);
        proj.push_back(x);
    }
    auto h = convex_hull(proj);
    std::vector<RatVector> out;
    for (const auto& v : h.vertices)
        for (std::size_t i = 0; i < proj.size(); ++i)
            if (proj[i] == v) {
                out.push_back(pts[i]);
                break;
            }
    return out;
}

FanoPolytope::FanoPolytope(std::vector<IntVector> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw ComputationError("Fano polytope: no vertices");
    dim_ = vertices_.front().size();
    if (dim_ < 1 || dim_ > 4) throw ComputationError("Fano polytope: dimension must be between 1 and 4");
    hull_ = convex_hull(vertices_);
    if (hull_.vertices.size() != vertices_.size())
        throw ComputationError("Fano polytope: input contains points that are not vertices");
    for (const auto& v : vertices_)
        if (content(v) != 1) throw ComputationError("Fano polytope: vertex " + format_vector(v) + " is not primitive");
    for (const auto& f : hull_.facets)
        if (f.offset >= 0) throw ComputationError("Fano polytope: origin is not in the interior");
}

bool FanoPolytope::operator==(const FanoPolytope& o) const {
    if (dim_ != o.dim_ || vertices_.size() != o.vertices_.size()) return false;
    auto a = vertices_, b = o.vertices_;
    std::sort(a.begin(), a.end(), &lex_less<Integer>);
    std::sort(b.begin(), b.end(), &lex_less<Integer>);
    return a == b;
}

IntMatrix FanoPolytope::vertex_matrix() const {
    return IntMatrix::from_rows(vertices_, dim_).transpose();
}

FanoPolytope fano_hull(const std::vector<IntVector>& points) {
    auto h = convex_hull(points);
    std::vector<IntVector> v;
    for (const auto& x : h.vertices) v.push_back(to_integer(x));
    return FanoPolytope(v);
}

RationalPolytope polar(const RationalPolytope& q) {
    std::vector<RatVector> verts;
    for (const auto& f : q.facets) {
        if (f.offset >= 0) throw ComputationError("polar: origin is not in the interior");
        verts.push_back(scale(-1 / f.offset, to_rational(f.normal)));
    }
    return convex_hull(verts);
}

RationalPolytope polar(const FanoPolytope& p) { return polar(p.hull()); }

namespace {

using Face = std::vector<std::size_t>;

int face_rank(const RationalPolytope& q, const Face& f) {
    std::vector<RatVector> pts;
    for (auto i : f) pts.push_back(q.vertices[i]);
    return affine_rank(pts);
}

std::vector<Face> subfacets(const RationalPolytope& q, const Face& face, int k) {
    std::vector<Face> out;
    if (k == static_cast<int>(q.dim)) {
        for (const auto& f : q.facets) out.push_back(f.vertices);
        return out;
    }
    std::set<Face> seen;
    for (const auto& g : q.facets) {
        Face meet;
        std::set_intersection(face.begin(), face.end(), g.vertices.begin(), g.vertices.end(), std::back_inserter(meet));
        if (meet.empty() || meet.size() == face.size()) continue;
        if (face_rank(q, meet) != k - 1) continue;
        if (seen.insert(meet).second) out.push_back(meet);
    }
    return out;
}

std::size_t lex_min_vertex(const RationalPolytope& q, const Face& f) {
    std::size_t best = f.front();
    for (auto i : f)
        if (lex_less(q.vertices[i], q.vertices[best])) best = i;
    return best;
}

// pulling triangulation of a k-dimensional face
std::vector<Face> pull(const RationalPolytope& q, const Face& face, int k) {
    if (k == 0) return {{face.front()}};
    std::size_t apex = lex_min_vertex(q, face);
    std::vector<Face> out;
    for (const auto& g : subfacets(q, face, k)) {
        if (std::binary_search(g.begin(), g.end(), apex)) continue;
        for (auto s : pull(q, g, k - 1)) {
            s.push_back(apex);
            std::sort(s.begin(), s.end());
            out.push_back(std::move(s));
        }
    }
    return out;
}

Rational simplex_volume(const std::vector<RatVector>& v) {
    RatMatrix m;
    for (std::size_t i = 1; i < v.size(); ++i) m.push_back(sub(v[i], v[0]));
    Rational det = abs(determinant(m));
    Rational fact = 1;
    for (std::size_t i = 2; i < v.size(); ++i) fact *= static_cast<long>(i);
    return det / fact;
}

}  // namespace

std::vector<std::vector<std::size_t>> triangulate(const RationalPolytope& q) {
    Face all(q.vertices.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return pull(q, all, static_cast<int>(q.dim));
}

Rational volume(const RationalPolytope& q) {
    Rational total = 0;
    for (const auto& s : triangulate(q)) {
        std::vector<RatVector> v;
        for (auto i : s) v.push_back(q.vertices[i]);
        total += simplex_volume(v);
    }
    return total;
}

Rational volume_by_facet_pyramids(const RationalPolytope& q) {
    RatVector centre(q.dim, 0);
    for (const auto& v : q.vertices) centre = add(centre, v);
    centre = scale(Rational(1) / static_cast<long>(q.vertices.size()), centre);
    Rational total = 0;
    for (const auto& f : q.facets)
        for (const auto& s : pull(q, f.vertices, static_cast<int>(q.dim) - 1)) {
            std::vector<RatVector> v{centre};
            for (auto i : s) v.push_back(q.vertices[i]);
            total += simplex_volume(v);
        }
    return total;
}

RatVector barycentre(const RationalPolytope& q) {
    Rational total = 0;
    RatVector moment(q.dim, 0);
    for (const auto& s : triangulate(q)) {
        std::vector<RatVector> v;
        RatVector c(q.dim, 0);
        for (auto i : s) {
            v.push_back(q.vertices[i]);
            c = add(c, q.vertices[i]);
        }
        Rational vol = simplex_volume(v);
        total += vol;
        moment = add(moment, scale(vol / static_cast<long>(s.size()), c));
    }
    return scale(1 / total, moment);
}

KpsCheck kps_toric_check(const FanoPolytope& p) {
    KpsCheck k;
    k.barycentre = barycentre(polar(p));
    k.polystable = is_zero(k.barycentre);
    return k;
}

Rational anticanonical_degree(const FanoPolytope& p) {
    Rational fact = 1;
    for (std::size_t i = 2; i <= p.dim(); ++i) fact *= static_cast<long>(i);
    return fact * volume(polar(p));
}

NormalForm gl_normal_form_with_transforms(const FanoPolytope& p) {
    const std::size_t d = p.dim(), n = p.vertices().size();
    const auto& verts = p.vertices();
    std::vector<Integer> best;
    std::vector<IntMatrix> transforms;

    std::vector<std::size_t> tuple(d);
    std::vector<bool> used(n, false);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos < d) {
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i]) continue;
                used[i] = true;
                tuple[pos] = i;
                rec(pos + 1);
                used[i] = false;
            }
            return;
        }
        IntMatrix block(d, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) block(i, j) = verts[tuple[j]][i];
        if (block.determinant() == 0) return;
        HermiteResult h = hermite_normal_form(block);
        std::vector<Integer> cand;
        cand.reserve(n * d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) cand.push_back(h.H(i, j));
        std::vector<IntVector> rest;
        for (std::size_t k = 0; k < n; ++k)
            if (!used[k]) rest.push_back(h.W * verts[k]);
        std::sort(rest.begin(), rest.end(), lex_less<Integer>);
        for (const auto& c : rest) cand.insert(cand.end(), c.begin(), c.end());
        if (best.empty() || lex_less(cand, best)) {
            best = std::move(cand);
            transforms.assign(1, h.W);
        } else if (cand == best) {
            if (std::find(transforms.begin(), transforms.end(), h.W) == transforms.end()) transforms.push_back(h.W);
        }
    };
    rec(0);

    std::vector<IntVector> nf;
    for (std::size_t k = 0; k < n; ++k) nf.emplace_back(best.begin() + static_cast<long>(k * d), best.begin() + static_cast<long>((k + 1) * d));
    return {FanoPolytope(nf), transforms};
}

FanoPolytope gl_normal_form(const FanoPolytope& p) { return gl_normal_form_with_transforms(p).polytope; }

std::vector<IntVector> lattice_points(const RationalPolytope& q) {
    const std::size_t d = q.dim;
    IntVector lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        lo[i] = ceil_of(q.vertices[0][i]);
        hi[i] = floor_of(q.vertices[0][i]);
        for (const auto& v : q.vertices) {
            lo[i] = std::min(lo[i], ceil_of(v[i]));
            hi[i] = std::max(hi[i], floor_of(v[i]));
        }
    }
    std::vector<IntVector> out;
    for (std::size_t i = 0; i < d; ++i)
        if (lo[i] > hi[i]) return out;
    IntVector x = lo;
    while (true) {
        if (q.contains(to_rational(x))) out.push_back(x);
        std::size_t j = 0;
        while (j < d && x[j] == hi[j]) x[j] = lo[j], ++j;
        if (j == d) break;
        ++x[j];
    }
    return out;
}

}  // namespace fanolab
