#include "fanolab/linalg.hpp"

#include <utility>

namespace fanolab {

namespace {

// Gauss-Jordan in place; returns pivot columns.
std::vector<std::size_t> reduce(RatMatrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        Rational inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rank_of(RatMatrix rows) {
    if (rows.empty()) return 0;
    return reduce(rows, rows.front().size()).size();
}

Rational determinant(RatMatrix m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

std::optional<RatVector> solve_square(RatMatrix m, RatVector b) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) m[i].push_back(b[i]);
    auto piv = reduce(m, n + 1);
    if (piv.size() != n || piv.back() != n - 1) return std::nullopt;
    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
    return x;
}

std::vector<RatVector> null_space(const RatMatrix& m0, std::size_t cols) {
    RatMatrix m = m0;
    auto piv = reduce(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<RatVector> out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RatVector x(cols, 0);
        x[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m[r][f];
        out.push_back(std::move(x));
    }
    return out;
}

int affine_rank(const std::vector<RatVector>& pts) {
    if (pts.empty()) return -1;
    RatMatrix diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
    return static_cast<int>(rank_of(diffs));
}

RatVector add(const RatVector& a, const RatVector& b) {
    RatVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

RatVector sub(const RatVector& a, const RatVector& b) {
    RatVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

RatVector scale(const Rational& s, const RatVector& a) {
    RatVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
    return c;
}

}  // namespace fanolab
