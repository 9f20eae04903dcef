#include "oracles/polytope_oracles.hpp"

#include "fanolab/linalg.hpp"

#include <functional>

namespace oracle {

using fanolab::Rational;

namespace {

bool in_simplex(const std::vector<RatVector>& s, const RatVector& p) {
    // affine coordinates of p relative to s[0]
    const std::size_t d = p.size(), k = s.size() - 1;
    fanolab::RatMatrix m;
    for (std::size_t r = 0; r < d; ++r) {
        RatVector row;
        for (std::size_t i = 1; i <= k; ++i) row.push_back(s[i][r] - s[0][r]);
        row.push_back(p[r] - s[0][r]);
        m.push_back(row);
    }
    // elimination on the augmented system
    std::size_t rank = 0;
    std::vector<std::size_t> piv;
    for (std::size_t c = 0; c < k && rank < d; ++c) {
        std::size_t q = rank;
        while (q < d && m[q][c] == 0) ++q;
        if (q == d) continue;
        std::swap(m[q], m[rank]);
        Rational inv = 1 / m[rank][c];
        for (auto& x : m[rank]) x *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (std::size_t j = 0; j <= k; ++j) m[r][j] -= f * m[rank][j];
        }
        piv.push_back(c);
        ++rank;
    }
    for (std::size_t r = rank; r < d; ++r)
        if (m[r][k] != 0) return false;
    if (rank != k) return false;  // degenerate simplex, skip
    Rational sum = 0;
    for (std::size_t r = 0; r < rank; ++r) {
        if (m[r][k] < 0) return false;
        sum += m[r][k];
    }
    return sum <= 1;
}

}  // namespace

bool in_hull_caratheodory(const std::vector<RatVector>& points, const RatVector& p) {
    const std::size_t n = points.size(), d = p.size();
    std::vector<RatVector> chosen;
    std::function<bool(std::size_t)> rec = [&](std::size_t start) {
        if (!chosen.empty() && in_simplex(chosen, p)) return true;
        if (chosen.size() == d + 1) return false;
        for (std::size_t i = start; i < n; ++i) {
            chosen.push_back(points[i]);
            if (rec(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return rec(0);
}

std::vector<RatVector> polar_of_simplex(const std::vector<RatVector>& simplex) {
    std::vector<RatVector> out;
    for (std::size_t skip = 0; skip < simplex.size(); ++skip) {
        fanolab::RatMatrix m;
        RatVector b;
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == skip) continue;
            m.push_back(simplex[i]);
            b.push_back(-1);
        }
        out.push_back(*fanolab::solve_square(m, b));
    }
    return out;
}

}  // namespace oracle
