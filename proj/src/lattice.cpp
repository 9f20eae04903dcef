#include "fanolab/lattice.hpp"

#include <algorithm>
#include <utility>

namespace fanolab {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw ComputationError("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
    return from_rows(rows, rows.empty() ? 0 : rows.front().size());
}

IntVector IntMatrix::row(std::size_t i) const {
    return IntVector(a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_));
}

IntVector IntMatrix::col(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& b) const {
    if (cols_ != b.rows_) throw ComputationError("matrix shape mismatch");
    IntMatrix c(rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Integer& x = (*this)(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
        }
    return c;
}

IntVector IntMatrix::operator*(const IntVector& x) const {
    if (cols_ != x.size()) throw ComputationError("matrix-vector shape mismatch");
    IntVector y(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

Integer IntMatrix::determinant() const {
    if (rows_ != cols_) throw ComputationError("determinant of non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    IntMatrix m = *this;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = v;
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

namespace {

// Elementary operations recorded on the transform and its inverse.
struct Reducer {
    IntMatrix A, U, Uinv, V, Vinv;

    explicit Reducer(const IntMatrix& a)
        : A(a),
          U(IntMatrix::identity(a.rows())),
          Uinv(IntMatrix::identity(a.rows())),
          V(IntMatrix::identity(a.cols())),
          Vinv(IntMatrix::identity(a.cols())) {}

    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A(i, j), A(k, j));
        for (std::size_t j = 0; j < U.cols(); ++j) std::swap(U(i, j), U(k, j));
        for (std::size_t r = 0; r < Uinv.rows(); ++r) std::swap(Uinv(r, i), Uinv(r, k));
    }
    void swap_cols(std::size_t j, std::size_t k) {
        if (j == k) return;
        for (std::size_t i = 0; i < A.rows(); ++i) std::swap(A(i, j), A(i, k));
        for (std::size_t i = 0; i < V.rows(); ++i) std::swap(V(i, j), V(i, k));
        for (std::size_t c = 0; c < Vinv.cols(); ++c) std::swap(Vinv(j, c), Vinv(k, c));
    }
    // row_i += q * row_k
    void add_row(std::size_t i, std::size_t k, const Integer& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) += q * A(k, j);
        for (std::size_t j = 0; j < U.cols(); ++j) U(i, j) += q * U(k, j);
        for (std::size_t r = 0; r < Uinv.rows(); ++r) Uinv(r, k) -= q * Uinv(r, i);
    }
    // col_j += q * col_k
    void add_col(std::size_t j, std::size_t k, const Integer& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < A.rows(); ++i) A(i, j) += q * A(i, k);
        for (std::size_t i = 0; i < V.rows(); ++i) V(i, j) += q * V(i, k);
        for (std::size_t c = 0; c < Vinv.cols(); ++c) Vinv(k, c) -= q * Vinv(j, c);
    }
    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = -A(i, j);
        for (std::size_t j = 0; j < U.cols(); ++j) U(i, j) = -U(i, j);
        for (std::size_t r = 0; r < Uinv.rows(); ++r) Uinv(r, i) = -Uinv(r, i);
    }
};

Integer trunc_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

IntVector SnfResult::invariant_factors() const {
    IntVector out;
    for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
    return out;
}

SnfResult smith_normal_form(const IntMatrix& a) {
    Reducer r(a);
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t t = 0;
    while (t < m && t < n) {
        // minimal |entry| pivot; ties go to the first in (row, col) order
        bool found = false;
        std::size_t pi = 0, pj = 0;
        Integer best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (r.A(i, j) == 0) continue;
                Integer v = abs(r.A(i, j));
                if (!found || v < best) {
                    found = true;
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);

        bool dirty = false;
        for (std::size_t i = t + 1; i < m; ++i) {
            r.add_row(i, t, -trunc_div(r.A(i, t), r.A(t, t)));
            if (r.A(i, t) != 0) dirty = true;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
            r.add_col(j, t, -trunc_div(r.A(t, j), r.A(t, t)));
            if (r.A(t, j) != 0) dirty = true;
        }
        if (dirty) continue;

        bool divides = true;
        for (std::size_t i = t + 1; i < m && divides; ++i)
            for (std::size_t j = t + 1; j < n; ++j)
                if (!mpz_divisible_p(r.A(i, j).get_mpz_t(), r.A(t, t).get_mpz_t())) {
                    r.add_row(t, i, 1);
                    divides = false;
                    break;
                }
        if (!divides) continue;

        if (r.A(t, t) < 0) r.negate_row(t);
        ++t;
    }
    return SnfResult{std::move(r.U), std::move(r.A), std::move(r.V), std::move(r.Uinv), std::move(r.Vinv), t};
}

Cokernel cokernel(const IntMatrix& a) {
    SnfResult s = smith_normal_form(a);
    Cokernel c;
    c.free_rank = a.rows() - s.rank;
    for (const auto& d : s.invariant_factors())
        if (d > 1) c.torsion.push_back(d);
    return c;
}

Integer content(const IntVector& v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

IntVector primitive(const IntVector& v) {
    Integer g = content(v);
    if (g == 0) throw ComputationError("primitive: zero vector");
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
    return out;
}

SublatticeIndex sublattice_index(const std::vector<IntVector>& generators) {
    if (generators.empty()) throw ComputationError("sublattice_index: no generators");
    const std::size_t k = generators.size();
    IntMatrix g = IntMatrix::from_rows(generators);
    SnfResult s = smith_normal_form(g);
    if (s.rank != k) throw ComputationError("sublattice_index: generators are linearly dependent");

    SublatticeIndex out;
    IntVector d = s.invariant_factors();
    out.index = 1;
    for (const auto& x : d) out.index *= x;
    for (std::size_t i = 0; i < k; ++i) out.saturation_basis.push_back(s.V_inv.row(i));

    // enumerate a in prod [0, d_i); point = sum a_i w_i; coordinates c = (a/d) U
    std::vector<unsigned long> bound(k), a(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (!d[i].fits_ulong_p() || d[i] > 1000000) throw ComputationError("sublattice_index: index too large to enumerate");
        bound[i] = d[i].get_ui();
    }
    const std::size_t n = g.cols();
    while (true) {
        RatVector c(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            Rational ai(static_cast<long>(a[i]));
            ai /= Rational(d[i]);
            for (std::size_t j = 0; j < k; ++j) c[j] += ai * Rational(s.U(i, j));
        }
        for (auto& x : c) x -= Rational(floor_of(x));
        RatVector p(n, 0);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t col = 0; col < n; ++col) p[col] += c[j] * Rational(generators[j][col]);
        out.coset_representatives.push_back(to_integer(p));
        out.coset_coordinates.push_back(c);

        std::size_t i = 0;
        while (i < k && ++a[i] == bound[i]) a[i++] = 0;
        if (i == k) break;
    }
    return out;
}

std::vector<IntVector> kernel_lattice(const IntMatrix& a) {
    SnfResult s = smith_normal_form(a);
    std::vector<IntVector> out;
    for (std::size_t j = s.rank; j < a.cols(); ++j) out.push_back(s.V.col(j));
    return out;
}

HermiteResult hermite_normal_form(const IntMatrix& a) {
    Reducer r(a);
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        // Euclid down the column until a single nonzero entry remains at `row`
        while (true) {
            bool found = false;
            std::size_t p = row;
            Integer best;
            for (std::size_t i = row; i < m; ++i) {
                if (r.A(i, col) == 0) continue;
                Integer v = abs(r.A(i, col));
                if (!found || v < best) {
                    found = true;
                    best = v;
                    p = i;
                }
            }
            if (!found) break;
            r.swap_rows(row, p);
            bool clean = true;
            for (std::size_t i = row + 1; i < m; ++i) {
                r.add_row(i, row, -trunc_div(r.A(i, col), r.A(row, col)));
                if (r.A(i, col) != 0) clean = false;
            }
            if (clean) break;
        }
        if (r.A(row, col) == 0) continue;
        if (r.A(row, col) < 0) r.negate_row(row);
        for (std::size_t i = 0; i < row; ++i) r.add_row(i, row, -floor_div(r.A(i, col), r.A(row, col)));
        ++row;
    }
    return {r.A, r.U};
}

IntMatrix unimodular_inverse(const IntMatrix& w) {
    if (w.rows() != w.cols() || abs(w.determinant()) != 1) throw ComputationError("unimodular_inverse: not unimodular");
    SnfResult s = smith_normal_form(w);
    // U W V = I, hence W^-1 = V U
    return s.V * s.U;
}

}  // namespace fanolab
