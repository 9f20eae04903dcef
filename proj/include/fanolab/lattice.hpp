#pragma once

#include "fanolab/number.hpp"

#include <cstddef>
#include <vector>

namespace fanolab {

/// Dense row-major matrix over the integers.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
    static IntMatrix from_rows(const std::vector<IntVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntVector row(std::size_t i) const;
    IntVector col(std::size_t j) const;

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& b) const;
    IntVector operator*(const IntVector& x) const;
    bool operator==(const IntMatrix& b) const = default;

    /// Bareiss fraction-free elimination; square matrices only.
    Integer determinant() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> a_;
};

struct SnfResult {
    IntMatrix U, D, V;
    IntMatrix U_inv, V_inv;
    std::size_t rank = 0;

    /// d_1 | d_2 | ... over the first `rank` diagonal entries.
    IntVector invariant_factors() const;
};

SnfResult smith_normal_form(const IntMatrix& a);

/// Cokernel Z^rows / A Z^cols split as free rank plus torsion factors > 1.
struct Cokernel {
    std::size_t free_rank = 0;
    IntVector torsion;
};
Cokernel cokernel(const IntMatrix& a);

IntVector primitive(const IntVector& v);

/// Inverse of a square matrix of determinant +-1; throws ComputationError otherwise.
IntMatrix unimodular_inverse(const IntMatrix& w);
Integer content(const IntVector& v);

struct SublatticeIndex {
    Integer index;
    /// Basis of the saturation, one vector per generator.
    std::vector<IntVector> saturation_basis;
    /// One lattice point per coset of span(g) in its saturation, each
    /// reduced into the half-open parallelepiped spanned by the generators.
    std::vector<IntVector> coset_representatives;
    /// Coefficients of each representative with respect to the generators.
    std::vector<RatVector> coset_coordinates;
};

SublatticeIndex sublattice_index(const std::vector<IntVector>& generators);

/// Saturated basis of {x : A x = 0}.
std::vector<IntVector> kernel_lattice(const IntMatrix& a);

/// Row-style Hermite normal form: upper triangular, positive pivots,
/// entries above each pivot reduced into [0, pivot).  Returns H and the
/// unimodular W with W * A = H.
struct HermiteResult {
    IntMatrix H, W;
};
HermiteResult hermite_normal_form(const IntMatrix& a);

}  // namespace fanolab
