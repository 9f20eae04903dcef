#pragma once

#include "fanolab/number.hpp"

#include <optional>
#include <vector>

namespace fanolab {

/// Small dense rational linear algebra.  Matrices are vectors of rows.
using RatMatrix = std::vector<RatVector>;

std::size_t rank_of(RatMatrix rows);
Rational determinant(RatMatrix m);

/// Unique solution of M x = b for square nonsingular M, nullopt otherwise.
std::optional<RatVector> solve_square(RatMatrix m, RatVector b);

/// Basis of the right null space {x : M x = 0}, in reduced echelon form.
std::vector<RatVector> null_space(const RatMatrix& m, std::size_t cols);

/// Affine dimension of a point set (-1 for the empty set).
int affine_rank(const std::vector<RatVector>& pts);

RatVector add(const RatVector& a, const RatVector& b);
RatVector sub(const RatVector& a, const RatVector& b);
RatVector scale(const Rational& s, const RatVector& a);

}  // namespace fanolab
