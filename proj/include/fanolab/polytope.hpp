#pragma once

#include "fanolab/lattice.hpp"
#include "fanolab/number.hpp"

#include <cstddef>
#include <vector>

namespace fanolab {

/// Half-space <normal, x> >= offset with primitive integral normal.
struct Facet {
    IntVector normal;
    Rational offset;
    std::vector<std::size_t> vertices;  // indices into the owning polytope
};

struct RationalPolytope {
    std::size_t dim = 0;
    std::vector<RatVector> vertices;
    std::vector<Facet> facets;

    bool contains(const RatVector& x) const;
    bool strictly_contains(const RatVector& x) const;
};

/// Lattice polytope with the origin strictly inside and primitive vertices.
class FanoPolytope {
  public:
    FanoPolytope() = default;
    /// Validates: full-dimensional, every point a vertex, primitive, origin interior.
    explicit FanoPolytope(std::vector<IntVector> vertices);

    std::size_t dim() const { return dim_; }
    const std::vector<IntVector>& vertices() const { return vertices_; }
    const RationalPolytope& hull() const { return hull_; }
    const std::vector<Facet>& facets() const { return hull_.facets; }

    /// Columns are the vertices.
    IntMatrix vertex_matrix() const;

    /// Equality of vertex sets.
    bool operator==(const FanoPolytope& o) const;

  private:
    std::size_t dim_ = 0;
    std::vector<IntVector> vertices_;
    RationalPolytope hull_;
};

/// Hull of a full-dimensional point set in dimension <= 4.  Lower-dimensional
/// input raises DegenerateHull.
RationalPolytope convex_hull(const std::vector<RatVector>& points);
RationalPolytope convex_hull(const std::vector<IntVector>& points);

class DegenerateHull : public ComputationError {
  public:
    DegenerateHull(int affine_rank, std::size_t ambient);
    int affine_rank() const { return rank_; }

  private:
    int rank_;
};

/// Vertices of the hull of any finite point set, including lower-dimensional ones.
std::vector<RatVector> vertex_set(const std::vector<RatVector>& points);

/// The Fano polytope spanned by a point set, or an error if it is not Fano.
FanoPolytope fano_hull(const std::vector<IntVector>& points);

RationalPolytope polar(const RationalPolytope& q);
RationalPolytope polar(const FanoPolytope& p);

/// Sets of vertex indices; each face of dimension k carries k+1 indices.
std::vector<std::vector<std::size_t>> triangulate(const RationalPolytope& q);

Rational volume(const RationalPolytope& q);
/// Independent path: cone from the vertex centroid over triangulated facets.
Rational volume_by_facet_pyramids(const RationalPolytope& q);
RatVector barycentre(const RationalPolytope& q);

struct KpsCheck {
    bool polystable = false;
    RatVector barycentre;
};
KpsCheck kps_toric_check(const FanoPolytope& p);

/// n! vol(P°).
Rational anticanonical_degree(const FanoPolytope& p);

struct NormalForm {
    FanoPolytope polytope;
    /// Every unimodular W with W * P landing on the normal form (as a set).
    std::vector<IntMatrix> transforms;
};
NormalForm gl_normal_form_with_transforms(const FanoPolytope& p);
FanoPolytope gl_normal_form(const FanoPolytope& p);

/// Lattice points of a rational polytope (bounding-box scan).
std::vector<IntVector> lattice_points(const RationalPolytope& q);

}  // namespace fanolab
