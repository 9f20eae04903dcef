#pragma once

#include "fanolab/lattice.hpp"
#include "fanolab/polytope.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fanolab {

struct ClassGroupResult {
    std::size_t free_rank = 0;
    IntVector torsion;
    /// Equals free_rank; meaningful as the Picard rank for Q-factorial input.
    std::size_t picard_rank = 0;
};

ClassGroupResult class_group(const FanoPolytope& p);

struct CyclicAction {
    Integer order;
    IntVector weights;  // one per vertex, reduced mod order
};

/// Torsion of Cl acting on the (fake) weighted projective space of a simplex.
std::vector<CyclicAction> quotient_weights(const FanoPolytope& p);

enum class ConeKind { Smooth, A, CyclicQuotient, GorensteinPoint };

struct ConeSingularityReport {
    std::vector<std::size_t> rays;
    ConeKind kind = ConeKind::Smooth;

    // two-dimensional cones: 1/order (1, weight)
    Integer order = 1;
    Integer weight = 0;
    /// n for A_n
    Integer a_index = 0;

    // maximal cones
    Integer gorenstein_index = 1;
    bool canonical = true;
    RatVector dual_vector;  // the u with <u, rho> = 1 on the cone's rays
    std::optional<IntVector> witness;

    std::string label() const;
};

/// Pairs of vertex indices spanning an edge of P.
std::vector<std::pair<std::size_t, std::size_t>> edges(const FanoPolytope& p);

ConeSingularityReport analyze_2d_cone(const FanoPolytope& p, std::size_t i, std::size_t j);
/// Rays must be exactly the vertex set of a facet.
ConeSingularityReport analyze_3d_cone(const FanoPolytope& p, const std::vector<std::size_t>& rays);
ConeSingularityReport analyze_maximal_cone(const FanoPolytope& p, std::size_t facet);

struct Binomial {
    IntVector plus, minus;
    Integer degree;
};

struct EmbeddingResult {
    /// Lattice points (m, k) in M + Z; k is the degree.
    std::vector<IntVector> generators;
    IntVector degrees;
};

/// Hilbert basis of the cone over P° x {1}.
EmbeddingResult wps_embedding(const FanoPolytope& p, const Integer& denominator_cap = 3);

struct RelationResult {
    /// Every binomial with disjoint supports and degree <= bound.
    std::vector<Binomial> binomials;
    /// A minimal generating set of the toric ideal up to the bound.
    std::vector<Binomial> minimal_generators;
    IntVector minimal_degrees;
    /// Minimal generators up to the bound have degrees exactly (2,2,4) and
    /// their number equals the codimension.
    bool complete_intersection_224 = false;
};

RelationResult relation_binomials(const EmbeddingResult& e, const Integer& degree_bound);

/// Minimal monomial generators (as exponent vectors) of the invariant ring
/// of a cyclic group acting diagonally.
std::vector<IntVector> cyclic_invariant_generators(const IntVector& weights, const Integer& order,
                                                   const IntVector& degrees, const Integer& degree_bound);

struct Dossier {
    FanoPolytope polytope;
    RationalPolytope polar;
    KpsCheck kps;
    Rational degree;
    ClassGroupResult class_group;
    std::vector<ConeSingularityReport> curves;  // 2-faces
    std::vector<ConeSingularityReport> points;  // maximal cones
    std::optional<EmbeddingResult> embedding;
    std::optional<RelationResult> relations;
    std::string embedding_error;
};

Dossier toric_dossier(const FanoPolytope& p, const Integer& degree_bound = 4);

}  // namespace fanolab
