#pragma once

#include "fanolab/laurent.hpp"
#include "fanolab/polytope.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fanolab {

struct MutationData {
    IntVector weight;          // primitive covector w
    LaurentPolynomial factor;  // supported on {e : <w, e> = 0}

    /// Throws ComputationError unless w is primitive and F is w-homogeneous of weight 0.
    void validate() const;
    MutationData inverse() const { return {negated(), factor}; }

    /// Factor 1 + x^a.
    static MutationData binomial(const IntVector& weight, const Exponent& a);

  private:
    IntVector negated() const;
};

class MutationError : public ComputationError {
  public:
    MutationError(const std::string& what, std::int64_t level) : ComputationError(what), level_(level) {}
    std::int64_t level() const { return level_; }

  private:
    std::int64_t level_;
};

struct NewtonPolytope {
    std::vector<RatVector> vertices;  // integral, possibly lower-dimensional
    std::optional<FanoPolytope> fano;
};

NewtonPolytope newton_polytope(const LaurentPolynomial& f);

/// The same mutation after the change of coordinates x^e -> x^(W e): if
/// g = mutate(f, m) then g.transform(W) = mutate(f.transform(W), transform_mutation(m, W)).
MutationData transform_mutation(const MutationData& m, const IntMatrix& w);

/// g = sum_h f_h F^h over the w-grading of f.
LaurentPolynomial mutate(const LaurentPolynomial& f, const MutationData& m);

/// Lexicographically least image of f under the normal-form transforms of
/// its (Fano) Newton polytope.
LaurentPolynomial polynomial_normal_form(const LaurentPolynomial& f, const FanoPolytope& newt);

struct SearchOptions {
    unsigned depth = 1;
    std::uint64_t budget = 100000;  // attempted mutations
    int max_weight = 3;             // |w|_inf
    int max_factor = 2;             // |a|_inf for factors 1 + x^a
    /// 0 keeps the natural candidate order; otherwise candidates are shuffled with this seed.
    std::uint64_t shuffle_seed = 0;
};

struct SearchEdge {
    std::size_t from = 0, to = 0;  // node indices
    MutationData mutation;
};

struct SearchNode {
    LaurentPolynomial polynomial;
    unsigned depth = 0;
    std::size_t polytope = 0;  // index into discovered
    std::optional<std::size_t> parent_edge;
};

struct DiscoveredPolytope {
    FanoPolytope normal_form;
    std::size_t example_node = 0;
    unsigned depth = 0;
    bool barycentre_zero = false;
};

struct SearchResult {
    std::vector<SearchNode> nodes;
    std::vector<DiscoveredPolytope> discovered;
    std::vector<SearchEdge> edges;
    bool complete = true;
    std::uint64_t attempts = 0;

    /// Edges leading from the seed to the given node.
    std::vector<SearchEdge> path_to(std::size_t node) const;
    std::optional<std::size_t> find_polytope(const FanoPolytope& normal_form) const;
};

/// Candidate mutations tried at every node, in enumeration order.
std::vector<MutationData> candidate_mutations(std::size_t nvars, const SearchOptions& opt);

SearchResult mutation_search(const LaurentPolynomial& seed, const SearchOptions& opt);

/// Applies a sequence of mutations, returning every intermediate polynomial
/// (the seed first).
std::vector<LaurentPolynomial> replay(const LaurentPolynomial& seed, const std::vector<MutationData>& steps);

struct ChainReport {
    std::vector<LaurentPolynomial> polynomials;  // seed first
    FanoPolytope endpoint;                       // normal form of the last Newton polytope
    bool reaches_target = false;
    bool barycentre_zero = false;
    /// Index of the first edge whose endpoints have different period coefficients.
    std::optional<std::size_t> period_break;
};

/// Replays a chain and checks it against a target polytope (compared up to
/// GL(n, Z)), comparing periods c_0..c_N across every edge.
ChainReport verify_chain(const LaurentPolynomial& seed, const std::vector<MutationData>& steps,
                         const FanoPolytope& target, unsigned period_order = 8);

}  // namespace fanolab
