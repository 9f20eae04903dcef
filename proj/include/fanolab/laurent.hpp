#pragma once

#include "fanolab/lattice.hpp"
#include "fanolab/number.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fanolab {

using Exponent = std::vector<std::int64_t>;

/// Finite sum of rational multiples of monomials x^e, e in Z^n.  Zero
/// coefficients are never stored; terms iterate in lexicographic order.
class LaurentPolynomial {
  public:
    using Terms = std::map<Exponent, Rational>;

    LaurentPolynomial() = default;
    explicit LaurentPolynomial(std::size_t nvars) : n_(nvars) {}

    static LaurentPolynomial constant(std::size_t nvars, const Rational& c);
    static LaurentPolynomial monomial(const Exponent& e, const Rational& c = 1);
    /// The single variable x_i.
    static LaurentPolynomial variable(std::size_t nvars, std::size_t i);

    std::size_t nvars() const { return n_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    Rational coefficient(const Exponent& e) const;
    Rational constant_term() const;
    void add_term(const Exponent& e, const Rational& c);

    LaurentPolynomial operator+(const LaurentPolynomial& o) const;
    LaurentPolynomial operator-(const LaurentPolynomial& o) const;
    LaurentPolynomial operator*(const LaurentPolynomial& o) const;
    LaurentPolynomial operator*(const Rational& s) const;
    LaurentPolynomial& operator+=(const LaurentPolynomial& o);
    LaurentPolynomial& operator-=(const LaurentPolynomial& o);
    bool operator==(const LaurentPolynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }
    bool operator<(const LaurentPolynomial& o) const { return terms_ < o.terms_; }

    /// Non-negative powers.
    LaurentPolynomial pow(unsigned k) const;

    /// Exact quotient by a divisor, nullopt when the division leaves a remainder.
    std::optional<LaurentPolynomial> divide_exact(const LaurentPolynomial& d) const;

    /// Substitution x^e -> x^(W e).
    LaurentPolynomial transform(const IntMatrix& w) const;

    std::vector<Exponent> exponents() const;
    std::string to_string() const;

  private:
    std::size_t n_ = 0;
    Terms terms_;
};

Exponent to_exponent(const IntVector& v);
IntVector to_int_vector(const Exponent& e);

/// c_k = constant term of f^k for k = 0..n.
std::vector<Rational> classical_period_coeffs(const LaurentPolynomial& f, unsigned n);

}  // namespace fanolab
