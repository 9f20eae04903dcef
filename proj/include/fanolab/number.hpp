#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fanolab {

using Integer = mpz_class;
using Rational = mpq_class;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Raised for malformed textual input (files, CLI arguments).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a computation's precondition does not hold.
class ComputationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

RatVector to_rational(const IntVector& v);
/// Requires every entry to be integral.
IntVector to_integer(const RatVector& v);

Rational dot(const RatVector& a, const RatVector& b);
Integer dot(const IntVector& a, const IntVector& b);

/// Lexicographic order on vectors of equal length.
template <typename T>
bool lex_less(const std::vector<T>& a, const std::vector<T>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return a.size() < b.size();
}

template <typename T>
bool is_zero(const std::vector<T>& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

std::string format_vector(const RatVector& v);
std::string format_vector(const IntVector& v);

}  // namespace fanolab
