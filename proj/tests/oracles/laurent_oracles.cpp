#include "oracles/laurent_oracles.hpp"

namespace oracle {

using fanolab::Integer;

namespace {

Integer factorial(unsigned n) {
    Integer r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

Integer binom(unsigned n, unsigned k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace

std::vector<Integer> periods_x_plus_inverse(unsigned n) {
    std::vector<Integer> out;
    for (unsigned k = 0; k <= n; ++k) out.push_back(k % 2 ? Integer(0) : binom(k, k / 2));
    return out;
}

std::vector<Integer> periods_quartic(unsigned n) {
    std::vector<Integer> out;
    for (unsigned k = 0; k <= n; ++k) {
        Integer c = 0;
        for (unsigned j = 0; j <= k; ++j) {
            Integer shift;
            mpz_pow_ui(shift.get_mpz_t(), Integer(-24).get_mpz_t(), k - j);
            Integer j4 = factorial(j);
            c += binom(k, j) * shift * factorial(4 * j) / (j4 * j4 * j4 * j4);
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace oracle
