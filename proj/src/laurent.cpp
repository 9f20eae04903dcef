#include "fanolab/laurent.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace fanolab {

Exponent to_exponent(const IntVector& v) {
    Exponent e;
    for (const auto& x : v) {
        if (!x.fits_slong_p()) throw ComputationError("exponent out of range");
        e.push_back(x.get_si());
    }
    return e;
}

IntVector to_int_vector(const Exponent& e) {
    IntVector v;
    for (auto x : e) v.emplace_back(static_cast<long>(x));
    return v;
}

LaurentPolynomial LaurentPolynomial::constant(std::size_t nvars, const Rational& c) {
    LaurentPolynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
}

LaurentPolynomial LaurentPolynomial::monomial(const Exponent& e, const Rational& c) {
    LaurentPolynomial p(e.size());
    p.add_term(e, c);
    return p;
}

LaurentPolynomial LaurentPolynomial::variable(std::size_t nvars, std::size_t i) {
    Exponent e(nvars, 0);
    e.at(i) = 1;
    return monomial(e);
}

Rational LaurentPolynomial::coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational LaurentPolynomial::constant_term() const { return coefficient(Exponent(n_, 0)); }

void LaurentPolynomial::add_term(const Exponent& e, const Rational& c) {
    if (e.size() != n_) throw ComputationError("Laurent polynomial: exponent length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
    if (n_ != o.n_) throw ComputationError("Laurent polynomial: variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& o) {
    if (n_ != o.n_) throw ComputationError("Laurent polynomial: variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& o) const {
    LaurentPolynomial r = *this;
    r += o;
    return r;
}

LaurentPolynomial LaurentPolynomial::operator-(const LaurentPolynomial& o) const {
    LaurentPolynomial r = *this;
    r -= o;
    return r;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& o) const {
    if (n_ != o.n_) throw ComputationError("Laurent polynomial: variable count mismatch");
    LaurentPolynomial r(n_);
    Exponent e(n_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) {
            for (std::size_t i = 0; i < n_; ++i) e[i] = a[i] + b[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

LaurentPolynomial LaurentPolynomial::operator*(const Rational& s) const {
    LaurentPolynomial r(n_);
    if (s == 0) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
    return r;
}

LaurentPolynomial LaurentPolynomial::pow(unsigned k) const {
    LaurentPolynomial result = constant(n_, 1);
    LaurentPolynomial base = *this;
    while (k) {
        if (k & 1u) result = result * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return result;
}

std::optional<LaurentPolynomial> LaurentPolynomial::divide_exact(const LaurentPolynomial& d) const {
    if (d.is_zero()) throw ComputationError("Laurent polynomial: division by zero");
    LaurentPolynomial q(n_);
    if (is_zero()) return q;
    // Newt(A) = Newt(Q) + Newt(D) bounds every quotient exponent coordinatewise
    Exponent lo(n_), hi(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        std::int64_t amin = std::numeric_limits<std::int64_t>::max(), amax = std::numeric_limits<std::int64_t>::min();
        std::int64_t dmin = amin, dmax = amax;
        for (const auto& [e, c] : terms_) amin = std::min(amin, e[i]), amax = std::max(amax, e[i]);
        for (const auto& [e, c] : d.terms_) dmin = std::min(dmin, e[i]), dmax = std::max(dmax, e[i]);
        lo[i] = amin - dmin;
        hi[i] = amax - dmax;
        if (lo[i] > hi[i]) return std::nullopt;
    }
    const auto& [dlead, dcoef] = *d.terms_.rbegin();
    LaurentPolynomial r = *this;
    Exponent t(n_);
    while (!r.is_zero()) {
        const auto& [rlead, rcoef] = *r.terms_.rbegin();
        for (std::size_t i = 0; i < n_; ++i) {
            t[i] = rlead[i] - dlead[i];
            if (t[i] < lo[i] || t[i] > hi[i]) return std::nullopt;
        }
        Rational c = rcoef / dcoef;
        q.add_term(t, c);
        Exponent e(n_);
        for (const auto& [de, dc] : d.terms_) {
            for (std::size_t i = 0; i < n_; ++i) e[i] = de[i] + t[i];
            r.add_term(e, -c * dc);
        }
    }
    return q;
}

LaurentPolynomial LaurentPolynomial::transform(const IntMatrix& w) const {
    if (w.rows() != n_ || w.cols() != n_) throw ComputationError("Laurent polynomial: transform shape mismatch");
    std::vector<std::vector<std::int64_t>> m(n_, std::vector<std::int64_t>(n_));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m[i][j] = w(i, j).get_si();
    LaurentPolynomial r(n_);
    Exponent e(n_);
    for (const auto& [a, c] : terms_) {
        for (std::size_t i = 0; i < n_; ++i) {
            e[i] = 0;
            for (std::size_t j = 0; j < n_; ++j) e[i] += m[i][j] * a[j];
        }
        r.add_term(e, c);
    }
    return r;
}

std::vector<Exponent> LaurentPolynomial::exponents() const {
    std::vector<Exponent> out;
    for (const auto& [e, c] : terms_) out.push_back(e);
    return out;
}

std::string LaurentPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    static const char* names = "xyzw";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = abs(c);
        os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        first = false;
        bool unit = true;
        for (auto x : e) unit = unit && x == 0;
        if (mag != 1 || unit) os << fanolab::to_string(mag);
        bool star = mag != 1;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (star) os << '*';
            star = true;
            if (n_ <= 4) os << names[i];
            else os << "x" << i;
            if (e[i] != 1) os << '^' << e[i];
        }
    }
    return os.str();
}

std::vector<Rational> classical_period_coeffs(const LaurentPolynomial& f, unsigned n) {
    // only powers up to n/2 are expanded; [f^k]_0 = sum_e [f^a]_e [f^(k-a)]_(-e)
    std::vector<LaurentPolynomial> powers{LaurentPolynomial::constant(f.nvars(), 1)};
    const unsigned half = (n + 1) / 2;
    for (unsigned k = 1; k <= half; ++k) powers.push_back(powers.back() * f);
    std::vector<Rational> out;
    Exponent neg(f.nvars());
    for (unsigned k = 0; k <= n; ++k) {
        if (k <= half) {
            out.push_back(powers[k].constant_term());
            continue;
        }
        const auto& a = powers[half];
        const auto& b = powers[k - half];
        Rational c = 0;
        for (const auto& [e, x] : b.terms()) {
            for (std::size_t i = 0; i < e.size(); ++i) neg[i] = -e[i];
            auto it = a.terms().find(neg);
            if (it != a.terms().end()) c += it->second * x;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace fanolab
