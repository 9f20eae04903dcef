#include "fanolab/mutation.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace fanolab {

namespace {

std::int64_t pairing(const IntVector& w, const Exponent& e) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) s += w[i].get_si() * e[i];
    return s;
}

// Arithmetic modulo the Mersenne prime 2^61 - 1, used for a cheap necessary
// test before attempting exact division: if (1 + x^a)^k divides f_h then f_h
// vanishes wherever x^a = -1.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1u) r = mul_mod(r, b);
        b = mul_mod(b, b);
        e >>= 1u;
    }
    return r;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

std::uint64_t pow_signed(std::uint64_t b, std::int64_t e) {
    return e >= 0 ? pow_mod(b, static_cast<std::uint64_t>(e)) : inv_mod(pow_mod(b, static_cast<std::uint64_t>(-e)));
}

struct ModularImage {
    std::vector<std::pair<Exponent, std::uint64_t>> terms;
    bool valid = true;
};

ModularImage modular_image(const LaurentPolynomial& f) {
    ModularImage m;
    const Integer p(std::to_string(kPrime));
    for (const auto& [e, c] : f.terms()) {
        Integer num, den;
        mpz_mod(num.get_mpz_t(), c.get_num_mpz_t(), p.get_mpz_t());
        mpz_mod(den.get_mpz_t(), c.get_den_mpz_t(), p.get_mpz_t());
        if (den == 0) {
            m.valid = false;
            return m;
        }
        auto to_u64 = [](const Integer& z) { return static_cast<std::uint64_t>(std::stoull(z.get_str())); };
        m.terms.emplace_back(e, mul_mod(to_u64(num), inv_mod(to_u64(den))));
    }
    return m;
}

bool may_mutate(const ModularImage& img, const MutationData& m, std::mt19937_64& rng) {
    if (!img.valid || m.factor.size() != 2 || m.factor.constant_term() != 1) return true;
    Exponent a;
    for (const auto& [e, c] : m.factor.terms())
        if (c == 1 && std::any_of(e.begin(), e.end(), [](std::int64_t x) { return x != 0; })) a = e;
    if (a.empty()) return true;
    std::size_t j = 0;
    while (j < a.size() && a[j] != 1 && a[j] != -1) ++j;
    if (j == a.size()) return true;
    const std::size_t n = a.size();
    for (int trial = 0; trial < 2; ++trial) {
        std::vector<std::uint64_t> x(n);
        std::uint64_t r = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            x[i] = rng() % (kPrime - 2) + 2;
            r = mul_mod(r, pow_signed(x[i], a[i]));
        }
        x[j] = a[j] == 1 ? kPrime - inv_mod(r) : kPrime - r;
        std::map<std::int64_t, std::uint64_t> levels;
        for (const auto& [e, c] : img.terms) {
            std::int64_t h = pairing(m.weight, e);
            if (h >= 0) continue;
            std::uint64_t v = c;
            for (std::size_t i = 0; i < n; ++i) v = mul_mod(v, pow_signed(x[i], e[i]));
            auto& acc = levels[h];
            acc = (acc + v) % kPrime;
        }
        for (const auto& [h, v] : levels)
            if (v != 0) return false;
    }
    return true;
}

std::vector<Integer> flatten(const FanoPolytope& p) {
    std::vector<Integer> out;
    for (const auto& v : p.vertices()) out.insert(out.end(), v.begin(), v.end());
    return out;
}

}  // namespace

void MutationData::validate() const {
    if (weight.size() != factor.nvars()) throw ComputationError("mutation: weight and factor dimensions differ");
    if (content(weight) != 1) throw ComputationError("mutation: weight " + format_vector(weight) + " is not primitive");
    if (factor.is_zero()) throw ComputationError("mutation: zero factor");
    for (const auto& [e, c] : factor.terms())
        if (pairing(weight, e) != 0)
            throw ComputationError("mutation: factor term " + format_vector(to_int_vector(e)) + " has nonzero weight");
}

IntVector MutationData::negated() const {
    IntVector w = weight;
    for (auto& x : w) x = -x;
    return w;
}

MutationData MutationData::binomial(const IntVector& weight, const Exponent& a) {
    LaurentPolynomial f = LaurentPolynomial::constant(a.size(), 1);
    f.add_term(a, 1);
    return {weight, f};
}

NewtonPolytope newton_polytope(const LaurentPolynomial& f) {
    if (f.is_zero()) throw ComputationError("newton_polytope: zero polynomial");
    std::vector<RatVector> pts;
    for (const auto& e : f.exponents()) pts.push_back(to_rational(to_int_vector(e)));
    NewtonPolytope out;
    out.vertices = vertex_set(pts);
    if (out.vertices.size() > f.nvars() && f.nvars() >= 1 && f.nvars() <= 4) {
        std::vector<IntVector> verts;
        for (const auto& v : out.vertices) verts.push_back(to_integer(v));
        try {
            out.fano = FanoPolytope(verts);
        } catch (const ComputationError&) {
        }
    }
    return out;
}

MutationData transform_mutation(const MutationData& m, const IntMatrix& w) {
    return {unimodular_inverse(w).transpose() * m.weight, m.factor.transform(w)};
}

LaurentPolynomial mutate(const LaurentPolynomial& f, const MutationData& m) {
    m.validate();
    if (f.nvars() != m.factor.nvars()) throw ComputationError("mutation: polynomial and factor dimensions differ");
    std::map<std::int64_t, LaurentPolynomial> levels;
    for (const auto& [e, c] : f.terms()) {
        auto [it, ins] = levels.try_emplace(pairing(m.weight, e), f.nvars());
        it->second.add_term(e, c);
    }
    LaurentPolynomial g(f.nvars());
    for (const auto& [h, part] : levels) {
        if (h >= 0) {
            g += part * m.factor.pow(static_cast<unsigned>(h));
        } else {
            auto q = part.divide_exact(m.factor.pow(static_cast<unsigned>(-h)));
            if (!q)
                throw MutationError("mutation: level " + std::to_string(h) + " is not divisible by the factor to the power " +
                                        std::to_string(-h),
                                    h);
            g += *q;
        }
    }
    return g;
}

LaurentPolynomial polynomial_normal_form(const LaurentPolynomial& f, const FanoPolytope& newt) {
    NormalForm nf = gl_normal_form_with_transforms(newt);
    std::optional<LaurentPolynomial> best;
    for (const auto& w : nf.transforms) {
        LaurentPolynomial g = f.transform(w);
        if (!best || g < *best) best = std::move(g);
    }
    return *best;
}

std::vector<MutationData> candidate_mutations(std::size_t n, const SearchOptions& opt) {
    auto box = [n](int r) {
        std::vector<IntVector> out;
        IntVector x(n, -r);
        while (true) {
            if (!is_zero(x) && content(x) == 1) out.push_back(x);
            std::size_t i = n;
            while (i > 0 && x[i - 1] == r) x[i - 1] = -r, --i;
            if (i == 0) break;
            ++x[i - 1];
        }
        return out;
    };
    auto weights = box(opt.max_weight);
    auto factors = box(opt.max_factor);
    std::vector<MutationData> out;
    for (const auto& w : weights)
        for (const auto& a : factors) {
            if (dot(w, a) != 0) continue;
            // 1 + x^-a differs from 1 + x^a by a monomial, i.e. by a shear of the result
            std::size_t k = 0;
            while (a[k] == 0) ++k;
            if (a[k] < 0) continue;
            out.push_back(MutationData::binomial(w, to_exponent(a)));
        }
    if (opt.shuffle_seed != 0) {
        std::mt19937_64 rng(opt.shuffle_seed);
        std::shuffle(out.begin(), out.end(), rng);
    }
    return out;
}

std::vector<SearchEdge> SearchResult::path_to(std::size_t node) const {
    std::vector<SearchEdge> out;
    while (nodes.at(node).parent_edge) {
        const SearchEdge& e = edges.at(*nodes[node].parent_edge);
        out.push_back(e);
        node = e.from;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::optional<std::size_t> SearchResult::find_polytope(const FanoPolytope& normal_form) const {
    for (std::size_t i = 0; i < discovered.size(); ++i)
        if (discovered[i].normal_form == normal_form) return i;
    return std::nullopt;
}

SearchResult mutation_search(const LaurentPolynomial& seed, const SearchOptions& opt) {
    NewtonPolytope newt = newton_polytope(seed);
    if (!newt.fano) throw ComputationError("mutation_search: seed Newton polytope is not Fano");

    SearchResult res;
    std::map<LaurentPolynomial, std::size_t> seen_poly;
    std::map<std::vector<Integer>, std::size_t> seen_polytope;

    auto record = [&](const LaurentPolynomial& g, const FanoPolytope& newton, unsigned depth,
                      std::optional<std::size_t> edge) -> bool {
        LaurentPolynomial key = polynomial_normal_form(g, newton);
        if (seen_poly.count(key)) return false;
        std::size_t node = res.nodes.size();
        seen_poly.emplace(std::move(key), node);
        FanoPolytope nf = gl_normal_form(newton);
        auto flat = flatten(nf);
        auto it = seen_polytope.find(flat);
        std::size_t pid;
        if (it == seen_polytope.end()) {
            pid = res.discovered.size();
            seen_polytope.emplace(std::move(flat), pid);
            res.discovered.push_back({nf, node, depth, kps_toric_check(newton).polystable});
        } else {
            pid = it->second;
        }
        res.nodes.push_back({g, depth, pid, edge});
        return true;
    };
    record(seed, *newt.fano, 0, std::nullopt);

    const auto candidates = candidate_mutations(seed.nvars(), opt);
    for (unsigned level = 0; level < opt.depth; ++level) {
        std::vector<std::size_t> frontier;
        for (std::size_t i = 0; i < res.nodes.size(); ++i)
            if (res.nodes[i].depth == level) frontier.push_back(i);
        for (std::size_t node : frontier) {
            ModularImage img = modular_image(res.nodes[node].polynomial);
            std::mt19937_64 rng(0x5eed);
            for (const auto& m : candidates) {
                if (res.attempts >= opt.budget) {
                    res.complete = false;
                    return res;
                }
                ++res.attempts;
                if (!may_mutate(img, m, rng)) continue;
                LaurentPolynomial g;
                try {
                    g = mutate(res.nodes[node].polynomial, m);
                } catch (const MutationError&) {
                    continue;
                }
                NewtonPolytope gn = newton_polytope(g);
                if (!gn.fano) continue;
                std::size_t edge = res.edges.size();
                res.edges.push_back({node, res.nodes.size(), m});
                if (!record(g, *gn.fano, level + 1, edge)) res.edges.pop_back();
            }
        }
    }
    return res;
}

std::vector<LaurentPolynomial> replay(const LaurentPolynomial& seed, const std::vector<MutationData>& steps) {
    std::vector<LaurentPolynomial> out{seed};
    for (const auto& m : steps) out.push_back(mutate(out.back(), m));
    return out;
}

ChainReport verify_chain(const LaurentPolynomial& seed, const std::vector<MutationData>& steps,
                         const FanoPolytope& target, unsigned period_order) {
    ChainReport r;
    r.polynomials = replay(seed, steps);
    NewtonPolytope last = newton_polytope(r.polynomials.back());
    if (!last.fano) throw ComputationError("verify_chain: endpoint Newton polytope is not Fano");
    r.endpoint = gl_normal_form(*last.fano);
    r.reaches_target = r.endpoint == gl_normal_form(target);
    r.barycentre_zero = kps_toric_check(*last.fano).polystable;
    auto prev = classical_period_coeffs(r.polynomials.front(), period_order);
    for (std::size_t i = 1; i < r.polynomials.size() && !r.period_break; ++i) {
        auto cur = classical_period_coeffs(r.polynomials[i], period_order);
        if (cur != prev) r.period_break = i - 1;
        prev = std::move(cur);
    }
    return r;
}

}  // namespace fanolab
