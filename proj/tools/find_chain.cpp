// Offline search for explicit mutation chains from the quartic seed to each
// target polytope.  Bidirectional: a BFS from the seed meets a BFS from a
// known endpoint polynomial, and the endpoint side is pulled back through the
// lattice automorphism identifying the two meeting polynomials.
//
//   find_chain <seed.json> <endpoint.json> <seed_depth> <endpoint_depth> <target.txt>... > chains.json

#include "fanolab/io.hpp"

#include <iostream>
#include <map>

using namespace fanolab;

namespace {

std::vector<MutationData> edges_of(const SearchResult& r, std::size_t node) {
    std::vector<MutationData> out;
    for (const auto& e : r.path_to(node)) out.push_back(e.mutation);
    return out;
}

// W with p.transform(W) equal to the normal form key of p.
IntMatrix key_transform(const LaurentPolynomial& p, const LaurentPolynomial& key) {
    NewtonPolytope n = newton_polytope(p);
    for (const auto& w : gl_normal_form_with_transforms(*n.fano).transforms)
        if (p.transform(w) == key) return w;
    throw ComputationError("no transform reaches the normal form");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 6) {
        std::cerr << "usage: find_chain seed.json endpoint.json seed_depth endpoint_depth target...\n";
        return 2;
    }
    try {
        LaurentPolynomial seed = io::laurent_from_json(io::parse_json(io::read_file(argv[1]), argv[1]));
        LaurentPolynomial end = io::laurent_from_json(io::parse_json(io::read_file(argv[2]), argv[2]));
        SearchOptions fo, eo;
        fo.depth = static_cast<unsigned>(std::stoul(argv[3]));
        eo.depth = static_cast<unsigned>(std::stoul(argv[4]));
        fo.budget = eo.budget = UINT64_MAX;
        SearchResult rf = mutation_search(seed, fo);
        SearchResult re = mutation_search(end, eo);
        std::cerr << "seed side " << rf.nodes.size() << " nodes, endpoint side " << re.nodes.size() << " nodes\n";

        std::map<LaurentPolynomial, std::size_t> seed_keys;
        for (std::size_t i = 0; i < rf.nodes.size(); ++i) {
            const auto& p = rf.nodes[i].polynomial;
            seed_keys.emplace(polynomial_normal_form(p, *newton_polytope(p).fano), i);
        }
        // shortest meeting pair
        std::optional<std::pair<std::size_t, std::size_t>> meet;
        LaurentPolynomial meet_key;
        for (std::size_t j = 0; j < re.nodes.size(); ++j) {
            const auto& q = re.nodes[j].polynomial;
            LaurentPolynomial key = polynomial_normal_form(q, *newton_polytope(q).fano);
            auto it = seed_keys.find(key);
            if (it == seed_keys.end()) continue;
            unsigned len = rf.nodes[it->second].depth + re.nodes[j].depth;
            if (!meet || len < rf.nodes[meet->first].depth + re.nodes[meet->second].depth) {
                meet = {it->second, j};
                meet_key = key;
            }
        }
        if (!meet) {
            std::cerr << "the two searches do not meet\n";
            return 1;
        }
        const auto& p = rf.nodes[meet->first].polynomial;
        const auto& q = re.nodes[meet->second].polynomial;
        // p = q.transform(W)
        IntMatrix w = unimodular_inverse(key_transform(p, meet_key)) * key_transform(q, meet_key);

        // seed -> meet -> endpoint (in seed coordinates)
        std::vector<MutationData> to_end = edges_of(rf, meet->first);
        auto back = edges_of(re, meet->second);
        for (auto it = back.rbegin(); it != back.rend(); ++it) to_end.push_back(transform_mutation(it->inverse(), w));

        io::Json chains = io::Json::array();
        for (int k = 5; k < argc; ++k) {
            FanoPolytope target = gl_normal_form(io::load_polytope(argv[k]));
            std::vector<MutationData> steps;
            if (auto i = rf.find_polytope(target)) {
                steps = edges_of(rf, rf.discovered[*i].example_node);
            } else if (auto i = re.find_polytope(target)) {
                steps = to_end;
                for (const auto& m : edges_of(re, re.discovered[*i].example_node))
                    steps.push_back(transform_mutation(m, w));
            } else {
                std::cerr << argv[k] << ": not reached\n";
                return 1;
            }
            io::Json js = io::Json::array();
            for (const auto& m : steps) js.push_back(io::to_json(m));
            chains.push_back({{"target", argv[k]}, {"steps", js}});
            std::cerr << argv[k] << ": " << steps.size() << " steps\n";
        }
        io::Json out = {{"seed", argv[1]}, {"chains", chains}};
        std::cout << out.dump(1) << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
