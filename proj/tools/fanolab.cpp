// Command-line front end.  Exit codes: 0 ok, 1 computation error, 2 input error.

#include "fanolab/cli.hpp"
#include "fanolab/kstab_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace fanolab;
using io::Json;

namespace {

struct Options {
    bool json = false;
    std::string data = FANOLAB_DATA_DIR;
    std::string file, divisor, L = "-K";
    unsigned depth = 1;
    std::uint64_t budget = 100000;
    std::uint64_t shuffle = 0;
    long degree_bound = 4;
    std::string c, A = "1", ord = "0", S, slope = "4", lo, hi;
    std::vector<std::string> targets;
    int criterion = 0;
    std::string fixtures;
};

void emit(const Options& o, const Json& j, const std::string& text) {
    if (o.json) std::cout << j.dump(2) << '\n';
    else std::cout << text;
}

std::string lines(const std::vector<RatVector>& vs) {
    std::string out;
    for (const auto& v : vs) out += format_vector(v) + "\n";
    return out;
}

Json vectors(const std::vector<RatVector>& vs) {
    Json j = Json::array();
    for (const auto& v : vs) j.push_back(io::to_json(v));
    return j;
}

// Resolves a path inside a chain file against the data directory.
std::string data_path(const Options& o, const std::string& p) {
    return std::filesystem::path(p).is_absolute() ? p : o.data + "/" + p;
}

LaurentPolynomial load_laurent(const std::string& path) {
    return io::laurent_from_json(io::parse_json(io::read_file(path), path));
}

void polytope_polar(const Options& o) {
    auto p = io::load_polytope(o.file);
    auto q = polar(p);
    emit(o, {{"polar", vectors(q.vertices)}}, lines(q.vertices));
}

void polytope_barycentre(const Options& o) {
    auto k = kps_toric_check(io::load_polytope(o.file));
    emit(o, {{"barycentre", io::to_json(k.barycentre)}, {"k_polystable", k.polystable}},
         format_vector(k.barycentre) + (k.polystable ? " (K-polystable)\n" : " (not K-polystable)\n"));
}

void polytope_degree(const Options& o) {
    Rational d = anticanonical_degree(io::load_polytope(o.file));
    emit(o, {{"degree", to_string(d)}}, to_string(d) + "\n");
}

void polytope_check(const Options& o) {
    auto p = io::load_polytope(o.file);
    auto q = polar(p);
    bool reflexive = true;
    for (const auto& v : q.vertices)
        for (const auto& x : v) reflexive = reflexive && x.get_den() == 1;
    auto nf = gl_normal_form(p);
    std::vector<RatVector> nfv;
    for (const auto& v : nf.vertices()) nfv.push_back(to_rational(v));
    Json j{{"dimension", p.dim()},
           {"vertices", p.vertices().size()},
           {"facets", p.facets().size()},
           {"reflexive", reflexive},
           {"normal_form", vectors(nfv)}};
    std::string t = "Fano polytope of dimension " + std::to_string(p.dim()) + " with " +
                    std::to_string(p.vertices().size()) + " vertices and " + std::to_string(p.facets().size()) +
                    " facets\nreflexive: " + (reflexive ? "yes" : "no") + "\nnormal form:\n" + lines(nfv);
    emit(o, j, t);
}

void toric_classgroup(const Options& o) {
    auto c = class_group(io::load_polytope(o.file));
    std::string t = "Z^" + std::to_string(c.free_rank);
    for (const auto& x : c.torsion) t += " + Z/" + x.get_str();
    emit(o, {{"rank", c.free_rank}, {"torsion", io::to_json(c.torsion)}}, t + "\n");
}

void toric_cones(const Options& o) {
    Dossier d = toric_dossier(io::load_polytope(o.file), 1);
    Json j = cli::dossier_json(d);
    std::string t;
    for (const auto& r : d.curves) t += "curve " + std::to_string(r.rays[0]) + " " + std::to_string(r.rays[1]) + ": " + r.label() + "\n";
    for (const auto& r : d.points) {
        t += "point";
        for (auto i : r.rays) t += " " + std::to_string(i);
        t += ": " + r.label() + "\n";
    }
    emit(o, {{"curves", j["curves"]}, {"points", j["points"]}}, t);
}

void toric_embed(const Options& o) {
    Dossier d = toric_dossier(io::load_polytope(o.file), o.degree_bound);
    if (!d.embedding) throw ComputationError(d.embedding_error);
    Json j = cli::dossier_json(d);
    auto names = cli::generator_names(*d.embedding);
    std::string t;
    for (std::size_t i = 0; i < names.size(); ++i)
        t += names[i] + " = " + format_vector(d.embedding->generators[i]) + " (degree " +
             d.embedding->degrees[i].get_str() + ")\n";
    for (const auto& b : d.relations->binomials)
        t += cli::binomial_text(b, names) + " (degree " + b.degree.get_str() + ")\n";
    emit(o, {{"embedding", j["embedding"]}, {"relations", j["relations"]}}, t);
}

void toric_dossier_cmd(const Options& o) {
    Dossier d = toric_dossier(io::load_polytope(o.file), o.degree_bound);
    emit(o, cli::dossier_json(d), cli::dossier_text(d));
}

void mutation_search_cmd(const Options& o) {
    SearchOptions opt;
    opt.depth = o.depth;
    opt.budget = o.budget;
    opt.shuffle_seed = o.shuffle;
    SearchResult r = mutation_search(load_laurent(o.file), opt);
    Json found = Json::array();
    std::string t = std::to_string(r.nodes.size()) + " polynomials, " + std::to_string(r.discovered.size()) +
                    " polytopes, " + std::to_string(r.attempts) + " attempts" + (r.complete ? "" : " (budget exhausted)") +
                    "\n";
    for (const auto& d : r.discovered) {
        std::vector<RatVector> v;
        for (const auto& x : d.normal_form.vertices()) v.push_back(to_rational(x));
        found.push_back({{"normal_form", vectors(v)}, {"depth", d.depth}, {"barycentre_zero", d.barycentre_zero}});
        t += "depth " + std::to_string(d.depth) + (d.barycentre_zero ? ", barycentre zero:" : ":");
        for (const auto& x : v) t += " " + format_vector(x);
        t += "\n";
    }
    Json targets = Json::array();
    for (const auto& path : o.targets) {
        auto node = r.find_polytope(gl_normal_form(io::load_polytope(path)));
        targets.push_back({{"target", path}, {"reached", node.has_value()}});
        t += path + ": " + (node ? "reached" : "not reached") + "\n";
    }
    emit(o, {{"nodes", r.nodes.size()}, {"attempts", r.attempts}, {"complete", r.complete},
             {"polytopes", found}, {"targets", targets}},
         t);
    for (const auto& x : targets)
        if (!x["reached"].get<bool>()) throw ComputationError("some targets were not reached within the search bounds");
}

void mutation_replay(const Options& o) {
    Json doc = io::parse_json(io::read_file(o.file), o.file);
    LaurentPolynomial seed = load_laurent(data_path(o, doc.at("seed").get<std::string>()));
    Json out = Json::array();
    std::string t;
    bool ok = true;
    for (const auto& ch : doc.at("chains")) {
        std::vector<MutationData> steps;
        for (const auto& s : ch.at("steps")) steps.push_back(io::mutation_from_json(s, seed.nvars()));
        std::string target = ch.at("target").get<std::string>();
        ChainReport r = verify_chain(seed, steps, io::load_polytope(data_path(o, target)), 8);
        bool good = r.reaches_target && r.barycentre_zero && !r.period_break;
        ok = ok && good;
        out.push_back({{"target", target},
                       {"steps", steps.size()},
                       {"reaches_target", r.reaches_target},
                       {"barycentre_zero", r.barycentre_zero},
                       {"periods_preserved", !r.period_break}});
        t += target + ": " + std::to_string(steps.size()) + " steps, " +
             (r.reaches_target ? "reaches target" : "misses target") +
             (r.barycentre_zero ? ", barycentre zero" : ", barycentre nonzero") +
             (r.period_break ? ", periods differ at edge " + std::to_string(*r.period_break) : ", periods agree") +
             "\n";
    }
    emit(o, {{"chains", out}}, t);
    if (!ok) throw ComputationError("a chain failed to verify");
}

void kstab_s_inv(const Options& o) {
    auto s = io::load_surface(o.file);
    DivisorClass l = io::parse_divisor(o.L, s), f = io::parse_divisor(o.divisor, s);
    auto vol = volume_fn(s.model, l, f);
    Rational S = s_invariant(s.model, l, f);
    Rational tau = pseff_threshold(s.model, l, f);
    emit(o, {{"S", to_string(S)}, {"threshold", to_string(tau)}, {"volume", vol.to_string()}},
         "S = " + to_string(S) + "\nthreshold = " + to_string(tau) + "\nvol(L - tF) = " + vol.to_string() + "\n");
}

void kstab_zariski(const Options& o) {
    auto s = io::load_surface(o.file);
    auto z = zariski_decompose(s.model, io::parse_divisor(o.divisor, s));
    DivisorClass neg = s.model.zero();
    for (const auto& [i, x] : z.negative) neg[i] = x;
    emit(o, cli::zariski_json(s.model, z),
         "P = " + s.model.format(z.positive) + "\nN = " + s.model.format(neg) + "\nvol = " + to_string(z.volume) + "\n");
}

void kstab_beta(const Options& o) {
    if (o.c.empty() || o.S.empty()) throw InputError("beta needs --c and --S");
    ValuationSpec v{parse_rational(o.A), parse_rational(o.ord), parse_rational(o.S)};
    Rational b = beta(parse_rational(o.c), parse_rational(o.slope), v);
    auto w = wall_solve(v, parse_rational(o.slope));
    Json j{{"beta", to_string(b)}};
    j["wall"] = w ? Json(to_string(*w)) : Json(nullptr);
    emit(o, j, "beta = " + to_string(b) + "\nwall = " + (w ? to_string(*w) : std::string("none")) + "\n");
}

void kstab_walls(const Options& o) {
    auto w = io::load_walls(o.file);
    Rational lo = o.lo.empty() ? w.lo : parse_rational(o.lo), hi = o.hi.empty() ? w.hi : parse_rational(o.hi);
    auto walls = walls_in_range(w.valuations, w.slope, lo, hi);
    Json j = Json::array();
    std::string t;
    for (const auto& x : walls) {
        j.push_back({{"c", to_string(x.c)}, {"sources", x.sources}});
        t += to_string(x.c) + ":";
        for (std::size_t i = 0; i < x.sources.size(); ++i) t += (i ? "; " : " ") + x.sources[i];
        t += "\n";
    }
    emit(o, {{"walls", j}}, t);
}

void kstab_flag(const Options& o) {
    auto r = flag_refine(io::load_flag(o.file));
    Json j = cli::flag_json(r);
    std::string t;
    for (const auto& [k, v] : j.items())
        t += k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    emit(o, j, t);
}

int run_fixtures(const Options& o) {
    auto checks = cli::verify_fixtures(o.fixtures.empty() ? o.data + "/verify.json" : o.fixtures, o.data, o.criterion);
    std::size_t failed = 0;
    Json j = Json::array();
    for (const auto& c : checks) {
        if (!c.pass) ++failed;
        j.push_back({{"criterion", c.criterion}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    if (o.json) {
        std::cout << Json{{"checks", j}, {"passed", checks.size() - failed}, {"failed", failed}}.dump(2) << '\n';
    } else {
        for (const auto& c : checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << "[" << c.criterion << "] " << c.name
                      << (c.pass ? "" : ": " + c.detail) << '\n';
        std::cout << checks.size() - failed << " passed, " << failed << " failed\n";
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toric Fano polytopes, mutations and K-stability computations"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "machine-readable output");
    app.add_option("--data", o.data, "fixture directory")->capture_default_str();

    int status = 0;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, auto fn) {
        auto* sub = parent->add_subcommand(name, help);
        sub->callback([&status, fn, &o] { status = fn(o); });
        return sub;
    };
    auto wrap = [](void (*f)(const Options&)) { return [f](const Options& o) { f(o); return 0; }; };

    auto* poly = app.add_subcommand("polytope", "polytope invariants")->require_subcommand(1);
    for (auto [name, fn, help] : {std::tuple{"polar", &polytope_polar, "vertices of the polar polytope"},
                                  std::tuple{"barycentre", &polytope_barycentre, "barycentre of the polar polytope"},
                                  std::tuple{"check", &polytope_check, "validate and normalise"},
                                  std::tuple{"degree", &polytope_degree, "anticanonical degree"}})
        leaf(poly, name, help, wrap(fn))->add_option("file", o.file)->required();

    auto* toric = app.add_subcommand("toric", "toric variety of the spanning fan")->require_subcommand(1);
    leaf(toric, "classgroup", "divisor class group", wrap(&toric_classgroup))->add_option("file", o.file)->required();
    leaf(toric, "cones", "singularities of 2-dimensional and maximal cones", wrap(&toric_cones))
        ->add_option("file", o.file)
        ->required();
    for (auto [name, fn, help] : {std::tuple{"embed", &toric_embed, "weighted projective embedding and relations"},
                                  std::tuple{"dossier", &toric_dossier_cmd, "every invariant at once"}}) {
        auto* sub = leaf(toric, name, help, wrap(fn));
        sub->add_option("file", o.file)->required();
        sub->add_option("--degree-bound", o.degree_bound, "largest relation degree")->capture_default_str();
    }

    auto* mut = app.add_subcommand("mutation", "mutations of Laurent polynomials")->require_subcommand(1);
    auto* search = leaf(mut, "search", "bounded breadth-first mutation search", wrap(&mutation_search_cmd));
    search->add_option("seed", o.file, "Laurent polynomial JSON")->required();
    search->add_option("--depth", o.depth)->capture_default_str();
    search->add_option("--budget", o.budget, "attempted mutations")->capture_default_str();
    search->add_option("--shuffle", o.shuffle, "candidate order seed, 0 for the natural order");
    search->add_option("--target", o.targets, "polytope files that must be reached");
    leaf(mut, "replay", "replay and verify a chain file", wrap(&mutation_replay))
        ->add_option("file", o.file)
        ->required();

    auto* ks = app.add_subcommand("kstab", "surface and threefold stability invariants")->require_subcommand(1);
    auto* sinv = leaf(ks, "s-inv", "S-invariant and volume function", wrap(&kstab_s_inv));
    sinv->add_option("surface", o.file)->required();
    sinv->add_option("divisor", o.divisor)->required();
    sinv->add_option("--L", o.L, "polarisation")->capture_default_str();
    auto* zar = leaf(ks, "zariski", "Zariski decomposition", wrap(&kstab_zariski));
    zar->add_option("surface", o.file)->required();
    zar->add_option("divisor", o.divisor)->required();
    auto* be = leaf(ks, "beta", "A - c ord - (1 - slope c) S", wrap(&kstab_beta));
    be->add_option("--c", o.c, "boundary coefficient p/q")->required();
    be->add_option("--A", o.A)->capture_default_str();
    be->add_option("--ord", o.ord)->capture_default_str();
    be->add_option("--S", o.S)->required();
    be->add_option("--slope", o.slope)->capture_default_str();
    auto* wa = leaf(ks, "walls", "walls from valuation data", wrap(&kstab_walls));
    wa->add_option("file", o.file)->required();
    wa->add_option("--lo", o.lo);
    wa->add_option("--hi", o.hi);
    leaf(ks, "flag", "flag refinement on a threefold", wrap(&kstab_flag))->add_option("file", o.file)->required();

    auto* vp = leaf(&app, "verify-paper", "run every checked-in fixture", run_fixtures);
    vp->add_option("--criterion", o.criterion, "only this criterion");
    vp->add_option("--fixtures", o.fixtures, "fixture file (default: <data>/verify.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const ComputationError& e) {
        std::cerr << "computation error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return status;
}
