#include "fanolab/cli.hpp"

#include "fanolab/kstab_io.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace fanolab::cli {

namespace {

using VecSet = std::set<RatVector, bool (*)(const RatVector&, const RatVector&)>;

VecSet as_set(const std::vector<RatVector>& v) { return VecSet(v.begin(), v.end(), &lex_less<Rational>); }

std::string show(const std::vector<RatVector>& vs) {
    std::string out = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? ", " : "") + format_vector(vs[i]);
    return out + "}";
}

std::string show(const IntVector& v) { return format_vector(v); }

Json cone_json(const ConeSingularityReport& r) {
    Json j{{"rays", r.rays}, {"label", r.label()}};
    if (r.kind == ConeKind::GorensteinPoint || !r.dual_vector.empty()) {
        j["gorenstein_index"] = r.gorenstein_index.get_str();
        j["canonical"] = r.canonical;
        if (!r.dual_vector.empty()) j["dual_vector"] = io::to_json(r.dual_vector);
        if (r.witness) j["witness"] = io::to_json(*r.witness);
    } else {
        j["order"] = r.order.get_str();
        j["weight"] = r.weight.get_str();
    }
    return j;
}

Json binomial_json(const Binomial& b, const std::vector<std::string>& names) {
    return {{"degree", b.degree.get_str()},
            {"plus", io::to_json(b.plus)},
            {"minus", io::to_json(b.minus)},
            {"text", binomial_text(b, names)}};
}

std::string monomial_text(const IntVector& e, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += names[i];
        if (e[i] != 1) out += "^" + e[i].get_str();
    }
    return out.empty() ? "1" : out;
}

struct Runner {
    std::string data_dir;
    int only = 0;
    std::vector<Check> results;

    std::string path(const Json& j) const { return data_dir + "/" + j.get<std::string>(); }

    void add(int criterion, std::string name, bool pass, std::string detail = "") {
        results.push_back({criterion, std::move(name), pass, pass ? "" : std::move(detail)});
    }

    template <class T, class F>
    void expect(int criterion, const std::string& name, const T& expected, const T& got, F&& show_fn) {
        add(criterion, name, expected == got, "expected " + show_fn(expected) + ", got " + show_fn(got));
    }

    void expect_q(int criterion, const std::string& name, const Json& expected, const Rational& got) {
        Rational e = io::rational_from_json(expected);
        expect(criterion, name, e, got, [](const Rational& x) { return to_string(x); });
    }

    void dossier(int k, const Json& c) {
        std::string file = c.at("polytope").get<std::string>();
        FanoPolytope p = io::load_polytope(path(c.at("polytope")));
        Dossier d = toric_dossier(p, c.contains("degree_bound") ? Integer(c.at("degree_bound").get<long>()) : 4);
        std::string tag = file + ": ";
        if (c.contains("polar")) {
            std::vector<RatVector> e;
            for (const auto& v : c.at("polar")) {
                RatVector r;
                for (const auto& x : v) r.push_back(io::rational_from_json(x));
                e.push_back(r);
            }
            add(k, tag + "polar vertices", as_set(e) == as_set(d.polar.vertices),
                "expected " + show(e) + ", got " + show(d.polar.vertices));
        }
        if (c.contains("barycentre")) {
            RatVector e;
            for (const auto& x : c.at("barycentre")) e.push_back(io::rational_from_json(x));
            expect(k, tag + "barycentre of the polar", e, d.kps.barycentre, [](const RatVector& v) { return format_vector(v); });
        }
        if (c.contains("kps"))
            expect(k, tag + "K-polystable", c.at("kps").get<bool>(), d.kps.polystable,
                   [](bool b) { return std::string(b ? "true" : "false"); });
        if (c.contains("degree")) expect_q(k, tag + "anticanonical degree", c.at("degree"), d.degree);
        if (c.contains("class_group")) {
            const Json& g = c.at("class_group");
            expect(k, tag + "class group rank", g.at("rank").get<std::size_t>(), d.class_group.free_rank,
                   [](std::size_t n) { return std::to_string(n); });
            expect(k, tag + "class group torsion", io::int_vector_from_json(g.at("torsion")), d.class_group.torsion,
                   [](const IntVector& v) { return show(v); });
        }
        std::multiset<std::string> curves, points;
        for (const auto& r : d.curves) curves.insert(r.label());
        for (const auto& r : d.points) points.insert(r.label());
        auto show_labels = [](const std::multiset<std::string>& s) {
            std::string out;
            for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
            return "[" + out + "]";
        };
        if (c.contains("curve_labels_include"))
            for (const auto& l : c.at("curve_labels_include")) {
                std::string label = l.get<std::string>();
                add(k, tag + "curve singularity " + label, curves.count(label) > 0,
                    "expected " + label + " among " + show_labels(curves));
            }
        if (c.contains("point_labels"))
            for (const auto& [label, n] : c.at("point_labels").items())
                expect(k, tag + "points of type '" + label + "'", n.get<std::size_t>(), points.count(label),
                       [](std::size_t x) { return std::to_string(x); });
        if (c.contains("index2_points")) {
            std::size_t n = 0;
            for (const auto& r : d.points)
                if (r.gorenstein_index == 2) ++n;
            expect(k, tag + "Gorenstein index 2 points", c.at("index2_points").get<std::size_t>(), n,
                   [](std::size_t x) { return std::to_string(x); });
        }
        if (c.contains("generators") || c.contains("degrees") || c.contains("binomials")) {
            if (!d.embedding) {
                add(k, tag + "embedding", false, "embedding failed: " + d.embedding_error);
                return;
            }
            const auto& e = *d.embedding;
            if (c.contains("generators")) {
                std::vector<RatVector> want, got;
                for (const auto& g : c.at("generators")) want.push_back(to_rational(io::int_vector_from_json(g)));
                for (const auto& g : e.generators) got.push_back(to_rational(g));
                add(k, tag + "Hilbert basis", as_set(want) == as_set(got),
                    "expected " + show(want) + ", got " + show(got));
            }
            if (c.contains("degrees"))
                expect(k, tag + "generator degrees", io::int_vector_from_json(c.at("degrees")), e.degrees,
                       [](const IntVector& v) { return show(v); });
            if (c.contains("binomials")) {
                auto names = generator_names(e);
                for (const auto& b : c.at("binomials")) {
                    // monomials as lists of [lattice point, exponent]
                    auto mono = [&](const Json& m) {
                        IntVector a(e.generators.size(), 0);
                        for (const auto& f : m) {
                            IntVector pt = io::int_vector_from_json(f.at(0));
                            auto it = std::find(e.generators.begin(), e.generators.end(), pt);
                            if (it == e.generators.end()) throw InputError("binomial names a non-generator " + show(pt));
                            a[static_cast<std::size_t>(it - e.generators.begin())] += f.at(1).get<long>();
                        }
                        return a;
                    };
                    IntVector plus = mono(b.at("plus")), minus = mono(b.at("minus"));
                    bool found = false;
                    for (const auto& r : d.relations->binomials)
                        found = found || (r.plus == plus && r.minus == minus) || (r.plus == minus && r.minus == plus);
                    std::string text = monomial_text(plus, names) + " - " + monomial_text(minus, names);
                    add(k, tag + "binomial " + text, found, "binomial " + text + " not found up to the degree bound");
                }
            }
            if (c.contains("complete_intersection_224"))
                expect(k, tag + "complete intersection of type (2,2,4)", c.at("complete_intersection_224").get<bool>(),
                       d.relations->complete_intersection_224,
                       [](bool b) { return std::string(b ? "true" : "false"); });
        }
    }

    void newton(int k, const Json& c) {
        std::string file = c.at("polynomial").get<std::string>();
        LaurentPolynomial f = io::laurent_from_json(io::parse_json(io::read_file(path(c.at("polynomial"))), file));
        FanoPolytope target = io::load_polytope(path(c.at("polytope")));
        NewtonPolytope n = newton_polytope(f);
        std::vector<RatVector> want;
        for (const auto& v : target.vertices()) want.push_back(to_rational(v));
        add(k, file + ": Newton polytope equals " + c.at("polytope").get<std::string>(),
            as_set(want) == as_set(n.vertices), "expected " + show(want) + ", got " + show(n.vertices));
    }

    void chains(int k, const Json& c) {
        std::string file = c.at("file").get<std::string>();
        Json doc = io::parse_json(io::read_file(path(c.at("file"))), file);
        std::string seed_file = doc.at("seed").get<std::string>();
        LaurentPolynomial seed =
            io::laurent_from_json(io::parse_json(io::read_file(path(doc.at("seed"))), seed_file));
        unsigned order = c.contains("period_order") ? c.at("period_order").get<unsigned>() : 8;
        std::set<std::string> reached;
        for (const auto& ch : doc.at("chains")) {
            std::vector<MutationData> steps;
            for (const auto& s : ch.at("steps")) steps.push_back(io::mutation_from_json(s, seed.nvars()));
            std::string target_file = ch.at("target").get<std::string>();
            ChainReport r = verify_chain(seed, steps, io::load_polytope(path(ch.at("target"))), order);
            std::string tag = target_file + " (" + std::to_string(steps.size()) + " steps): ";
            add(k, tag + "chain reaches the target", r.reaches_target,
                "endpoint normal form " + show([&] {
                    std::vector<RatVector> v;
                    for (const auto& x : r.endpoint.vertices()) v.push_back(to_rational(x));
                    return v;
                }()));
            add(k, tag + "barycentre zero", r.barycentre_zero, "polar barycentre is not zero");
            add(k, tag + "periods through k = " + std::to_string(order) + " preserved", !r.period_break,
                "periods differ across edge " + std::to_string(r.period_break.value_or(0)));
            if (r.reaches_target) reached.insert(target_file);
        }
        if (c.contains("targets"))
            for (const auto& t : c.at("targets"))
                add(k, "mutation-connected to " + t.get<std::string>(), reached.count(t.get<std::string>()) > 0,
                    "no chain reaches " + t.get<std::string>());
    }

    void surface(int k, const Json& c) {
        std::string file = c.at("surface").get<std::string>();
        io::SurfaceFile s = io::load_surface(path(c.at("surface")));
        DivisorClass l = io::divisor_from_json(c.contains("L") ? c.at("L") : Json("-K"), s);
        if (c.contains("s_invariants"))
            for (const auto& [f, v] : c.at("s_invariants").items())
                expect_q(k, file + ": S(" + f + ")", v, s_invariant(s.model, l, io::parse_divisor(f, s)));
        if (c.contains("thresholds"))
            for (const auto& [f, v] : c.at("thresholds").items())
                expect_q(k, file + ": pseudo-effective threshold of " + f, v,
                         pseff_threshold(s.model, l, io::parse_divisor(f, s)));
        if (c.contains("zariski"))
            for (const auto& z : c.at("zariski")) {
                std::string dtext = z.at("divisor").get<std::string>();
                auto dec = zariski_decompose(s.model, io::parse_divisor(dtext, s));
                DivisorClass pos = io::parse_divisor(z.at("positive").get<std::string>(), s);
                DivisorClass neg = io::parse_divisor(z.at("negative").get<std::string>(), s);
                DivisorClass got_neg = s.model.zero();
                for (const auto& [i, x] : dec.negative) got_neg[i] = x;
                bool ok = is_zero(s.model.degrees(sub(pos, dec.positive))) && neg == got_neg;
                add(k, file + ": Zariski decomposition of " + dtext, ok,
                    "expected P = " + s.model.format(pos) + ", N = " + s.model.format(neg) + "; got P = " +
                        s.model.format(dec.positive) + ", N = " + s.model.format(got_neg));
            }
    }

    void walls(int k, const Json& c) {
        std::string file = c.at("file").get<std::string>();
        io::WallInput w = io::load_walls(path(c.at("file")));
        std::vector<Rational> want, got;
        for (const auto& x : c.at("expected")) want.push_back(io::rational_from_json(x));
        for (const auto& wall : walls_in_range(w.valuations, w.slope, w.lo, w.hi)) got.push_back(wall.c);
        expect(k, file + ": walls in (" + to_string(w.lo) + ", " + to_string(w.hi) + "]", want, got,
               [](const std::vector<Rational>& v) { return format_vector(v); });
    }

    void beta_check(int k, const Json& c) {
        ValuationSpec v{io::rational_from_json(c.at("A")), io::rational_from_json(c.at("ord")),
                        io::rational_from_json(c.at("S"))};
        Rational slope = c.contains("slope") ? io::rational_from_json(c.at("slope")) : Rational(4);
        std::string tag = "beta(A=" + to_string(v.A) + ", ord=" + to_string(v.ord) + ", S=" + to_string(v.S) + ")";
        if (c.contains("c")) {
            Rational cc = io::rational_from_json(c.at("c"));
            expect_q(k, tag + " at c = " + to_string(cc), c.at("expected"), beta(cc, slope, v));
        } else {
            // expected affine in c: [constant, slope]
            Rational a = io::rational_from_json(c.at("affine").at(0)), b = io::rational_from_json(c.at("affine").at(1));
            bool ok = true;
            for (int i = 0; i <= 16; ++i) {
                Rational cc = Rational(i) / 16;
                ok = ok && beta(cc, slope, v) == a + b * cc;
            }
            add(k, tag + " = " + to_string(a) + " + " + to_string(b) + " c", ok, "beta is not the stated affine function");
        }
    }

    void flag(int k, const Json& c) {
        std::string file = c.at("file").get<std::string>();
        FlagRefinement r = flag_refine(io::load_flag(path(c.at("file"))));
        const Json& e = c.at("expected");
        std::string tag = file + ": ";
        if (e.contains("volume_polynomial")) {
            RatVector want;
            for (const auto& x : e.at("volume_polynomial")) want.push_back(io::rational_from_json(x));
            expect(k, tag + "vol P(u) coefficients", want, r.volume_polynomial,
                   [](const RatVector& v) { return format_vector(v); });
        }
        auto opt = [&](const char* key, const std::optional<Rational>& got) {
            if (!e.contains(key)) return;
            if (!got) add(k, tag + key, false, "not computed");
            else expect_q(k, tag + key, e.at(key), *got);
        };
        opt("S_surface", r.S_surface);
        opt("beta_surface", r.beta_surface);
        opt("S_curve", r.S_curve);
        opt("F_point", r.F_point);
        opt("S_point", r.S_point);
        opt("delta_lower_bound", r.delta_lower_bound);
    }

    void run(const Json& doc) {
        for (const auto& c : doc.at("checks")) {
            int k = c.at("criterion").get<int>();
            if (only && k != only) continue;
            std::string kind = c.at("kind").get<std::string>();
            try {
                if (kind == "dossier") dossier(k, c);
                else if (kind == "newton") newton(k, c);
                else if (kind == "chains") chains(k, c);
                else if (kind == "surface") surface(k, c);
                else if (kind == "walls") walls(k, c);
                else if (kind == "beta") beta_check(k, c);
                else if (kind == "flag") flag(k, c);
                else if (kind == "local_volume_bound")
                    expect_q(k, "local_volume_bound(" + c.at("c").get<std::string>() + ")", c.at("expected"),
                             Rational(local_volume_bound(io::rational_from_json(c.at("c")))));
                else if (kind == "dp_dim")
                    expect_q(k, "h0(-" + std::to_string(c.at("m").get<long>()) + "K) in degree " +
                                    std::to_string(c.at("degree").get<long>()),
                             c.at("expected"),
                             Rational(dp_plurianticanonical_dim(c.at("degree").get<long>(), c.at("m").get<long>())));
                else throw InputError("unknown check kind '" + kind + "'");
            } catch (const std::exception& ex) {
                add(k, kind + " check", false, std::string("error: ") + ex.what());
            }
        }
    }
};

}  // namespace

std::vector<std::string> generator_names(const EmbeddingResult& e) {
    std::vector<std::string> names;
    int x = 0, y = 0;
    for (const auto& d : e.degrees) names.push_back(d == 1 ? "x" + std::to_string(x++) : "y" + std::to_string(y++));
    return names;
}

std::string binomial_text(const Binomial& b, const std::vector<std::string>& names) {
    return monomial_text(b.plus, names) + " - " + monomial_text(b.minus, names);
}

Json dossier_json(const Dossier& d) {
    Json j;
    Json verts = Json::array();
    for (const auto& v : d.polytope.vertices()) verts.push_back(io::to_json(v));
    j["vertices"] = verts;
    Json pol = Json::array();
    for (const auto& v : d.polar.vertices) pol.push_back(io::to_json(v));
    j["polar"] = pol;
    j["barycentre"] = io::to_json(d.kps.barycentre);
    j["k_polystable"] = d.kps.polystable;
    j["degree"] = to_string(d.degree);
    j["class_group"] = {{"rank", d.class_group.free_rank},
                        {"torsion", io::to_json(d.class_group.torsion)},
                        {"picard_rank", d.class_group.picard_rank}};
    Json curves = Json::array(), points = Json::array();
    for (const auto& r : d.curves) curves.push_back(cone_json(r));
    for (const auto& r : d.points) points.push_back(cone_json(r));
    j["curves"] = curves;
    j["points"] = points;
    if (d.embedding) {
        auto names = generator_names(*d.embedding);
        Json gens = Json::array();
        for (std::size_t i = 0; i < names.size(); ++i)
            gens.push_back({{"name", names[i]}, {"point", io::to_json(d.embedding->generators[i])},
                            {"degree", d.embedding->degrees[i].get_str()}});
        j["embedding"] = {{"generators", gens}};
        Json bins = Json::array(), mins = Json::array();
        for (const auto& b : d.relations->binomials) bins.push_back(binomial_json(b, names));
        for (const auto& b : d.relations->minimal_generators) mins.push_back(binomial_json(b, names));
        j["relations"] = {{"binomials", bins},
                          {"minimal_generators", mins},
                          {"complete_intersection_224", d.relations->complete_intersection_224}};
    } else {
        j["embedding_error"] = d.embedding_error;
    }
    return j;
}

std::string dossier_text(const Dossier& d) {
    std::ostringstream os;
    os << "vertices:";
    for (const auto& v : d.polytope.vertices()) os << ' ' << format_vector(v);
    os << "\npolar vertices:";
    for (const auto& v : d.polar.vertices) os << ' ' << format_vector(v);
    os << "\nbarycentre of the polar: " << format_vector(d.kps.barycentre)
       << (d.kps.polystable ? " (K-polystable)" : " (not K-polystable)") << '\n';
    os << "anticanonical degree: " << to_string(d.degree) << '\n';
    os << "class group: Z^" << d.class_group.free_rank;
    for (const auto& t : d.class_group.torsion) os << " + Z/" << t.get_str();
    os << '\n';
    if (!d.curves.empty()) {
        os << "torus-invariant curves:\n";
        for (const auto& r : d.curves) os << "  rays " << r.rays[0] << ", " << r.rays[1] << ": " << r.label() << '\n';
    }
    os << "torus-fixed points:\n";
    for (const auto& r : d.points) {
        os << "  rays";
        for (std::size_t i = 0; i < r.rays.size(); ++i) os << (i ? ", " : " ") << r.rays[i];
        os << ": " << r.label() << '\n';
    }
    if (d.embedding) {
        auto names = generator_names(*d.embedding);
        os << "generators:\n";
        for (std::size_t i = 0; i < names.size(); ++i)
            os << "  " << names[i] << " = " << format_vector(d.embedding->generators[i]) << " (degree "
               << d.embedding->degrees[i].get_str() << ")\n";
        os << "minimal relations:\n";
        for (const auto& b : d.relations->minimal_generators)
            os << "  " << binomial_text(b, names) << " (degree " << b.degree.get_str() << ")\n";
        os << "complete intersection of type (2,2,4): " << (d.relations->complete_intersection_224 ? "yes" : "no")
           << '\n';
    } else {
        os << "embedding: " << d.embedding_error << '\n';
    }
    return os.str();
}

Json flag_json(const FlagRefinement& r) {
    Json j{{"volume_polynomial", io::to_json(r.volume_polynomial)},
           {"L_cubed", to_string(r.L_cubed)},
           {"S_surface", to_string(r.S_surface)},
           {"beta_surface", to_string(r.beta_surface)},
           {"S_curve", to_string(r.S_curve)}};
    if (r.F_point) j["F_point"] = to_string(*r.F_point);
    if (r.S_point) j["S_point"] = to_string(*r.S_point);
    j["delta_lower_bound"] = to_string(r.delta_lower_bound);
    return j;
}

Json zariski_json(const SurfaceModel& s, const ZariskiDecomposition& z) {
    Json neg = Json::object();
    for (const auto& [i, x] : z.negative) neg[s.curves()[i]] = to_string(x);
    return {{"positive", s.format(z.positive)}, {"negative", neg}, {"volume", to_string(z.volume)}};
}

std::vector<Check> verify_fixtures(const std::string& fixture_file, const std::string& data_dir, int criterion) {
    Runner r{data_dir, criterion, {}};
    r.run(io::parse_json(io::read_file(fixture_file), fixture_file));
    return r.results;
}

}  // namespace fanolab::cli
