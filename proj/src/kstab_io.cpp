#include "fanolab/kstab_io.hpp"

#include <cctype>
#include <filesystem>

namespace fanolab::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing '" + key + "'");
    return j.at(key);
}

std::vector<std::string> names_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected a list of names");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) throw InputError(where + ": expected a name, found " + x.dump());
        out.push_back(x.get<std::string>());
    }
    return out;
}

RatMatrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected a list of rows");
    RatMatrix m;
    for (const auto& row : j) {
        if (!row.is_array()) throw InputError(where + ": expected a row, found " + row.dump());
        RatVector r;
        for (const auto& x : row) r.push_back(rational_from_json(x));
        m.push_back(std::move(r));
    }
    return m;
}

// Named coefficients over a fixed list of names.
RatVector named_vector(const Json& j, const std::vector<std::string>& names, const std::string& where) {
    RatVector v(names.size(), 0);
    if (j.is_array()) {
        if (j.size() != names.size())
            throw InputError(where + ": expected " + std::to_string(names.size()) + " coefficients");
        for (std::size_t i = 0; i < names.size(); ++i) v[i] = rational_from_json(j[i]);
        return v;
    }
    if (!j.is_object()) throw InputError(where + ": expected {name: coefficient}");
    for (const auto& [k, x] : j.items()) {
        auto it = std::find(names.begin(), names.end(), k);
        if (it == names.end()) throw InputError(where + ": unknown name '" + k + "'");
        v[static_cast<std::size_t>(it - names.begin())] = rational_from_json(x);
    }
    return v;
}

AffineClass affine_from_json(const Json& j, const std::vector<std::string>& names, const std::string& where) {
    AffineClass a{RatVector(names.size(), 0), RatVector(names.size(), 0)};
    if (!j.is_object()) throw InputError(where + ": expected {\"constant\": ..., \"slope\": ...}");
    for (const auto& [k, x] : j.items()) {
        if (k == "constant") a.constant = named_vector(x, names, where);
        else if (k == "slope") a.slope = named_vector(x, names, where);
        else throw InputError(where + ": unexpected key '" + k + "' (coefficients must be affine in u)");
    }
    return a;
}

std::string resolve(const std::string& base_file, const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_absolute()) return rel;
    return (std::filesystem::path(base_file).parent_path() / p).string();
}

template <class F>
auto with_source(const std::string& source, F&& f) {
    try {
        return f();
    } catch (const InputError& e) {
        throw InputError(source + ": " + e.what());
    } catch (const NotPseudoEffective&) {
        throw;
    } catch (const ComputationError& e) {
        throw InputError(source + ": " + e.what());
    }
}

}  // namespace

SurfaceFile surface_from_json(const Json& j) {
    SurfaceFile s;
    if (!j.is_object()) throw InputError("surface: expected an object");
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    auto curves = names_from_json(field(j, "curves", "surface"), "curves");
    RatMatrix gram = matrix_from_json(field(j, "gram", "surface"), "gram");
    auto mori = names_from_json(field(j, "mori", "surface"), "mori");
    std::optional<DivisorClass> antik;
    if (j.contains("antik")) antik = named_vector(j.at("antik"), curves, "antik");
    try {
        s.model = SurfaceModel(curves, gram, mori, antik);
    } catch (const ComputationError& e) {
        throw InputError(e.what());
    }
    if (j.contains("classes")) {
        const Json& c = j.at("classes");
        if (!c.is_object()) throw InputError("classes: expected {name: divisor}");
        for (const auto& [k, v] : c.items()) {
            if (std::find(curves.begin(), curves.end(), k) != curves.end())
                throw InputError("classes: '" + k + "' is already a curve");
            s.classes[k] = divisor_from_json(v, s);
        }
    }
    return s;
}

SurfaceFile load_surface(const std::string& path) {
    return with_source(path, [&] { return surface_from_json(parse_json(read_file(path), path)); });
}

DivisorClass parse_divisor(const std::string& text, const SurfaceFile& s) {
    const SurfaceModel& m = s.model;
    DivisorClass d = m.zero();
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto bad = [&](const std::string& msg) -> InputError {
        return InputError("divisor '" + text + "': " + msg + " at column " + std::to_string(i + 1));
    };
    bool first = true;
    skip();
    if (i == text.size()) throw bad("empty expression");
    while (i < text.size()) {
        Rational sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            if (text[i] == '-') sign = -1;
            ++i;
            skip();
        } else if (!first) {
            throw bad("expected '+' or '-'");
        }
        first = false;
        Rational coeff = 1;
        std::size_t start = i;
        while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) ++i;
        if (i > start) {
            try {
                coeff = parse_rational(text.substr(start, i - start));
            } catch (const InputError&) {
                i = start;
                throw bad("bad coefficient");
            }
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip();
            }
        }
        start = i;
        if (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
            ++i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '\''))
                ++i;
        }
        if (i == start) throw bad("expected a curve or class name");
        std::string name = text.substr(start, i - start);
        DivisorClass term;
        if (auto it = s.classes.find(name); it != s.classes.end()) {
            term = it->second;
        } else if (std::find(m.curves().begin(), m.curves().end(), name) != m.curves().end()) {
            term = m.curve(name);
        } else if (name == "K" && m.anticanonical()) {
            term = scale(-1, *m.anticanonical());
        } else {
            i = start;
            throw bad("unknown name '" + name + "'");
        }
        d = add(d, scale(sign * coeff, term));
        skip();
    }
    return d;
}

DivisorClass divisor_from_json(const Json& j, const SurfaceFile& s) {
    if (j.is_string()) return parse_divisor(j.get<std::string>(), s);
    return named_vector(j, s.model.curves(), "divisor");
}

WallInput load_walls(const std::string& path) {
    Json j = parse_json(read_file(path), path);
    return with_source(path, [&] {
        WallInput w;
        w.surface = load_surface(resolve(path, field(j, "surface", "walls").get<std::string>()));
        const SurfaceModel& m = w.surface.model;
        if (j.contains("L")) w.L = divisor_from_json(j.at("L"), w.surface);
        else if (m.anticanonical()) w.L = *m.anticanonical();
        else throw InputError("walls: no 'L' and the surface has no anticanonical class");
        if (j.contains("slope")) w.slope = rational_from_json(j.at("slope"));
        if (j.contains("range")) {
            const Json& r = j.at("range");
            if (!r.is_array() || r.size() != 2) throw InputError("range: expected [lo, hi]");
            w.lo = rational_from_json(r[0]);
            w.hi = rational_from_json(r[1]);
        }
        const Json& vals = field(j, "valuations", "walls");
        if (!vals.is_array()) throw InputError("valuations: expected a list");
        std::size_t k = 0;
        for (const auto& v : vals) {
            ++k;
            std::string where = "valuation " + std::to_string(k);
            NamedValuation nv;
            nv.name = v.contains("name") ? v.at("name").get<std::string>() : where;
            Rational ord = rational_from_json(field(v, "ord", where));
            auto a_of = [&](const Json& x) { return x.contains("A") ? rational_from_json(x.at("A")) : Rational(1); };
            if (v.contains("divisor")) {
                DivisorClass f = divisor_from_json(v.at("divisor"), w.surface);
                nv.spec = {a_of(v), ord, s_invariant(m, w.L, f)};
            } else if (v.contains("combine")) {
                std::vector<QuasiMonomialPart> parts;
                for (const auto& p : v.at("combine")) {
                    Rational a = a_of(p);
                    Rational s = s_invariant(m, w.L, divisor_from_json(field(p, "divisor", where), w.surface));
                    parts.push_back({rational_from_json(field(p, "weight", where)), a, a - s});
                }
                nv.spec = quasimonomial_combine(parts);
                nv.spec.ord = ord;
            } else {
                nv.spec = {rational_from_json(field(v, "A", where)), ord, rational_from_json(field(v, "S", where))};
            }
            w.valuations.push_back(std::move(nv));
        }
        return w;
    });
}

FlagConfig flag_from_json(const Json& j) {
    FlagConfig f;
    const Json& x = field(j, "threefold", "flag");
    auto basis = names_from_json(field(x, "basis", "threefold"), "basis");
    f.threefold = CubicForm(basis);
    for (const auto& t : field(x, "products", "threefold")) {
        if (!t.is_array() || t.size() != 4) throw InputError("products: expected [D1, D2, D3, value], found " + t.dump());
        f.threefold.set(f.threefold.index(t[0].get<std::string>()), f.threefold.index(t[1].get<std::string>()),
                        f.threefold.index(t[2].get<std::string>()), rational_from_json(t[3]));
    }
    f.L = named_vector(field(j, "L", "flag"), basis, "L");
    f.surface = f.threefold.index(field(j, "surface", "flag").get<std::string>());
    f.negative = affine_from_json(field(j, "negative", "flag"), basis, "negative");
    f.u_max = rational_from_json(field(j, "u_max", "flag"));
    if (f.u_max <= 0) throw InputError("u_max must be positive");
    SurfaceFile s = surface_from_json(field(j, "surface_model", "flag"));
    f.surface_model = s.model;
    f.restriction = affine_from_json(field(j, "restriction", "flag"), s.model.curves(), "restriction");
    f.flag_curve = s.model.index(field(j, "flag_curve", "flag").get<std::string>());
    if (j.contains("point")) {
        std::map<std::size_t, Rational> mult;
        for (const auto& [k, v] : j.at("point").items()) mult[s.model.index(k)] = rational_from_json(v);
        f.point_multiplicity = std::move(mult);
    }
    return f;
}

FlagConfig load_flag(const std::string& path) {
    Json j = parse_json(read_file(path), path);
    return with_source(path, [&] { return flag_from_json(j); });
}

}  // namespace fanolab::io
