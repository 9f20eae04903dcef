#include "fanolab/io.hpp"

#include <fstream>
#include <sstream>

namespace fanolab::io {

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
    throw InputError(source + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool looks_like_json(const std::string& text) {
    auto b = text.find_first_not_of(" \t\r\n");
    return b != std::string::npos && (text[b] == '{' || text[b] == '[');
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<IntVector> parse_vertex_list(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::optional<std::size_t> dim;
    std::vector<IntVector> out;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ls >> tok) toks.push_back(tok);
        if (toks.front() == "dim") {
            if (dim || !out.empty()) fail(source, lineno, "'dim' must come first and only once");
            if (toks.size() != 2) fail(source, lineno, "expected 'dim <d>'");
            try {
                int d = std::stoi(toks[1]);
                if (d < 1 || d > 4) fail(source, lineno, "dimension must be between 1 and 4");
                dim = static_cast<std::size_t>(d);
            } catch (const std::logic_error&) {
                fail(source, lineno, "bad dimension '" + toks[1] + "'");
            }
            continue;
        }
        IntVector v;
        for (const auto& t : toks) {
            Integer z;
            if (t.empty() || z.set_str(t[0] == '+' ? t.substr(1) : t, 10) != 0)
                fail(source, lineno, "not an integer: '" + t + "'");
            v.push_back(z);
        }
        std::size_t expected = dim ? *dim : (out.empty() ? v.size() : out.front().size());
        if (v.size() != expected)
            fail(source, lineno,
                 "expected " + std::to_string(expected) + " coordinates, found " + std::to_string(v.size()));
        out.push_back(std::move(v));
    }
    if (out.empty()) fail(source, lineno, "no vertices");
    return out;
}

FanoPolytope parse_polytope(const std::string& text, const std::string& source) {
    std::vector<IntVector> verts;
    if (looks_like_json(text)) {
        Json j = parse_json(text, source);
        if (!j.is_object() || !j.contains("vertices")) throw InputError(source + ": expected an object with 'vertices'");
        try {
            for (const auto& v : j.at("vertices")) verts.push_back(int_vector_from_json(v));
        } catch (const InputError& e) {
            throw InputError(source + ": " + e.what());
        }
    } else {
        verts = parse_vertex_list(text, source);
    }
    try {
        return FanoPolytope(verts);
    } catch (const ComputationError& e) {
        throw InputError(source + ": " + e.what());
    }
}

FanoPolytope load_polytope(const std::string& path) { return parse_polytope(read_file(path), path); }

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const IntVector& v) {
    Json j = Json::array();
    for (const auto& x : v) {
        if (x.fits_slong_p()) j.push_back(x.get_si());
        else j.push_back(x.get_str());
    }
    return j;
}

Json to_json(const RatVector& v) {
    Json j = Json::array();
    for (const auto& x : v) j.push_back(to_string(x));
    return j;
}

Json to_json(const LaurentPolynomial& f) {
    Json j = Json::array();
    // descending order reads like the usual way of writing polynomials
    for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it)
        j.push_back({{"exponents", it->first}, {"coeff", to_string(it->second)}});
    return j;
}

Json to_json(const MutationData& m) { return {{"weight", to_json(m.weight)}, {"factor", to_json(m.factor)}}; }

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<std::int64_t>())));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw InputError("expected a rational as a string \"p/q\" or an integer");
}

IntVector int_vector_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("expected an array of integers");
    IntVector v;
    for (const auto& x : j) {
        if (x.is_number_integer()) v.emplace_back(std::to_string(x.get<std::int64_t>()));
        else if (x.is_string()) {
            Rational q = parse_rational(x.get<std::string>());
            if (q.get_den() != 1) throw InputError("expected an integer, found " + x.get<std::string>());
            v.push_back(q.get_num());
        } else
            throw InputError("expected an integer, found " + x.dump());
    }
    return v;
}

LaurentPolynomial laurent_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw InputError("Laurent polynomial: expected a nonempty list of terms");
    std::optional<LaurentPolynomial> f;
    std::size_t k = 0;
    for (const auto& t : j) {
        ++k;
        if (!t.is_object() || !t.contains("exponents") || !t.contains("coeff"))
            throw InputError("term " + std::to_string(k) + ": expected {\"exponents\": [...], \"coeff\": \"p/q\"}");
        Exponent e = to_exponent(int_vector_from_json(t.at("exponents")));
        if (!f) f.emplace(e.size());
        if (e.size() != f->nvars()) throw InputError("term " + std::to_string(k) + ": exponent length mismatch");
        f->add_term(e, rational_from_json(t.at("coeff")));
    }
    return *f;
}

MutationData mutation_from_json(const Json& j, std::size_t nvars) {
    if (!j.is_object() || !j.contains("weight") || !j.contains("factor"))
        throw InputError("mutation: expected {\"weight\": [...], \"factor\": [...]}");
    MutationData m{int_vector_from_json(j.at("weight")), laurent_from_json(j.at("factor"))};
    if (m.weight.size() != nvars || m.factor.nvars() != nvars) throw InputError("mutation: dimension mismatch");
    try {
        m.validate();
    } catch (const ComputationError& e) {
        throw InputError(e.what());
    }
    return m;
}

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // count lines up to the failing byte so the message matches the text format
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        fail(source, line, "invalid JSON");
    }
}

}  // namespace fanolab::io
