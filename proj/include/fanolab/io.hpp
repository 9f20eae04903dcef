#pragma once

#include "fanolab/mutation.hpp"
#include "fanolab/polytope.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace fanolab::io {

using Json = nlohmann::ordered_json;

/// Reads a whole file, throwing InputError if it cannot be opened.
std::string read_file(const std::string& path);

/// Text format: optional "dim d" line, then one vertex per line; '#' starts a
/// comment.  Errors carry "source:line:" prefixes.
std::vector<IntVector> parse_vertex_list(const std::string& text, const std::string& source);

/// Either the text format or JSON {"vertices": [[...], ...]}.
FanoPolytope parse_polytope(const std::string& text, const std::string& source);
FanoPolytope load_polytope(const std::string& path);

Json to_json(const Rational& q);
Json to_json(const IntVector& v);
Json to_json(const RatVector& v);
Json to_json(const LaurentPolynomial& f);
Json to_json(const MutationData& m);

Rational rational_from_json(const Json& j);
IntVector int_vector_from_json(const Json& j);
/// List of {"exponents": [...], "coeff": "p/q"}.
LaurentPolynomial laurent_from_json(const Json& j);
MutationData mutation_from_json(const Json& j, std::size_t nvars);

Json parse_json(const std::string& text, const std::string& source);

}  // namespace fanolab::io
