#pragma once

#include "fanolab/io.hpp"
#include "fanolab/kstab.hpp"

#include <map>
#include <string>
#include <vector>

namespace fanolab::io {

struct SurfaceFile {
    std::string name;
    SurfaceModel model;
    std::map<std::string, DivisorClass> classes;  // named classes besides the curves
};

/// { "curves": [...], "gram": [[...]], "mori": [...], "antik": [...] } with an
/// optional "name" and "classes": {name: divisor}.
SurfaceFile surface_from_json(const Json& j);
SurfaceFile load_surface(const std::string& path);

/// Linear combination such as "2 C + 1/2 B' - E1" over curve names and named
/// classes; "K" is the canonical class when the model has an anticanonical one.
DivisorClass parse_divisor(const std::string& text, const SurfaceFile& s);
/// A string expression, an object {name: coefficient} or a coefficient array.
DivisorClass divisor_from_json(const Json& j, const SurfaceFile& s);

struct WallInput {
    SurfaceFile surface;
    DivisorClass L;
    Rational slope = 4, lo = 0, hi = 1;
    std::vector<NamedValuation> valuations;
};

/// Valuations are given by a divisor ({"divisor": ..., "A"?}), a combination
/// ({"combine": [{"weight", "divisor", "A"?}, ...]}) or explicitly ({"A", "S"}),
/// each with "ord".  The "surface" path is relative to the file.
WallInput load_walls(const std::string& path);

/// Cubic form as triples ["E0", "E0", "E0", "16"]; classes as {name: coefficient}.
FlagConfig flag_from_json(const Json& j);
FlagConfig load_flag(const std::string& path);

}  // namespace fanolab::io
