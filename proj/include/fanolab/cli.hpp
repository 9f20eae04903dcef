#pragma once

#include "fanolab/io.hpp"
#include "fanolab/kstab.hpp"
#include "fanolab/mutation.hpp"
#include "fanolab/toric.hpp"

#include <string>
#include <vector>

namespace fanolab::cli {

using io::Json;

Json dossier_json(const Dossier& d);
std::string dossier_text(const Dossier& d);

/// Generator names x0, x1, ... for degree 1 and y0, y1, ... for higher degrees.
std::vector<std::string> generator_names(const EmbeddingResult& e);
std::string binomial_text(const Binomial& b, const std::vector<std::string>& names);

Json flag_json(const FlagRefinement& r);
Json zariski_json(const SurfaceModel& s, const ZariskiDecomposition& z);

struct Check {
    int criterion = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // "expected ..., got ..." on failure
};

/// Runs every check listed in the fixture file (paths inside are relative to
/// data_dir).  A criterion of 0 runs all of them.
std::vector<Check> verify_fixtures(const std::string& fixture_file, const std::string& data_dir, int criterion = 0);

}  // namespace fanolab::cli
