#pragma once

#include "fanolab/number.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace th {

inline fanolab::IntVector iv(std::initializer_list<long> xs) {
    fanolab::IntVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline fanolab::Rational q(const char* s) { return fanolab::parse_rational(s); }

inline fanolab::RatVector rv(std::initializer_list<const char*> xs) {
    fanolab::RatVector v;
    for (const char* x : xs) v.push_back(fanolab::parse_rational(x));
    return v;
}

inline std::vector<fanolab::IntVector> rows(std::initializer_list<std::initializer_list<long>> xs) {
    std::vector<fanolab::IntVector> out;
    for (auto r : xs) out.push_back(iv(r));
    return out;
}

#ifdef FANOLAB_DATA_DIR
inline std::string data_path(const std::string& rel) { return std::string(FANOLAB_DATA_DIR) + "/" + rel; }
#endif

}  // namespace th
