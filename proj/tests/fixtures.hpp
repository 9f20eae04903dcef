#pragma once

#include "helpers.hpp"

#include "fanolab/polytope.hpp"

namespace fx {

inline fanolab::FanoPolytope tetra_z2z8() {
    return fanolab::FanoPolytope(th::rows({{3, 2, 4}, {1, 4, 0}, {1, 0, 0}, {-5, -6, -4}}));
}

inline fanolab::FanoPolytope octa_z2() {
    return fanolab::FanoPolytope(th::rows(
        {{1, 3, 2}, {1, 3, 0}, {1, 0, 2}, {1, 0, 0}, {-1, -1, 2}, {-1, -1, -4}, {-1, -2, 2}, {-1, -2, -4}}));
}

inline fanolab::FanoPolytope octa_z2z4() {
    return fanolab::FanoPolytope(th::rows(
        {{3, 4, 4}, {3, 2, 4}, {1, 2, 0}, {1, 0, 0}, {-1, 0, 0}, {-1, -2, 0}, {-3, -2, -4}, {-3, -4, -4}}));
}

inline fanolab::FanoPolytope quartic_simplex() {
    return fanolab::FanoPolytope(th::rows({{3, -1, -1}, {-1, 3, -1}, {-1, -1, 3}, {-1, -1, -1}}));
}

inline fanolab::FanoPolytope projective_space() {
    return fanolab::FanoPolytope(th::rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}}));
}

inline fanolab::FanoPolytope cross_polytope() {
    return fanolab::FanoPolytope(th::rows({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}));
}

}  // namespace fx
