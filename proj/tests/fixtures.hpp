#pragma once

#include <latbound/lattice.hpp>

#include <vector>

namespace fixtures {

using latbound::Int;
using latbound::IntMat;
using latbound::IntVec;
using latbound::Lattice;

inline Lattice lat(const std::vector<IntVec>& rows) {
    return Lattice{latbound::from_rows(rows)};
}

inline Lattice a2() { return lat({{-2, 1}, {1, -2}}); }

// -E8 on the Dynkin layout: a chain 0-1-2-3-4-5-6 with vertex 7 hung off
// vertex 2, all squares -2.
inline Lattice minus_e8() {
    IntMat g(8, 8);
    for (int i = 0; i < 8; ++i) g(i, i) = -2;
    for (int i = 0; i + 1 < 7; ++i) g(i, i + 1) = g(i + 1, i) = 1;
    g(2, 7) = g(7, 2) = 1;
    return Lattice{std::move(g)};
}

} // namespace fixtures
