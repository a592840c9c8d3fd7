#pragma once

#include <cstdint>
#include <vector>

#include "hypernorden/matrix.hpp"

namespace hypernorden {

/// Radical-inverse of index in the given base, in (0,1).
double halton_radical_inverse(std::uint64_t index, std::uint32_t base);

/// Deterministic Halton points in the cube [-box, box]^dim.
/// Coordinate j uses the j-th prime base; the sequence starts at index 1,
/// so the same (count, dim, box) always yields the same points.
std::vector<Vector> halton_points(int count, int dim, double box);

}  // namespace hypernorden
