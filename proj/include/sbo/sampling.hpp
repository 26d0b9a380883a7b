#pragma once

#include <sbo/bounds.hpp>
#include <sbo/rng.hpp>

namespace sbo {

/// A set of sample points, one per row, all inside `bounds`.
struct Design {
    Matrix points;  // n x d
    Bounds bounds;
};

/// Plain random Latin hypercube design: each axis is split into n equal-width
/// strata, every stratum receives exactly one point, placement within a
/// stratum is uniform and the stratum-to-point assignment is an independent
/// uniform permutation per dimension. No maximin or other post-processing.
Design latin_hypercube(int n, const Bounds& bounds, SeededRng& rng);

/// One point uniform over the box.
Vector uniform_point(const Bounds& bounds, SeededRng& rng);

}  // namespace sbo
