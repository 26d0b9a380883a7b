#include <sbo/sampling.hpp>

#include <numeric>
#include <stdexcept>

namespace sbo {

Design latin_hypercube(int n, const Bounds& bounds, SeededRng& rng) {
    if (n < 1) throw std::invalid_argument("latin_hypercube: n >= 1 required");

    const int d = bounds.dimension();
    Matrix points(n, d);
    std::vector<int> strata(static_cast<std::size_t>(n));

    // Dimensions are filled one at a time so the draw order is fixed and the
    // design is reproducible from the seed alone.
    for (int j = 0; j < d; ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        rng.shuffle(strata);
        const double lo = bounds.lower()[j];
        const double w = (bounds.upper()[j] - lo) / n;
        for (int i = 0; i < n; ++i)
            points(i, j) = lo + (strata[static_cast<std::size_t>(i)] + rng.next_double()) * w;
    }
    return Design{std::move(points), bounds};
}

Vector uniform_point(const Bounds& bounds, SeededRng& rng) {
    const int d = bounds.dimension();
    Vector x(d);
    for (int j = 0; j < d; ++j)
        x[j] = rng.uniform(bounds.lower()[j], bounds.upper()[j]);
    return x;
}

}  // namespace sbo
