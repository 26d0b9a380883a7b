#include <doctest.h>

#include <sbo/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

using namespace sbo;

namespace {

Bounds unit_box(int d) {
    return Bounds(Vector::Zero(d), Vector::Ones(d));
}

// One point per equal-width stratum on every axis, with an epsilon-safe bin
// index so points sitting exactly on a stratum edge do not double-count.
bool is_stratified(const Design& design) {
    const int n = static_cast<int>(design.points.rows());
    const int d = static_cast<int>(design.points.cols());
    for (int j = 0; j < d; ++j) {
        const double lo = design.bounds.lower()[j];
        const double hi = design.bounds.upper()[j];
        std::vector<int> counts(n, 0);
        for (int i = 0; i < n; ++i) {
            const double u = (design.points(i, j) - lo) / (hi - lo);
            const int bin = std::min(n - 1, static_cast<int>(u * n));
            if (bin < 0) return false;
            ++counts[bin];
        }
        for (int c : counts)
            if (c != 1) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("latin hypercube with one point is just a point in the box") {
    SeededRng rng(1);
    const Design design = latin_hypercube(1, unit_box(2), rng);
    REQUIRE(design.points.rows() == 1);
    CHECK(design.bounds.contains(design.points.row(0).transpose()));
}

TEST_CASE("latin hypercube puts exactly one point in each stratum") {
    const Bounds bounds(Vector{{-5.0, 0.0}}, Vector{{10.0, 15.0}});
    SeededRng rng(7);
    const Design design = latin_hypercube(10, bounds, rng);
    REQUIRE(design.points.rows() == 10);
    CHECK(is_stratified(design));

    // Stratum width is 1.5 on both axes: bin by hand as well.
    for (int j = 0; j < 2; ++j) {
        std::set<int> bins;
        for (int i = 0; i < 10; ++i) {
            const double w = 1.5;
            bins.insert(static_cast<int>((design.points(i, j) - bounds.lower()[j]) / w));
        }
        CHECK(bins.size() == 10);
    }
}

TEST_CASE("latin hypercube is deterministic and bound-contained") {
    const Bounds bounds(Vector{{-5.0, 0.0}}, Vector{{10.0, 15.0}});
    SeededRng rng_a(42), rng_b(42);
    const Design a = latin_hypercube(25, bounds, rng_a);
    const Design b = latin_hypercube(25, bounds, rng_b);
    CHECK((a.points.array() == b.points.array()).all());
    for (int i = 0; i < 25; ++i)
        CHECK(bounds.contains(a.points.row(i).transpose()));
}

TEST_CASE("latin hypercube stratification holds across random shapes") {
    SeededRng meta(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(meta.next_below(100));
        const int d = 1 + static_cast<int>(meta.next_below(4));
        Vector lo(d), hi(d);
        for (int j = 0; j < d; ++j) {
            lo[j] = meta.uniform(-10, 5);
            hi[j] = lo[j] + meta.uniform(0.5, 20);
        }
        SeededRng rng(meta.next_u64());
        const Design design = latin_hypercube(n, Bounds(lo, hi), rng);
        CHECK(is_stratified(design));
    }
}

TEST_CASE("latin hypercube rejects an empty design") {
    SeededRng rng(1);
    CHECK_THROWS_AS(latin_hypercube(0, unit_box(2), rng), std::invalid_argument);
}

TEST_CASE("uniform points are contained, reproducible and unbiased") {
    const Bounds bounds(Vector{{2.0}}, Vector{{3.0}});
    SeededRng rng_a(5), rng_b(5);
    for (int i = 0; i < 100; ++i) {
        const Vector x = uniform_point(bounds, rng_a);
        CHECK(bounds.contains(x));
        CHECK((x.array() == uniform_point(bounds, rng_b).array()).all());
    }

    SeededRng rng(123);
    const Bounds unit = unit_box(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) sum += uniform_point(unit, rng)[0];
    CHECK(std::abs(sum / 100000 - 0.5) <= 0.01);
}

TEST_CASE("rng: fixed algorithm, portable doubles, splittable sub-seeds") {
    // mt19937_64's output sequence is pinned by the standard; the first draw
    // for seed 5489 is a documented constant.
    SeededRng rng(5489);
    CHECK(rng.next_u64() == 14514284786278117030ull);

    SeededRng a(7), b(7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_double() == b.next_double());
    for (int i = 0; i < 1000; ++i) {
        const double u = SeededRng(i).next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }

    // Sub-seeds: deterministic, order-free, and distinct across replicates.
    std::set<std::uint64_t> seeds;
    for (int i = 0; i < 1000; ++i) seeds.insert(sub_seed(42, i));
    CHECK(seeds.size() == 1000);
    CHECK(sub_seed(42, 7) == sub_seed(42, 7));
    CHECK(sub_seed(42, 7) != sub_seed(43, 7));

    // next_below stays in range and hits every residue eventually.
    SeededRng c(9);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t v = c.next_below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);

    // Gaussian draws have roughly standard moments.
    SeededRng g(77);
    double mean = 0.0, m2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double z = g.next_gaussian();
        mean += z;
        m2 += z * z;
    }
    mean /= n;
    m2 /= n;
    CHECK(std::abs(mean) <= 0.02);
    CHECK(std::abs(m2 - 1.0) <= 0.03);
}
