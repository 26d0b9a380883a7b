#include <sbo/testfuncs.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sbo {

namespace {

constexpr double kPi = std::numbers::pi;

// Records with value within this of the catalog minimum are flagged global.
// Absorbs the truncation of optimum coordinates printed at limited precision.
constexpr double kGlobalValueTol = 1e-9;

}  // namespace

double branin(double x1, double x2) {
    constexpr double a = 1.0;
    constexpr double b = 5.1 / (4.0 * kPi * kPi);
    constexpr double c = 5.0 / kPi;
    constexpr double r = 6.0;
    constexpr double s = 10.0;
    constexpr double t = 1.0 / (8.0 * kPi);
    const double u = x2 - b * x1 * x1 + c * x1 - r;
    return a * u * u + s * (1.0 - t) * std::cos(x1) + s;
}

double branin4(const Vector& x) {
    if (x.size() != 4)
        throw std::invalid_argument("branin4: point must have exactly 4 components");
    return branin(x[0], x[1]) + branin(x[2], x[3]);
}

double bump(double r, double epsilon) {
    if (r < 0.0) throw std::invalid_argument("bump: r >= 0 required");
    if (!(epsilon > 0.0)) throw std::invalid_argument("bump: epsilon > 0 required");
    const double er = epsilon * r;
    if (er >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - er * er));
}

TestFunction::TestFunction(std::string name, Bounds bounds,
                           std::function<double(const Vector&)> base,
                           std::vector<std::pair<std::string, Vector>> optimum_sites)
    : name_(std::move(name)),
      bounds_(std::move(bounds)),
      base_(std::move(base)),
      sites_(std::move(optimum_sites)) {
    if (sites_.empty())
        throw std::invalid_argument("TestFunction: optimum catalog must be non-empty");
    for (const auto& [label, loc] : sites_)
        if (!bounds_.contains(loc))
            throw std::invalid_argument("TestFunction: optimum '" + label + "' outside bounds");
    rebuild_catalog();
}

double TestFunction::operator()(const Vector& x) const {
    if (x.size() != bounds_.dimension())
        throw std::invalid_argument("TestFunction '" + name_ + "': point has dimension " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(bounds_.dimension()));
    double value = base_(x);
    for (const auto& spec : bumps_) {
        const double r = (x.segment(spec.offset, spec.center.size()) - spec.center).norm();
        const double phi = bump(r, spec.epsilon);
        if (phi != 0.0) value -= spec.amplitude * phi;
    }
    return value;
}

void TestFunction::rebuild_catalog() {
    optima_.clear();
    optima_.reserve(sites_.size());
    for (const auto& [label, loc] : sites_)
        optima_.push_back(OptimumRecord{label, loc, (*this)(loc), false});
    double min_value = optima_.front().value;
    for (const auto& rec : optima_) min_value = std::min(min_value, rec.value);
    for (auto& rec : optima_)
        rec.is_global = rec.value <= min_value + kGlobalValueTol * (1.0 + std::abs(min_value));
}

namespace {

const std::vector<std::pair<std::string, Vector>>& branin2_sites() {
    static const std::vector<std::pair<std::string, Vector>> sites = {
        {"b1", Vector{{-kPi, 12.275}}},
        {"b2", Vector{{kPi, 2.275}}},
        {"b3", Vector{{9.42478, 2.475}}},
    };
    return sites;
}

}  // namespace

TestFunction make_branin2() {
    return TestFunction("branin2", Bounds(Vector{{-5.0, 0.0}}, Vector{{10.0, 15.0}}),
                        [](const Vector& x) { return branin(x[0], x[1]); },
                        branin2_sites());
}

TestFunction make_branin4() {
    const auto& s2 = branin2_sites();
    std::vector<std::pair<std::string, Vector>> sites;
    for (std::size_t i = 0; i < s2.size(); ++i) {
        for (std::size_t j = 0; j < s2.size(); ++j) {
            // b{i}{j} pairs the i-th optimum of (x1,x2) with the j-th of (x3,x4).
            Vector loc(4);
            loc << s2[i].second, s2[j].second;
            sites.emplace_back("b" + std::to_string(i + 1) + std::to_string(j + 1), loc);
        }
    }
    return TestFunction("branin4",
                        Bounds(Vector{{-5.0, 0.0, -5.0, 0.0}}, Vector{{10.0, 15.0, 10.0, 15.0}}),
                        branin4, std::move(sites));
}

TestFunction fortify(const TestFunction& base, std::vector<BumpSpec> bumps, std::string name) {
    for (const auto& spec : bumps) {
        if (spec.amplitude < 0.0)
            throw std::invalid_argument("fortify: bump amplitude >= 0 required");
        if (!(spec.epsilon > 0.0))
            throw std::invalid_argument("fortify: bump epsilon > 0 required");
        const auto block = static_cast<int>(spec.center.size());
        if (spec.offset < 0 || spec.offset + block > base.dimension())
            throw std::invalid_argument("fortify: bump coordinate block outside function dimension");
        for (int k = 0; k < block; ++k) {
            const int dim = spec.offset + k;
            if (spec.center[k] < base.bounds().lower()[dim] ||
                spec.center[k] > base.bounds().upper()[dim])
                throw std::invalid_argument("fortify: bump center outside bounds");
        }
    }
    TestFunction result = base;
    result.name_ = name.empty() ? base.name() + "-fortified" : std::move(name);
    result.bumps_.insert(result.bumps_.end(), bumps.begin(), bumps.end());
    result.rebuild_catalog();
    return result;
}

const std::vector<std::string>& registry_names() {
    static const std::vector<std::string> names = {
        "branin2",
        "branin2-fortified",
        "branin4",
        "branin4-fortified-b11",
    };
    return names;
}

TestFunction make_function(const std::string& name) {
    if (name == "branin2") return make_branin2();
    if (name == "branin2-fortified") {
        // Amplitude-10 bump at the first optimum; its value drops to -3.280907
        // while the other two stay at 0.397887.
        return fortify(make_branin2(), {BumpSpec{Vector{{-kPi, 12.275}}, 0, 10.0, 1.0}},
                       "branin2-fortified");
    }
    if (name == "branin4") return make_branin4();
    if (name == "branin4-fortified-b11") {
        // Amplitude-5 bumps on both sub-functions at their first optima; b11
        // becomes the unique global optimum at -2.88302.
        return fortify(make_branin4(),
                       {BumpSpec{Vector{{-kPi, 12.275}}, 0, 5.0, 1.0},
                        BumpSpec{Vector{{-kPi, 12.275}}, 2, 5.0, 1.0}},
                       "branin4-fortified-b11");
    }
    std::string known;
    for (const auto& n : registry_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown test function '" + name + "' (known: " + known + ")");
}

void write_grid_csv(const TestFunction& f, int resolution, std::ostream& out,
                    const std::map<int, double>& fixed) {
    if (resolution < 2)
        throw std::invalid_argument("write_grid_csv: resolution >= 2 required");
    const int d = f.dimension();
    for (const auto& kv : fixed)
        if (kv.first < 0 || kv.first >= d)
            throw std::invalid_argument("write_grid_csv: fixed coordinate index out of range");

    std::vector<int> free_dims;
    for (int j = 0; j < d; ++j)
        if (!fixed.count(j)) free_dims.push_back(j);

    Vector x(d);
    for (const auto& [dim, value] : fixed) x[dim] = value;

    for (int j = 0; j < d; ++j) out << "x" << (j + 1) << ",";
    out << "f\n";

    // Row-major sweep; the last free dimension varies fastest.
    std::size_t rows = 1;
    for (std::size_t k = 0; k < free_dims.size(); ++k) rows *= static_cast<std::size_t>(resolution);

    char buf[64];
    for (std::size_t row = 0; row < rows; ++row) {
        std::size_t idx = row;
        for (std::size_t k = free_dims.size(); k-- > 0;) {
            const int j = free_dims[k];
            const int step = static_cast<int>(idx % static_cast<std::size_t>(resolution));
            idx /= static_cast<std::size_t>(resolution);
            const double lo = f.bounds().lower()[j];
            const double hi = f.bounds().upper()[j];
            x[j] = lo + (hi - lo) * step / (resolution - 1);
        }
        for (int j = 0; j < d; ++j) {
            std::snprintf(buf, sizeof buf, "%.10g", x[j]);
            out << buf << ",";
        }
        std::snprintf(buf, sizeof buf, "%.10g", f(x));
        out << buf << "\n";
    }
}

}  // namespace sbo
