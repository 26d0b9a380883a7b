#pragma once

#include <sbo/bounds.hpp>

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sbo {

/// The Branin-Hoo function with the usual constants
/// a = 1, b = 5.1/(4*pi^2), c = 5/pi, r = 6, s = 10, t = 1/(8*pi).
/// Three global minima of value 0.397887 on [-5,10] x [0,15].
double branin(double x1, double x2);

/// Four-dimensional extension: branin(x1,x2) + branin(x3,x4).
/// Nine equal-value global minima of 0.795774 on the doubled domain.
double branin4(const Vector& x);

/// Compactly supported radial profile exp(-1/(1-(eps*r)^2)) for r < 1/eps,
/// exactly zero otherwise. Peak value exp(-1) at r = 0.
double bump(double r, double epsilon);

/// One localized bump subtracted from a host function. The radial distance
/// is Euclidean over the coordinate block [offset, offset + center.size()),
/// so a bump attached to one 2D sub-function of the 4D family only sees that
/// coordinate pair.
struct BumpSpec {
    Vector center;
    int offset = 0;
    double amplitude = 0.0;  // A in A * bump(r, epsilon); peak depth A/e
    double epsilon = 1.0;    // support radius 1/epsilon
};

struct OptimumRecord {
    std::string label;  // b1..b3 (2D), b11..b33 (4D)
    Vector location;
    double value;
    bool is_global;
};

/// A labeled objective: domain box, optional bump fortifications and the
/// catalog of known optima with values kept consistent with the bumps.
/// Evaluation is pure and thread-safe; bounds enforcement is the caller's
/// duty so surrogates stay evaluable slightly outside the box.
class TestFunction {
public:
    TestFunction(std::string name, Bounds bounds,
                 std::function<double(const Vector&)> base,
                 std::vector<std::pair<std::string, Vector>> optimum_sites);

    double operator()(const Vector& x) const;

    const std::string& name() const { return name_; }
    int dimension() const { return bounds_.dimension(); }
    const Bounds& bounds() const { return bounds_; }
    const std::vector<BumpSpec>& bumps() const { return bumps_; }
    const std::vector<OptimumRecord>& optima() const { return optima_; }

private:
    friend TestFunction fortify(const TestFunction&, std::vector<BumpSpec>, std::string);

    void rebuild_catalog();

    std::string name_;
    Bounds bounds_;
    std::function<double(const Vector&)> base_;
    std::vector<BumpSpec> bumps_;
    std::vector<std::pair<std::string, Vector>> sites_;
    std::vector<OptimumRecord> optima_;
};

TestFunction make_branin2();
TestFunction make_branin4();

/// Subtract the given bumps from `base`. The optimum catalog is re-evaluated
/// and global flags are reassigned. Outside every bump's support the result
/// equals the base function bit for bit.
TestFunction fortify(const TestFunction& base, std::vector<BumpSpec> bumps,
                     std::string name = {});

/// All labeled optima of a built-in family, in catalog order
/// (b1..b3 for 2D, b11, b12, b13, b21, ... for 4D).
inline const std::vector<OptimumRecord>& optimum_catalog(const TestFunction& f) {
    return f.optima();
}

/// Functions addressable by name from the CLI and campaign configs.
const std::vector<std::string>& registry_names();
TestFunction make_function(const std::string& name);

/// Dump `resolution` points per free axis (bounds ends included) as CSV rows
/// x1,..,xd,f. `fixed` pins coordinates (0-based index) to a constant, e.g.
/// to cut a 1D slice through a 2D function.
void write_grid_csv(const TestFunction& f, int resolution, std::ostream& out,
                    const std::map<int, double>& fixed = {});

}  // namespace sbo
