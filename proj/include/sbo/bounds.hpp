#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <utility>

namespace sbo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box domain: one [lower, upper] interval per design variable.
class Bounds {
public:
    Bounds(Vector lower, Vector upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {
        if (lower_.size() == 0 || lower_.size() != upper_.size())
            throw std::invalid_argument("Bounds: lower and upper must have equal length >= 1");
        for (Eigen::Index i = 0; i < lower_.size(); ++i)
            if (!(lower_[i] < upper_[i]))
                throw std::invalid_argument("Bounds: lower[i] < upper[i] required");
    }

    int dimension() const { return static_cast<int>(lower_.size()); }
    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }
    Vector width() const { return upper_ - lower_; }

    bool contains(const Vector& x, double tol = 0.0) const {
        if (x.size() != lower_.size()) return false;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
        return true;
    }

    Vector clamp(const Vector& x) const {
        return x.cwiseMax(lower_).cwiseMin(upper_);
    }

    /// Affine map onto the unit box. Distances measured there make a single
    /// threshold meaningful across problems whose raw scales differ.
    Vector normalize(const Vector& x) const {
        return (x - lower_).cwiseQuotient(upper_ - lower_);
    }

    Vector denormalize(const Vector& u) const {
        return lower_ + u.cwiseProduct(upper_ - lower_);
    }

private:
    Vector lower_, upper_;
};

/// Euclidean distance between two points after mapping both onto the unit box.
inline double normalized_distance(const Bounds& bounds, const Vector& a, const Vector& b) {
    return (bounds.normalize(a) - bounds.normalize(b)).norm();
}

}  // namespace sbo
