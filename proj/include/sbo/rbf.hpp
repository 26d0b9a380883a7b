#pragma once

#include <sbo/bounds.hpp>

#include <optional>
#include <stdexcept>

namespace sbo {

/// The interpolation system could not be solved to tolerance.
struct singular_system_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RbfKernel { multiquadric };

/// Fitted radial basis function surrogate, multiquadric kernel
/// phi(r) = sqrt(1 + r^2) applied as phi(epsilon * ||x - c||). Immutable
/// after fitting and safe for concurrent evaluation.
class RbfModel {
public:
    double operator()(const Vector& x) const;

    const Matrix& centers() const { return centers_; }
    const Vector& weights() const { return weights_; }
    double epsilon() const { return epsilon_; }
    double smooth() const { return smooth_; }
    RbfKernel kernel() const { return RbfKernel::multiquadric; }
    int dimension() const { return static_cast<int>(centers_.cols()); }

private:
    friend RbfModel rbf_fit(const Matrix&, const Vector&, std::optional<double>, double);

    Matrix centers_;  // n x d
    Vector weights_;
    double epsilon_ = 1.0;
    double smooth_ = 0.0;
};

/// Solve (Phi + smooth*I) w = values for the kernel weights. With smooth = 0
/// the model interpolates: it reproduces every training value to a relative
/// residual of 1e-8, or fit throws. Near-singular systems get an automatic
/// diagonal jitter with a warning; exact duplicate points with smooth = 0
/// are rejected as singular. When `epsilon` is unset it is taken from the
/// data scale via default_epsilon.
RbfModel rbf_fit(const Matrix& points, const Vector& values,
                 std::optional<double> epsilon = std::nullopt, double smooth = 0.0);

inline double rbf_eval(const RbfModel& model, const Vector& x) { return model(x); }

/// Shape parameter from the data scale: the reciprocal of the mean pairwise
/// distance between centers (all unordered pairs). Scaling all points by c
/// scales the result by 1/c.
double default_epsilon(const Matrix& points);

}  // namespace sbo
