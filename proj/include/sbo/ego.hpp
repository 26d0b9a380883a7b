#pragma once

#include <sbo/bounds.hpp>
#include <sbo/localopt.hpp>
#include <sbo/rng.hpp>
#include <sbo/run.hpp>

#include <Eigen/Cholesky>

#include <optional>
#include <utility>
#include <vector>

namespace sbo {

/// Gaussian-process surrogate: anisotropic squared-exponential kernel over
/// inputs mapped to the unit box, constant mean, outputs standardized to
/// zero mean / unit variance internally. Immutable after fitting and safe
/// for concurrent prediction.
class GpModel {
public:
    GpModel() = default;

    /// Posterior (mean, variance) at x, in the training values' original
    /// units. Variance is clamped to [0, signal variance]. Throws
    /// std::invalid_argument on dimension mismatch.
    std::pair<double, double> predict(const Vector& x) const;

    int dimension() const { return static_cast<int>(x_.cols()); }
    int n_training() const { return static_cast<int>(x_.rows()); }

    /// Kernel lengthscales in normalized (unit-box) coordinates.
    const Vector& lengthscales() const { return lengthscales_; }
    /// Signal variance in standardized output units (0 for degenerate data).
    double signal_variance() const { return signal_variance_; }
    /// Diagonal jitter actually used, relative to the signal variance.
    double noise_jitter() const { return jitter_rel_; }
    /// True when all training values were equal: the posterior is the
    /// constant mean with zero variance everywhere.
    bool zero_signal() const { return zero_signal_; }

    /// Negative log marginal likelihood at each hyperparameter start of the
    /// fit, then at the returned hyperparameters (always <= every start).
    const std::vector<double>& start_objectives() const { return start_objectives_; }
    double final_objective() const { return final_objective_; }

private:
    friend GpModel gp_fit(const Matrix&, const Vector&, SeededRng&,
                          const std::optional<Bounds>&);

    Vector kernel_column(const Vector& u) const;

    Matrix x_;               // normalized training inputs, n x d
    Vector y_;               // standardized training values
    Vector shift_, scale_;   // raw -> normalized: (x - shift) / scale
    double y_mean_ = 0.0, y_std_ = 1.0;
    Vector lengthscales_;
    double signal_variance_ = 1.0;
    double jitter_rel_ = 1e-8;
    bool zero_signal_ = false;
    Eigen::LLT<Matrix> llt_;  // of the jittered covariance
    Vector alpha_;            // covariance^{-1} y
    std::vector<double> start_objectives_;
    double final_objective_ = 0.0;
};

struct EgoConfig {
    int initial_points = 10;
    int max_iterations = 10;  // adaptive evaluations after the initial design
    bool polish = false;

    void validate() const;
};

/// Fit the GP by maximizing the log marginal likelihood over log
/// hyperparameters (one default start plus 5 random restarts, local search
/// bounded to lengthscales in [1e-3, 10] and signal variance in [1e-4, 1e4]).
/// `normalization` fixes the unit-box mapping; when absent the data's
/// bounding box is used. All-equal values produce a flagged zero-variance
/// model; duplicate points or fewer than 2 points are argument errors.
GpModel gp_fit(const Matrix& points, const Vector& values, SeededRng& rng,
               const std::optional<Bounds>& normalization = std::nullopt);

inline std::pair<double, double> gp_predict(const GpModel& model, const Vector& x) {
    return model.predict(x);
}

/// Closed-form expected improvement below f_best for a Gaussian with the
/// given mean and standard deviation: (f_best - mu) Phi(z) + sigma phi(z),
/// z = (f_best - mu) / sigma. At sigma = 0 this is max(f_best - mu, 0).
double expected_improvement(double mean, double stddev, double f_best);

/// EI of the model posterior at x. Always >= 0.
double expected_improvement(const GpModel& model, const Vector& x, double f_best);

/// Efficient global optimization: LHS initial design, then per iteration fit
/// the GP and evaluate the objective where expected improvement is maximal
/// (a 500-point random scan of the acquisition anchors local searches from
/// the 5 best probes plus the best observed point). Falls back to the
/// maximin exploration point when the acquisition degenerates (max EI <=
/// 1e-16, a repeated argmax, or a zero-signal posterior). With
/// config.polish, ends with local descent on the true objective.
/// Deterministic for a fixed seed.
RunResult ego_minimize(const Objective& objective, const Bounds& bounds, const EgoConfig& config,
                       SeededRng& rng);

}  // namespace sbo
