#include <sbo/rbf.hpp>

#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace sbo {

namespace {

double multiquadric(double r) { return std::sqrt(1.0 + r * r); }

Matrix pairwise_distances(const Matrix& points) {
    const Eigen::Index n = points.rows();
    Matrix dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = (points.row(i) - points.row(j)).norm();
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }
    return dist;
}

}  // namespace

double RbfModel::operator()(const Vector& x) const {
    if (x.size() != centers_.cols())
        throw std::invalid_argument("rbf_eval: point dimension mismatch");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < centers_.rows(); ++i) {
        const double r = epsilon_ * (centers_.row(i).transpose() - x).norm();
        acc += weights_[i] * multiquadric(r);
    }
    return acc;
}

RbfModel rbf_fit(const Matrix& points, const Vector& values,
                 std::optional<double> epsilon, double smooth) {
    const Eigen::Index n = points.rows();
    if (n < 1) throw std::invalid_argument("rbf_fit: at least one point required");
    if (values.size() != n)
        throw std::invalid_argument("rbf_fit: points and values length mismatch");
    if (!values.allFinite() || !points.allFinite())
        throw std::invalid_argument("rbf_fit: non-finite input");
    if (smooth < 0.0) throw std::invalid_argument("rbf_fit: smooth >= 0 required");
    if (epsilon && !(*epsilon > 0.0))
        throw std::invalid_argument("rbf_fit: epsilon > 0 required");

    const Matrix dist = pairwise_distances(points);
    if (smooth == 0.0) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                if (dist(i, j) == 0.0)
                    throw singular_system_error(
                        "rbf_fit: duplicate points make the interpolation system singular");
    }

    RbfModel model;
    model.centers_ = points;
    model.smooth_ = smooth;
    model.epsilon_ = epsilon ? *epsilon : (n >= 2 ? default_epsilon(points) : 1.0);

    Matrix phi = (model.epsilon_ * dist.array()).square().unaryExpr(
        [](double r2) { return std::sqrt(1.0 + r2); }).matrix();
    phi.diagonal().array() += smooth;

    Eigen::PartialPivLU<Matrix> lu(phi);
    // Adaptive sampling clusters points near optima and the system degrades;
    // jitter the diagonal rather than fail silently.
    if (lu.rcond() < 1e-12) {
        phi.diagonal().array() += 1e-10 * phi.trace() / static_cast<double>(n);
        lu.compute(phi);
    }
    model.weights_ = lu.solve(values);

    const double residual = (phi * model.weights_ - values).norm();
    if (!(residual <= 1e-8 * std::max(values.norm(), 1e-30)) || !model.weights_.allFinite())
        throw singular_system_error("rbf_fit: solve residual " + std::to_string(residual) +
                                    " above tolerance");
    return model;
}

double default_epsilon(const Matrix& points) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw std::invalid_argument("default_epsilon: at least two points required");
    // Mean distance over all unordered pairs. Unlike nearest-neighbor
    // spacing, this scale does not collapse when adaptive sampling clusters
    // points, so the kernel's flatness stays stable across a run.
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            total += (points.row(i) - points.row(j)).norm();
    const double mean_spacing = total / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
    if (!(mean_spacing > 0.0))
        throw std::invalid_argument("default_epsilon: coincident points have no spatial scale");
    return 1.0 / mean_spacing;
}

}  // namespace sbo
