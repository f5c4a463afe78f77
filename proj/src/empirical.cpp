#include "mflab/empirical.hpp"

#include <cmath>
#include <stdexcept>

namespace mflab {

EmpiricalMeasure EmpiricalMeasure::uniform(int dim, std::vector<double> pts) {
    if (dim <= 0 || pts.empty() || pts.size() % dim != 0)
        throw std::invalid_argument("empirical measure: bad point data");
    const int n = static_cast<int>(pts.size()) / dim;
    EmpiricalMeasure m;
    m.dim = dim;
    m.points = std::move(pts);
    m.weights.assign(n, 1.0 / n);
    return m;
}

EmpiricalMeasure EmpiricalMeasure::weighted(int dim, std::vector<double> pts,
                                            std::vector<double> w) {
    if (dim <= 0 || pts.empty() || pts.size() % dim != 0)
        throw std::invalid_argument("empirical measure: bad point data");
    if (w.size() * dim != pts.size())
        throw std::invalid_argument("empirical measure: weight count mismatch");
    EmpiricalMeasure m;
    m.dim = dim;
    m.points = std::move(pts);
    m.weights = std::move(w);
    return m;
}

void EmpiricalMeasure::validate() const {
    if (count() < 1) throw std::invalid_argument("empirical measure: no atoms");
    double s = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("empirical measure: negative weight");
        s += w;
    }
    if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument("empirical measure: weights do not sum to 1");
    for (double x : points)
        if (!std::isfinite(x)) throw std::invalid_argument("empirical measure: non-finite atom");
}

bool EmpiricalMeasure::has_uniform_weights(double tol) const {
    const double w0 = 1.0 / count();
    for (double w : weights)
        if (std::abs(w - w0) > tol) return false;
    return true;
}

double EmpiricalMeasure::first_moment() const {
    if (dim % 2 != 0) throw std::logic_error("first_moment: needs phase-space measure (even dim)");
    const int d = dim / 2;
    double m1 = 0.0;
    for (int k = 0; k < count(); ++k) {
        const double* z = point(k);
        double nx = 0.0, nxi = 0.0;
        for (int i = 0; i < d; ++i) {
            nx += z[i] * z[i];
            nxi += z[d + i] * z[d + i];
        }
        m1 += weights[k] * (std::sqrt(nx) + std::sqrt(nxi));
    }
    return m1;
}

void EmpiricalMeasure::scale_points(double lambda) {
    for (double& x : points) x *= lambda;
}

void GaussianMeasure::validate() const {
    if (mean.size() == 0 || covariance.rows() != mean.size() ||
        covariance.cols() != mean.size())
        throw std::invalid_argument("gaussian measure: shape mismatch");
    const double scale = covariance.cwiseAbs().maxCoeff();
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("gaussian measure: covariance not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("gaussian measure: covariance not positive definite");
}

}  // namespace mflab
