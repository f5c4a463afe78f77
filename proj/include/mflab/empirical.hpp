#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mflab {

// Weighted atoms in R^n.  For phase-space measures n = 2d and each point is
// stored as [x_0..x_{d-1}, xi_0..xi_{d-1}].
struct EmpiricalMeasure {
    int dim = 0;
    std::vector<double> points;   // count*dim, row-major
    std::vector<double> weights;  // count entries, nonnegative, sum 1

    int count() const { return dim > 0 ? static_cast<int>(points.size()) / dim : 0; }
    const double* point(int k) const { return points.data() + static_cast<std::size_t>(k) * dim; }
    double* point(int k) { return points.data() + static_cast<std::size_t>(k) * dim; }

    static EmpiricalMeasure uniform(int dim, std::vector<double> pts);
    static EmpiricalMeasure weighted(int dim, std::vector<double> pts, std::vector<double> w);

    // Throws unless weights sum to 1 (tol 1e-12), atoms are nonempty and finite.
    void validate() const;
    bool has_uniform_weights(double tol = 1e-12) const;

    // First absolute phase-space moment sum_k w_k (|x_k| + |xi_k|); requires even dim.
    double first_moment() const;

    void scale_points(double lambda);
};

struct GaussianMeasure {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;

    int dim() const { return static_cast<int>(mean.size()); }
    // Symmetry within 1e-12 and positive definiteness.
    void validate() const;
};

}  // namespace mflab
