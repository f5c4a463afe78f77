#include "mflab/transport.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace mflab {

double ground_distance(const double* a, const double* b, int dim, GroundCost g) {
    if (g == GroundCost::euclidean) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    if (dim % 2 != 0) throw std::invalid_argument("phase_sum ground cost needs even dimension");
    const int d2 = dim / 2;
    double sx = 0.0, sxi = 0.0;
    for (int i = 0; i < d2; ++i) {
        const double dx = a[i] - b[i];
        sx += dx * dx;
        const double dxi = a[d2 + i] - b[d2 + i];
        sxi += dxi * dxi;
    }
    return std::sqrt(sx) + std::sqrt(sxi);
}

void TransportPlan::validate(double tol) const {
    std::vector<double> rs(row_measure.count(), 0.0), cs(col_measure.count(), 0.0);
    for (const auto& e : entries) {
        if (e.i < 0 || e.i >= row_measure.count() || e.j < 0 || e.j >= col_measure.count())
            throw std::invalid_argument("transport plan: entry out of range");
        if (e.mass < -tol) throw std::invalid_argument("transport plan: negative mass");
        rs[e.i] += e.mass;
        cs[e.j] += e.mass;
    }
    for (int i = 0; i < row_measure.count(); ++i)
        if (std::abs(rs[i] - row_measure.weights[i]) > tol)
            throw std::invalid_argument("transport plan: row marginal violated");
    for (int j = 0; j < col_measure.count(); ++j)
        if (std::abs(cs[j] - col_measure.weights[j]) > tol)
            throw std::invalid_argument("transport plan: column marginal violated");
}

TransportPlan TransportPlan::identity(const EmpiricalMeasure& mu) {
    TransportPlan p;
    p.row_measure = mu;
    p.col_measure = mu;
    for (int i = 0; i < mu.count(); ++i) p.entries.push_back({i, i, mu.weights[i]});
    return p;
}

TransportPlan TransportPlan::from_permutation(const EmpiricalMeasure& mu,
                                              const EmpiricalMeasure& nu,
                                              const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != mu.count() || mu.count() != nu.count())
        throw std::invalid_argument("transport plan: permutation size mismatch");
    TransportPlan p;
    p.row_measure = mu;
    p.col_measure = nu;
    for (int i = 0; i < mu.count(); ++i) p.entries.push_back({i, perm[i], mu.weights[i]});
    return p;
}

TransportPlan TransportPlan::product(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    TransportPlan p;
    p.row_measure = mu;
    p.col_measure = nu;
    for (int i = 0; i < mu.count(); ++i)
        for (int j = 0; j < nu.count(); ++j)
            p.entries.push_back({i, j, mu.weights[i] * nu.weights[j]});
    return p;
}

namespace {

std::vector<double> cost_matrix(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p,
                                GroundCost ground) {
    const int n = mu.count(), m = nu.count();
    std::vector<double> c(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        const double* a = mu.point(i);
        for (int j = 0; j < m; ++j) {
            const double g = ground_distance(a, nu.point(j), mu.dim, ground);
            c[static_cast<std::size_t>(i) * m + j] = (p == 1.0) ? g : g * g;
        }
    }
    return c;
}

}  // namespace

MkResult mk_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p,
                     const MkOptions& opts) {
    mu.validate();
    nu.validate();
    if (mu.dim != nu.dim) throw std::invalid_argument("mk_distance: dimension mismatch");
    if (p != 1.0 && p != 2.0) throw std::invalid_argument("mk_distance: p must be 1 or 2");
    if (opts.ground == GroundCost::phase_sum && p != 1.0)
        throw std::invalid_argument("mk_distance: phase_sum cost is exponent-1 only");
    if (mu.count() > opts.atom_cap || nu.count() > opts.atom_cap)
        throw std::invalid_argument("mk_distance: atom count over cap");

    const std::vector<double> c = cost_matrix(mu, nu, p, opts.ground);
    MkResult res;
    res.plan.row_measure = mu;
    res.plan.col_measure = nu;

    // Equal-size uniform inputs go through the assignment solver (the hot
    // path).  Squared costs can trigger long augmenting chains in
    // Jonker-Volgenant on large instances, so those are routed through the
    // network simplex instead; both solvers are exact.
    const bool assignment_ok = mu.count() == nu.count() && mu.has_uniform_weights() &&
                               nu.has_uniform_weights() && (p == 1.0 || mu.count() <= 512);
    if (assignment_ok) {
        const int n = mu.count();
        const AssignmentResult ar = solve_assignment(c, n);
        const double w = 1.0 / n;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            res.plan.entries.push_back({i, ar.row_to_col[i], w});
            total += w * c[static_cast<std::size_t>(i) * n + ar.row_to_col[i]];
        }
        res.distance = (p == 1.0) ? total : std::sqrt(total);
        res.row_duals = ar.row_duals;
        res.col_duals = ar.col_duals;
    } else {
        const TransportationResult tr =
            solve_transportation(c, mu.count(), nu.count(), mu.weights, nu.weights);
        res.plan.entries = tr.entries;
        res.distance = (p == 1.0) ? tr.total_cost : std::sqrt(std::max(0.0, tr.total_cost));
        res.row_duals = tr.row_duals;
        res.col_duals = tr.col_duals;
    }
    if (!opts.want_plan) res.plan.entries.shrink_to_fit();
    return res;
}

double mk2_gaussian(const GaussianMeasure& g1, const GaussianMeasure& g2) {
    g1.validate();
    g2.validate();
    if (g1.dim() != g2.dim()) throw std::invalid_argument("mk2_gaussian: dimension mismatch");
    auto check_condition = [](const Eigen::MatrixXd& a) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
        const double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
        if (lmin <= 0.0 || lmax / lmin > 1e12)
            throw std::invalid_argument("mk2_gaussian: covariance too ill-conditioned");
    };
    check_condition(g1.covariance);
    check_condition(g2.covariance);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1(g1.covariance);
    const Eigen::MatrixXd sqrt1 = es1.operatorSqrt();
    Eigen::MatrixXd inner = sqrt1 * g2.covariance * sqrt1;
    inner = 0.5 * (inner + inner.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(inner);

    double cross = 0.0;
    for (int i = 0; i < inner.rows(); ++i) cross += std::sqrt(std::max(0.0, es2.eigenvalues()[i]));
    const double d2 = (g1.mean - g2.mean).squaredNorm() + g1.covariance.trace() +
                      g2.covariance.trace() - 2.0 * cross;
    return std::sqrt(std::max(0.0, d2));
}

double coupled_cost(const TransportPlan& plan, double cost_exponent, GroundCost ground,
                    double marginal_tol) {
    plan.validate(marginal_tol);
    double total = 0.0;
    for (const auto& e : plan.entries) {
        const double g = ground_distance(plan.row_measure.point(e.i), plan.col_measure.point(e.j),
                                         plan.row_measure.dim, ground);
        total += e.mass * std::pow(g, cost_exponent);
    }
    return total;
}

double kr_dual_certificate(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                           const LipschitzFn& phi) {
    double s = 0.0;
    for (int i = 0; i < mu.count(); ++i)
        s += mu.weights[i] * phi.eval({mu.point(i), static_cast<std::size_t>(mu.dim)});
    for (int j = 0; j < nu.count(); ++j)
        s -= nu.weights[j] * phi.eval({nu.point(j), static_cast<std::size_t>(nu.dim)});
    if (!std::isfinite(s)) throw std::runtime_error("kr_dual_certificate: non-finite evaluation");
    return std::abs(s);
}

LipschitzFn lip_coordinate(int axis) {
    LipschitzFn f;
    f.name = "coordinate_" + std::to_string(axis);
    f.eval = [axis](std::span<const double> z) { return z[axis]; };
    return f;
}

LipschitzFn lip_distance_to(std::vector<double> z0) {
    LipschitzFn f;
    f.name = "distance_to_point";
    f.eval = [z0 = std::move(z0)](std::span<const double> z) {
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double d = z[i] - z0[i];
            s += d * d;
        }
        return std::sqrt(s);
    };
    return f;
}

LipschitzFn lip_random_max_affine(int dim, int pieces, CounterRng& rng,
                                  const EmpiricalMeasure* anchors) {
    std::vector<double> dirs(static_cast<std::size_t>(pieces) * dim);
    std::vector<double> offsets(pieces, 0.0);
    for (int r = 0; r < pieces; ++r) {
        double norm = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double g = rng.normal();
            dirs[static_cast<std::size_t>(r) * dim + i] = g;
            norm += g * g;
        }
        norm = std::sqrt(std::max(norm, 1e-300));
        for (int i = 0; i < dim; ++i) dirs[static_cast<std::size_t>(r) * dim + i] /= norm;
        if (anchors && anchors->count() > 0) {
            // Anchor the plane at an atom so pieces stay in the data range.
            const int k = static_cast<int>(rng.next_u64() % anchors->count());
            const double* z = anchors->point(k);
            double dot = 0.0;
            for (int i = 0; i < dim; ++i) dot += dirs[static_cast<std::size_t>(r) * dim + i] * z[i];
            offsets[r] = -dot;
        } else {
            offsets[r] = rng.uniform(-1.0, 1.0);
        }
    }
    LipschitzFn f;
    f.name = "random_max_affine";
    f.eval = [dim, pieces, dirs = std::move(dirs), offsets = std::move(offsets)](
                 std::span<const double> z) {
        double best = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < pieces; ++r) {
            double v = offsets[r];
            for (int i = 0; i < dim; ++i) v += dirs[static_cast<std::size_t>(r) * dim + i] * z[i];
            best = std::max(best, v);
        }
        return best;
    };
    return f;
}

LipschitzFn lip_from_plan_duals(const EmpiricalMeasure& nu, const std::vector<double>& col_duals,
                                GroundCost ground) {
    if (static_cast<int>(col_duals.size()) != nu.count())
        throw std::invalid_argument("lip_from_plan_duals: dual size mismatch");
    LipschitzFn f;
    f.name = "lp_dual_potential";
    f.eval = [nu, col_duals, ground](std::span<const double> z) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < nu.count(); ++j) {
            const double v = ground_distance(z.data(), nu.point(j), nu.dim, ground) - col_duals[j];
            best = std::min(best, v);
        }
        return best;
    };
    return f;
}

}  // namespace mflab
