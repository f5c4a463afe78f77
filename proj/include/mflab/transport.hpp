#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mflab/empirical.hpp"
#include "mflab/rng.hpp"

namespace mflab {

// Ground metric on atoms.  `euclidean` is |a-b|_2; `phase_sum` is the
// split form |dx| + |dxi| on phase space (even dim required).
enum class GroundCost { euclidean, phase_sum };

double ground_distance(const double* a, const double* b, int dim, GroundCost g);

struct PlanEntry {
    int i, j;
    double mass;
};

struct TransportPlan {
    EmpiricalMeasure row_measure, col_measure;
    std::vector<PlanEntry> entries;

    // Row/column sums must match the marginal weights within tol.
    void validate(double tol = 1e-9) const;

    static TransportPlan identity(const EmpiricalMeasure& mu);
    static TransportPlan from_permutation(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                          const std::vector<int>& perm);
    static TransportPlan product(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);
};

struct MkOptions {
    int atom_cap = 4096;
    GroundCost ground = GroundCost::euclidean;
    bool want_plan = true;
};

struct MkResult {
    double distance = 0.0;
    TransportPlan plan;
    // LP duals for the solved cost (alpha_i + beta_j <= c_ij with c in
    // ground^p units); feeds lip_from_plan_duals for p = 1.
    std::vector<double> row_duals, col_duals;
};

// Exact Monge-Kantorovich distance of exponent p in {1, 2}.  Equal-size
// uniform inputs are solved as an assignment problem; general weights go
// through the transportation network simplex.
MkResult mk_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p,
                     const MkOptions& opts = {});

// Closed-form squared-exponent-2 distance between Gaussians.
double mk2_gaussian(const GaussianMeasure& g1, const GaussianMeasure& g2);

// Cost of a (not necessarily optimal) plan: sum_ij pi_ij c(x_i, y_j)^p.
double coupled_cost(const TransportPlan& plan, double cost_exponent,
                    GroundCost ground = GroundCost::euclidean, double marginal_tol = 1e-9);

// ---- Kantorovich-Rubinstein dual certificates -----------------------------

struct LipschitzFn {
    std::string name;
    std::function<double(std::span<const double>)> eval;
};

double kr_dual_certificate(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                           const LipschitzFn& phi);

LipschitzFn lip_coordinate(int axis);
LipschitzFn lip_distance_to(std::vector<double> z0);
// max_r (u_r . w + b_r) with |u_r| = 1; pieces anchored at atoms of `anchors`.
LipschitzFn lip_random_max_affine(int dim, int pieces, CounterRng& rng,
                                  const EmpiricalMeasure* anchors = nullptr);
// Optimal 1-Lipschitz potential reconstructed from the LP duals of a p=1 plan.
LipschitzFn lip_from_plan_duals(const EmpiricalMeasure& nu, const std::vector<double>& col_duals,
                                GroundCost ground);

// ---- low-level exact solvers ----------------------------------------------

struct AssignmentResult {
    std::vector<int> row_to_col;
    std::vector<double> row_duals, col_duals;
    double total_cost = 0.0;
};

// Jonker-Volgenant shortest augmenting path algorithm, dense square matrix.
AssignmentResult solve_assignment(const std::vector<double>& cost, int n);

struct TransportationResult {
    std::vector<PlanEntry> entries;
    std::vector<double> row_duals, col_duals;  // alpha_i + beta_j <= c_ij
    double total_cost = 0.0;
};

// Primal network simplex on the dense bipartite transportation problem.
// supply/demand must balance to the same total (tolerance 1e-9).
TransportationResult solve_transportation(const std::vector<double>& cost, int n, int m,
                                          const std::vector<double>& supply,
                                          const std::vector<double>& demand);

}  // namespace mflab
