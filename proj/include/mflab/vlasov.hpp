#pragma once

#include <string>
#include <vector>

#include "mflab/empirical.hpp"
#include "mflab/potentials.hpp"
#include "mflab/transport.hpp"

namespace mflab {

// Vlasov dynamics in Klimontovich (particle) form: the measure is a fixed
// set of weighted atoms transported along self-consistent characteristics.
struct VlasovParticleSolution {
    std::vector<EmpiricalMeasure> snapshots;
    std::vector<double> times;
    double dt = 0.0;
    std::string potential;
};

struct VlasovOptions {
    int n_outputs = 2;
    // Evaluate the mean-field force through the potential's Fourier modes
    // (O(M) per step, d = 1 periodic potentials only).  The direct O(M^2)
    // path matches the N-body force sum bitwise and is the default.
    bool fourier_force = false;
};

// -grad V_f(x) = -sum_k w_k grad V(x - y_k); |result| <= sup_grad.
std::vector<double> mean_field_force(const double* x, const EmpiricalMeasure& f,
                                     const InteractionPotential& V);

VlasovParticleSolution evolve_vlasov(const EmpiricalMeasure& f0, const InteractionPotential& V,
                                     double t_end, double dt, const VlasovOptions& opts = {});

double first_moment(const EmpiricalMeasure& f);

// Co-transported coupling cost
//   D(t) = sum pairs mass * (|x_i(t) - y_j(t)| + |xi_i(t) - eta_j(t)|),
// with the two atom families following their own self-consistent flows.
struct CoupledGrowthResult {
    std::vector<double> times;
    std::vector<double> d_values;
    std::vector<EmpiricalMeasure> f_snapshots, g_snapshots;
};

CoupledGrowthResult coupled_growth(const EmpiricalMeasure& f0, const EmpiricalMeasure& g0,
                                   const TransportPlan& plan0, const InteractionPotential& V,
                                   double t_end, double dt, const VlasovOptions& opts = {});

}  // namespace mflab
