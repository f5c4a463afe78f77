#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mflab/empirical.hpp"
#include "mflab/potentials.hpp"

namespace mflab {

// N-tuple of positions and momenta in d dimensions, row-major N x d.
struct ParticleState {
    int dim = 0;
    std::vector<double> positions;
    std::vector<double> momenta;
    double time = 0.0;

    int count() const { return dim > 0 ? static_cast<int>(positions.size()) / dim : 0; }
    void validate() const;

    EmpiricalMeasure empirical() const;  // atoms (x_k, xi_k) with weights 1/N
    static ParticleState from_empirical(const EmpiricalMeasure& mu, double time = 0.0);
};

struct Trajectory {
    std::vector<ParticleState> snapshots;  // strictly increasing times
    double dt = 0.0;
    std::string scheme = "velocity_verlet";
};

// dX = Xi, dXi_j = -(1/N) sum_{k != j} grad V(x_j - x_k).
void nbody_rhs(const ParticleState& state, const InteractionPotential& V, std::vector<double>& dX,
               std::vector<double>& dXi);

// Velocity Verlet (kick-drift-kick); snapshots at n_outputs uniform times
// including t = 0 and t = t_end.
Trajectory integrate_flow(const ParticleState& state0, const InteractionPotential& V, double t_end,
                          double dt, int n_outputs = 2);

// sum_j |xi_j|^2/2 + (1/N) sum_{j<k} V(x_j - x_k).
double total_energy(const ParticleState& state, const InteractionPotential& V);

}  // namespace mflab
