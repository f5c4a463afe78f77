#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mflab/grid.hpp"
#include "mflab/potentials.hpp"

namespace mflab {

// Hard bound on tensor sizes (number of complex amplitudes).
inline constexpr std::size_t kAmplitudeCap = std::size_t{1} << 24;

// Wave function on grid^particles, row-major with particle 0 slowest.
// Normalization: h^N sum |psi|^2 = 1.
struct WaveFunction {
    SpatialGrid grid;
    int particles = 1;
    double scale = 1.0;  // hbar (lecture-2 scaling) or eps (semiclassical)
    double time = 0.0;
    std::vector<cplx> amp;

    std::size_t expected_size() const;
    double norm() const;
    void normalize();
    void validate(double norm_tol = 1e-10) const;
};

// Density operator stored as its coefficient matrix: mat = h^k * kernel,
// acting on coefficient vectors without further quadrature weights, so
// trace(mat) = 1 and operator/PSD properties are the plain matrix ones.
struct DensityOperator {
    SpatialGrid grid;
    int particles = 1;
    double scale = 1.0;
    Eigen::MatrixXcd mat;

    void validate(double herm_tol = 1e-10, double eig_tol = 1e-10, double trace_tol = 1e-8) const;
};

// ---- state builders --------------------------------------------------------

WaveFunction fourier_mode_state(const SpatialGrid& g, int mode, double scale);
WaveFunction uniform_state(const SpatialGrid& g, double scale);
// exp(-(x-q)^2 / (2 width^2)) e^{i p x / scale}, periodized and normalized.
WaveFunction gaussian_packet(const SpatialGrid& g, double q, double p, double width, double scale);
// Random combination of modes |n| <= max_mode, normalized.
WaveFunction random_smooth_state(const SpatialGrid& g, int max_mode, std::uint64_t seed,
                                 double scale);
WaveFunction tensor_power(const WaveFunction& single, int n);
WaveFunction symmetrize_bosonic(const WaveFunction& Psi);
bool is_bosonic_symmetric(const WaveFunction& Psi, double tol = 1e-12);

// ---- evolution -------------------------------------------------------------

struct EvolveOptions {
    int n_outputs = 2;
    bool require_bosonic = false;  // reject asymmetric N-particle input
};

// Strang-split TDH: exact Fourier kinetic half-steps around a pointwise
// potential step with the half-step-frozen mean field V * |psi|^2.
std::vector<WaveFunction> hartree_evolve(const WaveFunction& psi0, const InteractionPotential& V,
                                         double t_end, double dt, const EvolveOptions& opts = {});

// Strang-split N-body Schroedinger flow for the scaled Hamiltonian
// sum_j -(scale^2/2) Laplacian_j + (1/N) sum_{k<l} V(x_k - x_l).
std::vector<WaveFunction> nbody_schrodinger_evolve(const WaveFunction& Psi0,
                                                   const InteractionPotential& V, double t_end,
                                                   double dt, const EvolveOptions& opts = {});

double hartree_energy(const WaveFunction& psi, const InteractionPotential& V);
double nbody_energy(const WaveFunction& Psi, const InteractionPotential& V);

// ---- reduced densities and Klimontovich machinery ---------------------------

// k-particle marginal by partial trace over the trailing N-k axes.
DensityOperator reduce_density(const WaveFunction& Psi, int k = 1);
DensityOperator pure_density(const WaveFunction& psi);

// Coefficient matrix of |phi><phi| (phi a single-particle state).
Eigen::MatrixXcd projector(const WaveFunction& phi);

// <Psi| (1/N) sum_k J_k A |Psi> for a single-particle operator A
// (coefficient-matrix convention).
cplx klimontovich_expectation(const WaveFunction& Psi, const Eigen::MatrixXcd& A);

// <Psi| C[V, M_N, M_N] A |Psi> with the potential's finite Fourier sum.
cplx interaction_bracket_expectation(const WaveFunction& Psi, const Eigen::MatrixXcd& A,
                                     const InteractionPotential& V);

struct MfError {
    double op_norm = 0.0;  // ||R_{N:1} - |psi><psi|||
    double pickl = 0.0;    // 1 - <psi|R_{N:1}|psi>
};
MfError mf_error(const WaveFunction& Psi, const WaveFunction& psi);

// ---- checkpoints ("MFQ1" flat binary container) ----------------------------

void save_wavefunction(const std::string& path, const WaveFunction& wf);
WaveFunction load_wavefunction(const std::string& path);

}  // namespace mflab
