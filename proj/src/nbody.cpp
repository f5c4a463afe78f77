#include "mflab/nbody.hpp"

#include <cmath>
#include <stdexcept>

namespace mflab {

void ParticleState::validate() const {
    if (dim <= 0 || positions.empty() || positions.size() % dim != 0 ||
        momenta.size() != positions.size())
        throw std::invalid_argument("particle state: bad shape");
    for (double v : positions)
        if (!std::isfinite(v)) throw std::runtime_error("particle state: non-finite position");
    for (double v : momenta)
        if (!std::isfinite(v)) throw std::runtime_error("particle state: non-finite momentum");
}

EmpiricalMeasure ParticleState::empirical() const {
    const int n = count();
    std::vector<double> pts(static_cast<std::size_t>(n) * 2 * dim);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < dim; ++i) {
            pts[static_cast<std::size_t>(k) * 2 * dim + i] =
                positions[static_cast<std::size_t>(k) * dim + i];
            pts[static_cast<std::size_t>(k) * 2 * dim + dim + i] =
                momenta[static_cast<std::size_t>(k) * dim + i];
        }
    }
    return EmpiricalMeasure::uniform(2 * dim, std::move(pts));
}

ParticleState ParticleState::from_empirical(const EmpiricalMeasure& mu, double time) {
    if (mu.dim % 2 != 0) throw std::invalid_argument("from_empirical: needs phase-space measure");
    const int d = mu.dim / 2, n = mu.count();
    ParticleState s;
    s.dim = d;
    s.time = time;
    s.positions.resize(static_cast<std::size_t>(n) * d);
    s.momenta.resize(static_cast<std::size_t>(n) * d);
    for (int k = 0; k < n; ++k) {
        const double* z = mu.point(k);
        for (int i = 0; i < d; ++i) {
            s.positions[static_cast<std::size_t>(k) * d + i] = z[i];
            s.momenta[static_cast<std::size_t>(k) * d + i] = z[d + i];
        }
    }
    return s;
}

namespace {

// forces[j] = -(1/N) sum_{k != j} grad V(x_j - x_k).
void pair_forces(const std::vector<double>& x, int n, int d, const InteractionPotential& V,
                 std::vector<double>& f) {
    f.assign(x.size(), 0.0);
    if (V.family() == InteractionPotential::Family::zero) return;
    const double w = 1.0 / n;
    std::vector<double> diff(d), g(d);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            for (int i = 0; i < d; ++i)
                diff[i] = x[static_cast<std::size_t>(j) * d + i] -
                          x[static_cast<std::size_t>(k) * d + i];
            V.gradient(diff.data(), g.data());
            for (int i = 0; i < d; ++i) f[static_cast<std::size_t>(j) * d + i] -= w * g[i];
        }
    }
}

}  // namespace

void nbody_rhs(const ParticleState& state, const InteractionPotential& V, std::vector<double>& dX,
               std::vector<double>& dXi) {
    state.validate();
    if (V.dim() != state.dim) throw std::invalid_argument("nbody_rhs: dimension mismatch");
    dX = state.momenta;
    pair_forces(state.positions, state.count(), state.dim, V, dXi);
}

Trajectory integrate_flow(const ParticleState& state0, const InteractionPotential& V, double t_end,
                          double dt, int n_outputs) {
    state0.validate();
    if (V.dim() != state0.dim) throw std::invalid_argument("integrate_flow: dimension mismatch");
    if (dt <= 0.0) throw std::invalid_argument("integrate_flow: dt must be positive");
    if (t_end < 0.0) throw std::invalid_argument("integrate_flow: t_end must be nonnegative");
    if (n_outputs < 2) n_outputs = 2;

    const int n = state0.count(), d = state0.dim;
    const long steps = std::lround(t_end / dt);
    const double dt_eff = steps > 0 ? t_end / static_cast<double>(steps) : dt;

    Trajectory traj;
    traj.dt = dt_eff;
    traj.snapshots.reserve(n_outputs);

    ParticleState s = state0;
    traj.snapshots.push_back(s);

    std::vector<long> output_steps;
    for (int k = 1; k < n_outputs; ++k) {
        const long os = std::lround(static_cast<double>(k) * steps / (n_outputs - 1));
        if (os > 0 && (output_steps.empty() || os != output_steps.back()))
            output_steps.push_back(os);
    }

    std::vector<double> f;
    pair_forces(s.positions, n, d, V, f);
    std::size_t next_out = 0;
    for (long step = 1; step <= steps; ++step) {
        const double half = 0.5 * dt_eff;
        for (std::size_t i = 0; i < s.momenta.size(); ++i) s.momenta[i] += half * f[i];
        for (std::size_t i = 0; i < s.positions.size(); ++i) s.positions[i] += dt_eff * s.momenta[i];
        pair_forces(s.positions, n, d, V, f);
        for (std::size_t i = 0; i < s.momenta.size(); ++i) s.momenta[i] += half * f[i];
        s.time = state0.time + static_cast<double>(step) * dt_eff;
        for (double v : s.positions)
            if (!std::isfinite(v)) throw std::runtime_error("integrate_flow: state blew up");

        if (next_out < output_steps.size() && step == output_steps[next_out]) {
            traj.snapshots.push_back(s);
            ++next_out;
        }
    }
    return traj;
}

double total_energy(const ParticleState& state, const InteractionPotential& V) {
    state.validate();
    const int n = state.count(), d = state.dim;
    double kin = 0.0;
    for (double p : state.momenta) kin += p * p;
    kin *= 0.5;
    double pot = 0.0;
    if (V.family() != InteractionPotential::Family::zero) {
        std::vector<double> diff(d);
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                for (int i = 0; i < d; ++i)
                    diff[i] = state.positions[static_cast<std::size_t>(j) * d + i] -
                              state.positions[static_cast<std::size_t>(k) * d + i];
                pot += V.value(diff.data());
            }
        pot /= n;
    }
    return kin + pot;
}

}  // namespace mflab
