#include "mflab/vlasov.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mflab/fft.hpp"

namespace mflab {

namespace {

int phase_dim(const EmpiricalMeasure& f) {
    if (f.dim % 2 != 0) throw std::invalid_argument("vlasov: measure must live on phase space");
    return f.dim / 2;
}

// Self-consistent forces at every atom, direct pair sum.  For uniform
// weights this reproduces the N-body force loop term by term (the k = j
// term contributes an exact zero since grad V(0) = 0).
void direct_forces(const std::vector<double>& x, const std::vector<double>& w, int d,
                   const InteractionPotential& V, std::vector<double>& force) {
    const int n = static_cast<int>(w.size());
    force.assign(x.size(), 0.0);
    if (V.family() == InteractionPotential::Family::zero) return;
    std::vector<double> diff(d), g(d);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            for (int i = 0; i < d; ++i)
                diff[i] = x[static_cast<std::size_t>(j) * d + i] -
                          x[static_cast<std::size_t>(k) * d + i];
            V.gradient(diff.data(), g.data());
            for (int i = 0; i < d; ++i) force[static_cast<std::size_t>(j) * d + i] -= w[k] * g[i];
        }
    }
}

// O(M) force through the potential's finite Fourier series, d = 1.
void fourier_forces(const std::vector<double>& x, const std::vector<double>& w,
                    const InteractionPotential& V, std::vector<double>& force) {
    const int n = static_cast<int>(w.size());
    force.assign(x.size(), 0.0);
    for (const auto& [mode, coeff] : V.fourier()) {
        const double omega = V.fourier_frequency(mode);
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) s += w[k] * std::polar(1.0, -omega * x[k]);
        for (int j = 0; j < n; ++j) {
            const cplx val = cplx(0.0, 1.0) * omega * coeff * std::polar(1.0, omega * x[j]) * s;
            force[j] -= val.real();
        }
    }
}

struct AtomCloud {
    int d = 0;
    std::vector<double> x, xi, w;

    static AtomCloud from_measure(const EmpiricalMeasure& f) {
        AtomCloud c;
        c.d = phase_dim(f);
        const int n = f.count();
        c.x.resize(static_cast<std::size_t>(n) * c.d);
        c.xi.resize(static_cast<std::size_t>(n) * c.d);
        c.w = f.weights;
        for (int k = 0; k < n; ++k) {
            const double* z = f.point(k);
            for (int i = 0; i < c.d; ++i) {
                c.x[static_cast<std::size_t>(k) * c.d + i] = z[i];
                c.xi[static_cast<std::size_t>(k) * c.d + i] = z[c.d + i];
            }
        }
        return c;
    }

    EmpiricalMeasure to_measure() const {
        const int n = static_cast<int>(w.size());
        std::vector<double> pts(static_cast<std::size_t>(n) * 2 * d);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < d; ++i) {
                pts[static_cast<std::size_t>(k) * 2 * d + i] = x[static_cast<std::size_t>(k) * d + i];
                pts[static_cast<std::size_t>(k) * 2 * d + d + i] =
                    xi[static_cast<std::size_t>(k) * d + i];
            }
        return EmpiricalMeasure::weighted(2 * d, std::move(pts), w);
    }

    void forces(const InteractionPotential& V, bool fourier, std::vector<double>& f) const {
        if (fourier)
            fourier_forces(x, w, V, f);
        else
            direct_forces(x, w, d, V, f);
    }

    void check_finite() const {
        for (double v : x)
            if (!std::isfinite(v)) throw std::runtime_error("vlasov: non-finite state");
        for (double v : xi)
            if (!std::isfinite(v)) throw std::runtime_error("vlasov: non-finite state");
    }
};

std::vector<long> output_steps(long steps, int n_outputs) {
    std::vector<long> out;
    for (int k = 1; k < n_outputs; ++k) {
        const long os = std::lround(static_cast<double>(k) * steps / (n_outputs - 1));
        if (os > 0 && (out.empty() || os != out.back())) out.push_back(os);
    }
    return out;
}

}  // namespace

std::vector<double> mean_field_force(const double* x, const EmpiricalMeasure& f,
                                     const InteractionPotential& V) {
    f.validate();
    const int d = phase_dim(f);
    if (V.dim() != d) throw std::invalid_argument("mean_field_force: dimension mismatch");
    std::vector<double> force(d, 0.0), diff(d), g(d);
    for (int k = 0; k < f.count(); ++k) {
        const double* y = f.point(k);
        for (int i = 0; i < d; ++i) diff[i] = x[i] - y[i];
        V.gradient(diff.data(), g.data());
        for (int i = 0; i < d; ++i) force[i] -= f.weights[k] * g[i];
    }
    return force;
}

double first_moment(const EmpiricalMeasure& f) { return f.first_moment(); }

VlasovParticleSolution evolve_vlasov(const EmpiricalMeasure& f0, const InteractionPotential& V,
                                     double t_end, double dt, const VlasovOptions& opts) {
    f0.validate();
    const int d = phase_dim(f0);
    if (V.dim() != d) throw std::invalid_argument("evolve_vlasov: dimension mismatch");
    if (dt <= 0.0) throw std::invalid_argument("evolve_vlasov: dt must be positive");
    if (opts.fourier_force && (d != 1 || V.fourier().empty()))
        throw std::invalid_argument("evolve_vlasov: fourier force needs a 1-d periodic potential");

    const long steps = std::lround(t_end / dt);
    const double dt_eff = steps > 0 ? t_end / static_cast<double>(steps) : dt;
    const int n_outputs = std::max(2, opts.n_outputs);
    const auto outs = output_steps(steps, n_outputs);

    VlasovParticleSolution sol;
    sol.dt = dt_eff;
    sol.potential = V.name();
    AtomCloud c = AtomCloud::from_measure(f0);
    sol.snapshots.push_back(f0);
    sol.times.push_back(0.0);

    std::vector<double> f;
    c.forces(V, opts.fourier_force, f);
    std::size_t next_out = 0;
    for (long step = 1; step <= steps; ++step) {
        const double half = 0.5 * dt_eff;
        for (std::size_t i = 0; i < c.xi.size(); ++i) c.xi[i] += half * f[i];
        for (std::size_t i = 0; i < c.x.size(); ++i) c.x[i] += dt_eff * c.xi[i];
        c.forces(V, opts.fourier_force, f);
        for (std::size_t i = 0; i < c.xi.size(); ++i) c.xi[i] += half * f[i];
        c.check_finite();
        if (next_out < outs.size() && step == outs[next_out]) {
            sol.snapshots.push_back(c.to_measure());
            sol.times.push_back(static_cast<double>(step) * dt_eff);
            ++next_out;
        }
    }
    return sol;
}

CoupledGrowthResult coupled_growth(const EmpiricalMeasure& f0, const EmpiricalMeasure& g0,
                                   const TransportPlan& plan0, const InteractionPotential& V,
                                   double t_end, double dt, const VlasovOptions& opts) {
    plan0.validate();
    if (plan0.row_measure.count() != f0.count() || plan0.col_measure.count() != g0.count())
        throw std::invalid_argument("coupled_growth: plan does not couple the given measures");
    const int d = phase_dim(f0);
    if (phase_dim(g0) != d) throw std::invalid_argument("coupled_growth: dimension mismatch");
    if (dt <= 0.0) throw std::invalid_argument("coupled_growth: dt must be positive");

    const long steps = std::lround(t_end / dt);
    const double dt_eff = steps > 0 ? t_end / static_cast<double>(steps) : dt;
    const int n_outputs = std::max(2, opts.n_outputs);
    const auto outs = output_steps(steps, n_outputs);

    AtomCloud cf = AtomCloud::from_measure(f0);
    AtomCloud cg = AtomCloud::from_measure(g0);

    auto d_value = [&]() {
        double total = 0.0;
        for (const auto& e : plan0.entries) {
            double dx = 0.0, dxi = 0.0;
            for (int i = 0; i < d; ++i) {
                const double ddx = cf.x[static_cast<std::size_t>(e.i) * d + i] -
                                   cg.x[static_cast<std::size_t>(e.j) * d + i];
                dx += ddx * ddx;
                const double ddp = cf.xi[static_cast<std::size_t>(e.i) * d + i] -
                                   cg.xi[static_cast<std::size_t>(e.j) * d + i];
                dxi += ddp * ddp;
            }
            total += e.mass * (std::sqrt(dx) + std::sqrt(dxi));
        }
        return total;
    };

    CoupledGrowthResult res;
    res.times.push_back(0.0);
    res.d_values.push_back(d_value());
    res.f_snapshots.push_back(f0);
    res.g_snapshots.push_back(g0);

    std::vector<double> ff, fg;
    cf.forces(V, opts.fourier_force, ff);
    cg.forces(V, opts.fourier_force, fg);
    std::size_t next_out = 0;
    for (long step = 1; step <= steps; ++step) {
        const double half = 0.5 * dt_eff;
        for (std::size_t i = 0; i < cf.xi.size(); ++i) cf.xi[i] += half * ff[i];
        for (std::size_t i = 0; i < cg.xi.size(); ++i) cg.xi[i] += half * fg[i];
        for (std::size_t i = 0; i < cf.x.size(); ++i) cf.x[i] += dt_eff * cf.xi[i];
        for (std::size_t i = 0; i < cg.x.size(); ++i) cg.x[i] += dt_eff * cg.xi[i];
        cf.forces(V, opts.fourier_force, ff);
        cg.forces(V, opts.fourier_force, fg);
        for (std::size_t i = 0; i < cf.xi.size(); ++i) cf.xi[i] += half * ff[i];
        for (std::size_t i = 0; i < cg.xi.size(); ++i) cg.xi[i] += half * fg[i];
        cf.check_finite();
        cg.check_finite();
        if (next_out < outs.size() && step == outs[next_out]) {
            res.times.push_back(static_cast<double>(step) * dt_eff);
            res.d_values.push_back(d_value());
            res.f_snapshots.push_back(cf.to_measure());
            res.g_snapshots.push_back(cg.to_measure());
            ++next_out;
        }
    }
    return res;
}

}  // namespace mflab
