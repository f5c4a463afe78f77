#include "mflab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "mflab/rng.hpp"

namespace mflab {

namespace {

std::size_t ipow(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// h^N-weighted inner product <a|b>.
cplx inner(const WaveFunction& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b[i];
    return s * std::pow(a.grid.spacing(), a.particles);
}

// out[pre, i, post] = sum_j A(i, j) in[pre, j, post] along the given axis.
void apply_axis(const std::vector<cplx>& in, std::vector<cplx>& out, const Eigen::MatrixXcd& A,
                int M, int particles, int axis, bool accumulate) {
    const std::size_t total = in.size();
    std::size_t stride = 1;
    for (int a = particles - 1; a > axis; --a) stride *= M;
    const std::size_t block = stride * M;
    if (!accumulate) std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    for (std::size_t outer = 0; outer < total; outer += block) {
        for (std::size_t innerv = 0; innerv < stride; ++innerv) {
            const cplx* src = in.data() + outer + innerv;
            cplx* dst = out.data() + outer + innerv;
            for (int i = 0; i < M; ++i) {
                cplx acc = 0.0;
                for (int j = 0; j < M; ++j) acc += A(i, j) * src[static_cast<std::size_t>(j) * stride];
                dst[static_cast<std::size_t>(i) * stride] += acc;
            }
        }
    }
}

// out[pre, i, post] = diag[i] * in[pre, i, post].
void apply_axis_diagonal(const std::vector<cplx>& in, std::vector<cplx>& out,
                         const std::vector<cplx>& diag, int M, int particles, int axis,
                         bool accumulate) {
    const std::size_t total = in.size();
    std::size_t stride = 1;
    for (int a = particles - 1; a > axis; --a) stride *= M;
    const std::size_t block = stride * M;
    if (!accumulate) std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    for (std::size_t outer = 0; outer < total; outer += block)
        for (int i = 0; i < M; ++i) {
            const cplx d = diag[i];
            const std::size_t base = outer + static_cast<std::size_t>(i) * stride;
            for (std::size_t innerv = 0; innerv < stride; ++innerv)
                out[base + innerv] += d * in[base + innerv];
        }
}

// (1/N) sum_axes J_axis(A) applied to Psi.
std::vector<cplx> apply_mean_operator(const WaveFunction& Psi, const Eigen::MatrixXcd& A) {
    std::vector<cplx> out(Psi.amp.size(), cplx(0.0, 0.0));
    for (int axis = 0; axis < Psi.particles; ++axis)
        apply_axis(Psi.amp, out, A, Psi.grid.points, Psi.particles, axis, true);
    const double inv = 1.0 / Psi.particles;
    for (auto& v : out) v *= inv;
    return out;
}

std::vector<cplx> apply_mean_diagonal(const WaveFunction& Psi, const std::vector<cplx>& diag) {
    std::vector<cplx> out(Psi.amp.size(), cplx(0.0, 0.0));
    for (int axis = 0; axis < Psi.particles; ++axis)
        apply_axis_diagonal(Psi.amp, out, diag, Psi.grid.points, Psi.particles, axis, true);
    const double inv = 1.0 / Psi.particles;
    for (auto& v : out) v *= inv;
    return out;
}

std::vector<long> output_steps(long steps, int n_outputs) {
    std::vector<long> out;
    for (int k = 1; k < n_outputs; ++k) {
        const long os = std::lround(static_cast<double>(k) * steps / (n_outputs - 1));
        if (os > 0 && (out.empty() || os != out.back())) out.push_back(os);
    }
    return out;
}

void require_periodic(const InteractionPotential& V) {
    if (V.family() != InteractionPotential::Family::zero &&
        (!V.periodic() || V.fourier().empty()))
        throw std::invalid_argument("quantum solver: potential must be periodic with Fourier data");
}

void check_grid_potential(const SpatialGrid& g, const InteractionPotential& V) {
    require_periodic(V);
    if (V.family() != InteractionPotential::Family::zero &&
        std::abs(V.period() - g.length) > 1e-12 * g.length)
        throw std::invalid_argument("quantum solver: potential period must match the box length");
}

}  // namespace

std::size_t WaveFunction::expected_size() const {
    return ipow(static_cast<std::size_t>(grid.points), particles);
}

double WaveFunction::norm() const {
    double s = 0.0;
    for (const auto& v : amp) s += std::norm(v);
    return std::sqrt(s * std::pow(grid.spacing(), particles));
}

void WaveFunction::normalize() {
    const double n = norm();
    if (n <= 0.0) throw std::runtime_error("wave function: zero norm");
    for (auto& v : amp) v /= n;
}

void WaveFunction::validate(double norm_tol) const {
    grid.validate();
    if (particles < 1) throw std::invalid_argument("wave function: particles must be >= 1");
    if (amp.size() != expected_size())
        throw std::invalid_argument("wave function: amplitude size mismatch");
    if (amp.size() > kAmplitudeCap) throw std::invalid_argument("wave function: over amplitude cap");
    if (scale <= 0.0) throw std::invalid_argument("wave function: scale must be positive");
    if (std::abs(norm() - 1.0) > norm_tol)
        throw std::runtime_error("wave function: normalization violated");
}

void DensityOperator::validate(double herm_tol, double eig_tol, double trace_tol) const {
    grid.validate();
    if (mat.rows() != mat.cols()) throw std::invalid_argument("density operator: not square");
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        throw std::runtime_error("density operator: not Hermitian");
    if (std::abs(mat.trace().real() - 1.0) > trace_tol || std::abs(mat.trace().imag()) > trace_tol)
        throw std::runtime_error("density operator: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (mat + mat.adjoint()));
    if (es.eigenvalues().minCoeff() < -eig_tol)
        throw std::runtime_error("density operator: negative eigenvalue");
}

WaveFunction fourier_mode_state(const SpatialGrid& g, int mode, double scale) {
    g.validate();
    WaveFunction wf;
    wf.grid = g;
    wf.scale = scale;
    wf.amp.resize(g.points);
    const double amp0 = 1.0 / std::sqrt(g.length);
    const double k = kTwoPi * mode / g.length;
    for (int i = 0; i < g.points; ++i) wf.amp[i] = amp0 * std::polar(1.0, k * g.x(i));
    return wf;
}

WaveFunction uniform_state(const SpatialGrid& g, double scale) {
    return fourier_mode_state(g, 0, scale);
}

WaveFunction gaussian_packet(const SpatialGrid& g, double q, double p, double width, double scale) {
    g.validate();
    if (width <= 0.0) throw std::invalid_argument("gaussian_packet: width must be positive");
    WaveFunction wf;
    wf.grid = g;
    wf.scale = scale;
    wf.amp.resize(g.points);
    for (int i = 0; i < g.points; ++i) {
        cplx v = 0.0;
        for (int img = -2; img <= 2; ++img) {
            const double x = g.x(i) + img * g.length;
            v += std::exp(-(x - q) * (x - q) / (2.0 * width * width)) *
                 std::polar(1.0, p * x / scale);
        }
        wf.amp[i] = v;
    }
    wf.normalize();
    return wf;
}

WaveFunction random_smooth_state(const SpatialGrid& g, int max_mode, std::uint64_t seed,
                                 double scale) {
    g.validate();
    CounterRng rng(seed, 0xa11ce, 0);
    WaveFunction wf;
    wf.grid = g;
    wf.scale = scale;
    wf.amp.assign(g.points, cplx(0.0, 0.0));
    for (int n = -max_mode; n <= max_mode; ++n) {
        const cplx c(rng.normal(), rng.normal());
        const double k = kTwoPi * n / g.length;
        for (int i = 0; i < g.points; ++i) wf.amp[i] += c * std::polar(1.0, k * g.x(i));
    }
    wf.normalize();
    return wf;
}

WaveFunction tensor_power(const WaveFunction& single, int n) {
    single.validate();
    if (single.particles != 1) throw std::invalid_argument("tensor_power: needs a 1-particle state");
    if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
    const std::size_t M = single.amp.size();
    if (ipow(M, n) > kAmplitudeCap) throw std::invalid_argument("tensor_power: over amplitude cap");
    WaveFunction out;
    out.grid = single.grid;
    out.particles = n;
    out.scale = single.scale;
    out.time = single.time;
    out.amp.assign(ipow(M, n), cplx(1.0, 0.0));
    for (int axis = 0; axis < n; ++axis) {
        std::size_t stride = ipow(M, n - 1 - axis);
        for (std::size_t idx = 0; idx < out.amp.size(); ++idx)
            out.amp[idx] *= single.amp[(idx / stride) % M];
    }
    return out;
}

namespace {

void decompose_index(std::size_t idx, int M, int particles, int* digits) {
    for (int a = particles - 1; a >= 0; --a) {
        digits[a] = static_cast<int>(idx % M);
        idx /= M;
    }
}

}  // namespace

WaveFunction symmetrize_bosonic(const WaveFunction& Psi) {
    const int n = Psi.particles, M = Psi.grid.points;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    WaveFunction out = Psi;
    std::fill(out.amp.begin(), out.amp.end(), cplx(0.0, 0.0));
    std::vector<int> digits(n);
    int count = 0;
    do {
        ++count;
        for (std::size_t idx = 0; idx < Psi.amp.size(); ++idx) {
            decompose_index(idx, M, n, digits.data());
            std::size_t src = 0;
            for (int a = 0; a < n; ++a) src = src * M + digits[perm[a]];
            out.amp[idx] += Psi.amp[src];
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& v : out.amp) v /= static_cast<double>(count);
    out.normalize();
    return out;
}

bool is_bosonic_symmetric(const WaveFunction& Psi, double tol) {
    const int n = Psi.particles, M = Psi.grid.points;
    if (n == 1) return true;
    std::vector<int> digits(n);
    // Adjacent transpositions generate the symmetric group.
    for (int swap_axis = 0; swap_axis + 1 < n; ++swap_axis) {
        for (std::size_t idx = 0; idx < Psi.amp.size(); ++idx) {
            decompose_index(idx, M, n, digits.data());
            std::swap(digits[swap_axis], digits[swap_axis + 1]);
            std::size_t src = 0;
            for (int a = 0; a < n; ++a) src = src * M + digits[a];
            if (std::abs(Psi.amp[idx] - Psi.amp[src]) > tol) return false;
        }
    }
    return true;
}

namespace {

class StrangStepper {
  public:
    StrangStepper(WaveFunction& wf, const InteractionPotential& V, double dt, bool hartree)
        : wf_(wf), V_(V), dt_(dt), hartree_(hartree) {
        const int M = wf.grid.points;
        kin_half_.resize(M);
        for (int n = 0; n < M; ++n) {
            const double k = wf.grid.k(n);
            kin_half_[n] = std::polar(1.0, -0.5 * dt_ * 0.5 * wf.scale * k * k);
        }
        if (!hartree_ && V_.family() != InteractionPotential::Family::zero) {
            // Diagonal pair phase exp(-i dt U / scale), U = (1/N) sum_{k<l} V.
            const int n = wf.particles;
            pair_phase_.resize(wf.amp.size());
            std::vector<int> digits(n);
            for (std::size_t idx = 0; idx < wf.amp.size(); ++idx) {
                decompose_index(idx, M, n, digits.data());
                double u = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b) {
                        const double z = wf.grid.x(digits[a]) - wf.grid.x(digits[b]);
                        u += V_.value(&z);
                    }
                u /= n;
                pair_phase_[idx] = std::polar(1.0, -dt_ * u / wf.scale);
            }
        }
    }

    void kinetic_half() {
        for (int axis = 0; axis < wf_.particles; ++axis) {
            fft_axis(wf_.amp.data(), wf_.amp.size(), wf_.grid.points, wf_.particles, axis, false);
            apply_axis_diagonal_inplace(kin_half_, axis);
            fft_axis(wf_.amp.data(), wf_.amp.size(), wf_.grid.points, wf_.particles, axis, true);
        }
    }

    void potential_full() {
        if (V_.family() == InteractionPotential::Family::zero) return;
        if (hartree_) {
            // V * |psi|^2 through the potential's Fourier modes.
            const int M = wf_.grid.points;
            const double h = wf_.grid.spacing();
            std::vector<double> vmf(M, 0.0);
            for (const auto& [mode, coeff] : V_.fourier()) {
                const double omega = V_.fourier_frequency(mode);
                cplx rho_hat = 0.0;
                for (int j = 0; j < M; ++j)
                    rho_hat += std::norm(wf_.amp[j]) * std::polar(1.0, -omega * wf_.grid.x(j));
                rho_hat *= h;
                for (int j = 0; j < M; ++j)
                    vmf[j] += (coeff * rho_hat * std::polar(1.0, omega * wf_.grid.x(j))).real();
            }
            for (int j = 0; j < M; ++j)
                wf_.amp[j] *= std::polar(1.0, -dt_ * vmf[j] / wf_.scale);
        } else {
            for (std::size_t idx = 0; idx < wf_.amp.size(); ++idx) wf_.amp[idx] *= pair_phase_[idx];
        }
    }

    void step() {
        kinetic_half();
        potential_full();
        kinetic_half();
    }

  private:
    void apply_axis_diagonal_inplace(const std::vector<cplx>& diag, int axis) {
        const int M = wf_.grid.points;
        std::size_t stride = 1;
        for (int a = wf_.particles - 1; a > axis; --a) stride *= M;
        const std::size_t block = stride * M;
        for (std::size_t outer = 0; outer < wf_.amp.size(); outer += block)
            for (int i = 0; i < M; ++i) {
                const cplx d = diag[i];
                const std::size_t base = outer + static_cast<std::size_t>(i) * stride;
                for (std::size_t innerv = 0; innerv < stride; ++innerv)
                    wf_.amp[base + innerv] *= d;
            }
    }

    WaveFunction& wf_;
    const InteractionPotential& V_;
    double dt_;
    bool hartree_;
    std::vector<cplx> kin_half_;
    std::vector<cplx> pair_phase_;
};

std::vector<WaveFunction> evolve_impl(const WaveFunction& wf0, const InteractionPotential& V,
                                      double t_end, double dt, const EvolveOptions& opts,
                                      bool hartree) {
    wf0.validate();
    check_grid_potential(wf0.grid, V);
    if (dt <= 0.0) throw std::invalid_argument("evolve: dt must be positive");
    if (t_end < 0.0) throw std::invalid_argument("evolve: t_end must be nonnegative");
    if (hartree && wf0.particles != 1)
        throw std::invalid_argument("hartree_evolve: single-particle state expected");
    if (opts.require_bosonic && !is_bosonic_symmetric(wf0, 1e-10))
        throw std::invalid_argument("evolve: input is not bosonic-symmetric");

    const long steps = std::lround(t_end / dt);
    const double dt_eff = steps > 0 ? t_end / static_cast<double>(steps) : dt;
    const int n_outputs = std::max(2, opts.n_outputs);
    const auto outs = output_steps(steps, n_outputs);

    std::vector<WaveFunction> series;
    series.push_back(wf0);
    WaveFunction wf = wf0;
    StrangStepper stepper(wf, V, dt_eff, hartree);
    std::size_t next_out = 0;
    for (long step = 1; step <= steps; ++step) {
        stepper.step();
        wf.time = wf0.time + static_cast<double>(step) * dt_eff;
        if (std::abs(wf.norm() - 1.0) > 1e-6)
            throw std::runtime_error("evolve: normalization lost (instability)");
        if (next_out < outs.size() && step == outs[next_out]) {
            series.push_back(wf);
            ++next_out;
        }
    }
    return series;
}

}  // namespace

std::vector<WaveFunction> hartree_evolve(const WaveFunction& psi0, const InteractionPotential& V,
                                         double t_end, double dt, const EvolveOptions& opts) {
    return evolve_impl(psi0, V, t_end, dt, opts, true);
}

std::vector<WaveFunction> nbody_schrodinger_evolve(const WaveFunction& Psi0,
                                                   const InteractionPotential& V, double t_end,
                                                   double dt, const EvolveOptions& opts) {
    return evolve_impl(Psi0, V, t_end, dt, opts, false);
}

double hartree_energy(const WaveFunction& psi, const InteractionPotential& V) {
    psi.validate();
    if (psi.particles != 1) throw std::invalid_argument("hartree_energy: single-particle state");
    const int M = psi.grid.points;
    const double h = psi.grid.spacing();

    std::vector<cplx> hat = psi.amp;
    fft(hat, false);
    for (auto& v : hat) v /= static_cast<double>(M);
    double kin = 0.0;
    for (int n = 0; n < M; ++n) {
        const double k = psi.grid.k(n);
        kin += 0.5 * psi.scale * psi.scale * k * k * std::norm(hat[n]);
    }
    kin *= psi.grid.length;

    double pot = 0.0;
    if (V.family() != InteractionPotential::Family::zero) {
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j) {
                const double z = psi.grid.x(i) - psi.grid.x(j);
                pot += V.value(&z) * std::norm(psi.amp[i]) * std::norm(psi.amp[j]);
            }
        pot *= 0.5 * h * h;
    }
    return kin + pot;
}

double nbody_energy(const WaveFunction& Psi, const InteractionPotential& V) {
    Psi.validate();
    const int M = Psi.grid.points, n = Psi.particles;
    const double hN = std::pow(Psi.grid.spacing(), n);

    double kin = 0.0;
    {
        std::vector<cplx> hat = Psi.amp;
        for (int axis = 0; axis < n; ++axis)
            fft_axis(hat.data(), hat.size(), M, n, axis, false);
        const double scale_hat = std::pow(static_cast<double>(M), n);
        std::vector<int> digits(n);
        for (std::size_t idx = 0; idx < hat.size(); ++idx) {
            decompose_index(idx, M, n, digits.data());
            double ksq = 0.0;
            for (int a = 0; a < n; ++a) {
                const double k = Psi.grid.k(digits[a]);
                ksq += k * k;
            }
            kin += 0.5 * Psi.scale * Psi.scale * ksq * std::norm(hat[idx]);
        }
        kin *= std::pow(Psi.grid.length, n) / (scale_hat * scale_hat);
    }

    double pot = 0.0;
    if (V.family() != InteractionPotential::Family::zero) {
        std::vector<int> digits(n);
        for (std::size_t idx = 0; idx < Psi.amp.size(); ++idx) {
            decompose_index(idx, M, n, digits.data());
            double u = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    const double z = Psi.grid.x(digits[a]) - Psi.grid.x(digits[b]);
                    u += V.value(&z);
                }
            pot += (u / n) * std::norm(Psi.amp[idx]);
        }
        pot *= hN;
    }
    return kin + pot;
}

DensityOperator reduce_density(const WaveFunction& Psi, int k) {
    Psi.validate();
    if (k < 1 || k >= Psi.particles)
        throw std::invalid_argument("reduce_density: k must satisfy 1 <= k < N");
    const std::size_t rows = ipow(static_cast<std::size_t>(Psi.grid.points), k);
    const std::size_t cols = Psi.amp.size() / rows;
    if (rows * rows > kAmplitudeCap)
        throw std::invalid_argument("reduce_density: marginal over memory cap");

    using RowMat =
        Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> A(Psi.amp.data(), static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols));
    DensityOperator R;
    R.grid = Psi.grid;
    R.particles = k;
    R.scale = Psi.scale;
    R.mat = (A * A.adjoint()) * std::pow(Psi.grid.spacing(), Psi.particles);
    return R;
}

DensityOperator pure_density(const WaveFunction& psi) {
    psi.validate();
    if (psi.particles != 1) throw std::invalid_argument("pure_density: single-particle state");
    DensityOperator R;
    R.grid = psi.grid;
    R.particles = 1;
    R.scale = psi.scale;
    Eigen::Map<const Eigen::VectorXcd> v(psi.amp.data(), psi.grid.points);
    R.mat = (v * v.adjoint()) * psi.grid.spacing();
    return R;
}

Eigen::MatrixXcd projector(const WaveFunction& phi) { return pure_density(phi).mat; }

cplx klimontovich_expectation(const WaveFunction& Psi, const Eigen::MatrixXcd& A) {
    Psi.validate();
    if (A.rows() != Psi.grid.points || A.cols() != Psi.grid.points)
        throw std::invalid_argument("klimontovich_expectation: operator dimension mismatch");
    const auto out = apply_mean_operator(Psi, A);
    return inner(Psi, out);
}

cplx interaction_bracket_expectation(const WaveFunction& Psi, const Eigen::MatrixXcd& A,
                                     const InteractionPotential& V) {
    Psi.validate();
    check_grid_potential(Psi.grid, V);
    if (V.fourier().empty())
        throw std::invalid_argument("interaction_bracket_expectation: empty Fourier data");
    const int M = Psi.grid.points;

    cplx total = 0.0;
    for (const auto& [mode, coeff] : V.fourier()) {
        const double omega = V.fourier_frequency(mode);
        std::vector<cplx> e_plus(M), e_minus(M);
        for (int i = 0; i < M; ++i) {
            e_plus[i] = std::polar(1.0, omega * Psi.grid.x(i));
            e_minus[i] = std::conj(e_plus[i]);
        }
        Eigen::MatrixXcd EwA = A;
        for (int i = 0; i < M; ++i) EwA.row(i) *= e_plus[i];
        Eigen::MatrixXcd AEw = A;
        for (int j = 0; j < M; ++j) AEw.col(j) *= e_plus[j];

        WaveFunction tmp = Psi;
        // term 1: (M_N E_w^*)(M_N (E_w A))
        tmp.amp = apply_mean_operator(Psi, EwA);
        const std::vector<cplx> t1 = apply_mean_diagonal(tmp, e_minus);
        // term 2: (M_N (A E_w))(M_N E_w^*)
        tmp.amp = apply_mean_diagonal(Psi, e_minus);
        const std::vector<cplx> t2 = apply_mean_operator(tmp, AEw);
        total += coeff * (inner(Psi, t1) - inner(Psi, t2));
    }
    return total;
}

MfError mf_error(const WaveFunction& Psi, const WaveFunction& psi) {
    psi.validate();
    if (!(psi.grid == Psi.grid) || std::abs(psi.scale - Psi.scale) > 1e-12)
        throw std::invalid_argument("mf_error: grid or scale mismatch");
    const DensityOperator R1 = reduce_density(Psi, 1);
    Eigen::Map<const Eigen::VectorXcd> v(psi.amp.data(), psi.grid.points);
    Eigen::MatrixXcd diff = R1.mat - (v * v.adjoint()) * psi.grid.spacing();
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
    MfError e;
    e.op_norm = es.eigenvalues().cwiseAbs().maxCoeff();
    const cplx overlap = (v.adjoint() * (R1.mat * v))(0, 0) * psi.grid.spacing();
    e.pickl = 1.0 - overlap.real();
    return e;
}

void save_wavefunction(const std::string& path, const WaveFunction& wf) {
    wf.validate(1e-3);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_wavefunction: cannot open " + path);
    out.write("MFQ1", 4);
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u64(1);  // spatial dimension d
    put_u64(static_cast<std::uint64_t>(wf.particles));
    put_u64(static_cast<std::uint64_t>(wf.grid.points));
    put_f64(wf.grid.length);
    put_f64(wf.scale);
    put_f64(wf.time);
    for (const auto& v : wf.amp) {
        put_f64(v.real());
        put_f64(v.imag());
    }
    if (!out) throw std::runtime_error("save_wavefunction: write failed");
}

WaveFunction load_wavefunction(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_wavefunction: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MFQ1", 4) != 0)
        throw std::runtime_error("load_wavefunction: bad magic");
    auto get_u64 = [&]() {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    auto get_f64 = [&]() {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const std::uint64_t d = get_u64();
    if (d != 1) throw std::runtime_error("load_wavefunction: only d = 1 grids supported");
    WaveFunction wf;
    wf.particles = static_cast<int>(get_u64());
    wf.grid.points = static_cast<int>(get_u64());
    wf.grid.length = get_f64();
    wf.scale = get_f64();
    wf.time = get_f64();
    wf.amp.resize(wf.expected_size());
    for (auto& v : wf.amp) {
        const double re = get_f64();
        const double im = get_f64();
        v = cplx(re, im);
    }
    if (!in) throw std::runtime_error("load_wavefunction: truncated file");
    return wf;
}

}  // namespace mflab
