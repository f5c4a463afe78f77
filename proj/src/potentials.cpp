#include "mflab/potentials.hpp"

#include <cmath>
#include <stdexcept>

#include "mflab/fft.hpp"

namespace mflab {

namespace {

double norm2(const double* z, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += z[i] * z[i];
    return s;
}

}  // namespace

double InteractionPotential::value(const double* z) const {
    switch (family_) {
        case Family::zero:
            return 0.0;
        case Family::gaussian:
            return a_ * std::exp(-norm2(z, dim_) / (2.0 * sigma_ * sigma_));
        case Family::cosine:
            return a_ * std::cos(omega1_ * z[0]);
        case Family::mollified_screened: {
            const double s = std::sqrt(norm2(z, dim_) + delta_ * delta_);
            return std::exp(-kappa_ * s) / s;
        }
    }
    return 0.0;
}

void InteractionPotential::gradient(const double* z, double* out) const {
    for (int i = 0; i < dim_; ++i) out[i] = 0.0;
    add_gradient(z, out, 1.0);
}

void InteractionPotential::add_gradient(const double* z, double* out, double scale) const {
    switch (family_) {
        case Family::zero:
            return;
        case Family::gaussian: {
            const double c =
                -scale * a_ / (sigma_ * sigma_) * std::exp(-norm2(z, dim_) / (2.0 * sigma_ * sigma_));
            for (int i = 0; i < dim_; ++i) out[i] += c * z[i];
            return;
        }
        case Family::cosine:
            out[0] += -scale * a_ * omega1_ * std::sin(omega1_ * z[0]);
            return;
        case Family::mollified_screened: {
            const double s = std::sqrt(norm2(z, dim_) + delta_ * delta_);
            const double w = -std::exp(-kappa_ * s) * (kappa_ * s + 1.0) / (s * s * s);
            for (int i = 0; i < dim_; ++i) out[i] += scale * w * z[i];
            return;
        }
    }
}

double InteractionPotential::fourier_frequency(int n) const {
    if (!periodic()) throw std::logic_error("potential is not periodic");
    return kTwoPi * n / period_;
}

double InteractionPotential::sum_abs_fourier() const {
    double s = 0.0;
    for (const auto& [n, c] : fourier_) s += std::abs(c);
    return s;
}

InteractionPotential InteractionPotential::make(Family family, const std::vector<double>& params,
                                                int dim) {
    if (dim < 1) throw std::invalid_argument("potential: dimension must be positive");
    InteractionPotential p;
    p.family_ = family;
    p.dim_ = dim;
    switch (family) {
        case Family::zero: {
            p.name_ = "zero";
            break;
        }
        case Family::gaussian: {
            if (params.size() != 2) throw std::invalid_argument("gaussian needs {a, sigma}");
            const double a = params[0], sigma = params[1];
            if (sigma <= 0.0) throw std::invalid_argument("gaussian: width must be positive");
            p.name_ = "gaussian";
            p.a_ = a;
            p.sigma_ = sigma;
            // |grad V| = (|a|/s^2) r e^{-r^2/2s^2}, maximal at r = s.
            p.sup_grad_ = std::abs(a) / sigma * std::exp(-0.5);
            // Hessian norm is maximal at the origin.
            p.lip_grad_ = std::abs(a) / (sigma * sigma);
            break;
        }
        case Family::cosine: {
            if (params.size() != 2) throw std::invalid_argument("cosine needs {a, L}");
            if (dim != 1) throw std::invalid_argument("cosine potential is one-dimensional");
            const double a = params[0], L = params[1];
            if (L <= 0.0) throw std::invalid_argument("cosine: period must be positive");
            p.name_ = "cosine";
            p.a_ = a;
            p.period_ = L;
            p.omega1_ = kTwoPi / L;
            p.sup_grad_ = std::abs(a) * p.omega1_;
            p.lip_grad_ = std::abs(a) * p.omega1_ * p.omega1_;
            p.fourier_ = {{1, a / 2.0}, {-1, a / 2.0}};
            break;
        }
        case Family::mollified_screened: {
            if (params.size() != 2) throw std::invalid_argument("mollified_screened needs {kappa, delta}");
            const double kappa = params[0], delta = params[1];
            if (kappa < 0.0) throw std::invalid_argument("mollified_screened: kappa must be >= 0");
            if (delta <= 0.0) throw std::invalid_argument("mollified_screened: delta must be positive");
            p.name_ = "mollified_screened";
            p.kappa_ = kappa;
            p.delta_ = delta;
            // V = e^{-ks}/s with s = sqrt(|z|^2 + delta^2), so both the
            // screening factor and the Coulomb core are mollified and V is C^inf.
            // |grad V| <= e^{-ks}(ks+1)/s^2 and ||Hess V|| <= e^{-ks}(ks+2)^2/s^3,
            // both decreasing in s >= delta; evaluate at s = delta.
            const double kd = kappa * delta;
            p.sup_grad_ = std::exp(-kd) * (kd + 1.0) / (delta * delta);
            p.lip_grad_ = std::exp(-kd) * (kd + 2.0) * (kd + 2.0) / (delta * delta * delta);
            break;
        }
    }
    return p;
}

InteractionPotential builtin_potential(InteractionPotential::Family family,
                                       const std::vector<double>& params, int dim) {
    return InteractionPotential::make(family, params, dim);
}

InteractionPotential builtin_potential(const std::string& name, const std::vector<double>& params,
                                       int dim) {
    using F = InteractionPotential::Family;
    if (name == "zero") return InteractionPotential::make(F::zero, params, dim);
    if (name == "gaussian") return InteractionPotential::make(F::gaussian, params, dim);
    if (name == "cosine") return InteractionPotential::make(F::cosine, params, dim);
    if (name == "mollified_screened")
        return InteractionPotential::make(F::mollified_screened, params, dim);
    throw std::invalid_argument("unknown potential family: " + name);
}

}  // namespace mflab
