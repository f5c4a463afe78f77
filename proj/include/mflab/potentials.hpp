#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mflab {

// Pairwise interaction potential: even, C^1, with bounded Lipschitz gradient.
// The stored constants are closed-form per family (upper bounds where the
// exact supremum has no elementary form), never numerical estimates; the
// stability-rate checks depend on them being valid bounds.
class InteractionPotential {
  public:
    enum class Family { zero, gaussian, cosine, mollified_screened };

    int dim() const { return dim_; }
    Family family() const { return family_; }
    const std::string& name() const { return name_; }

    double value(const double* z) const;
    // out = grad V(z); out has dim() entries.
    void gradient(const double* z, double* out) const;
    // out += scale * grad V(z); avoids a temporary in force loops.
    void add_gradient(const double* z, double* out, double scale) const;

    double lip_grad() const { return lip_grad_; }
    double sup_grad() const { return sup_grad_; }

    // Fourier series data for periodic families: pairs (lattice index n,
    // real coefficient c_n) with V(z) = sum_n c_n e^{i 2 pi n z / L}.
    // Empty for non-periodic families.
    const std::vector<std::pair<int, double>>& fourier() const { return fourier_; }
    bool periodic() const { return period_ > 0.0; }
    double period() const { return period_; }
    double fourier_frequency(int n) const;
    double sum_abs_fourier() const;

    static InteractionPotential make(Family family, const std::vector<double>& params, int dim);

  private:
    InteractionPotential() = default;

    Family family_ = Family::zero;
    int dim_ = 1;
    std::string name_;
    double lip_grad_ = 0.0;
    double sup_grad_ = 0.0;
    double period_ = 0.0;
    std::vector<std::pair<int, double>> fourier_;
    // Family parameters.
    double a_ = 0.0;      // amplitude
    double sigma_ = 1.0;  // gaussian width
    double kappa_ = 0.0;  // screening rate
    double delta_ = 1.0;  // mollification radius
    double omega1_ = 0.0; // 2 pi / L for cosine
};

// params per family:
//   zero               {}              (any dim)
//   gaussian           {a, sigma}      (any dim)
//   cosine             {a, L}          (dim 1, periodic with box length L)
//   mollified_screened {kappa, delta}  (any dim)
InteractionPotential builtin_potential(InteractionPotential::Family family,
                                       const std::vector<double>& params, int dim = 1);
InteractionPotential builtin_potential(const std::string& name, const std::vector<double>& params,
                                       int dim = 1);

}  // namespace mflab
