#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mflab/empirical.hpp"

namespace mflab {

// Reference phase-space densities on R^{2d} with seeded i.i.d. sampling.
struct ReferenceDensity {
    enum class Kind { gaussian_phase, uniform_box, two_bump };

    Kind kind = Kind::gaussian_phase;
    int d = 3;  // spatial dimension; the measure lives on R^{2d}

    // gaussian_phase: independent N(0, sigma^2) per coordinate block.
    double sigma_x = 1.0, sigma_xi = 1.0;
    // uniform_box: uniform on [-half_width, half_width]^{2d}.
    double half_width = 1.0;
    // two_bump: equal mixture of two gaussian bumps (width 0 degenerates to
    // two Dirac atoms).
    std::vector<double> center1, center2;  // each of size 2d
    double bump_sigma = 0.0;

    int q = 3;  // declared moment order

    std::string name() const;
    void validate() const;
    // Analytic M_q = E (|x| + |xi|)^q where a closed form exists
    // (gaussian_phase via chi moments, degenerate two_bump); NaN otherwise.
    double moment_mq() const;
};

// Deterministic per (density, n, seed, trial); independent across
// (seed, trial, atom) substreams.
EmpiricalMeasure sample_iid(const ReferenceDensity& f, int n, std::uint64_t seed,
                            std::uint64_t trial = 0);

struct FgRow {
    int n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    int trials = 0;
    double envelope = 0.0;            // c (n^{-1/q} + n^{-(1-1/q)}) anchored at the first n
    double envelope_dim_rate = 0.0;   // same with the dimensional exponent 1/(2d)
};

struct FgResult {
    std::vector<FgRow> rows;
    double slope = 0.0;       // fitted log-log slope of the means
    double envelope_c = 0.0;  // constant fitted at the first n
    double envelope_dim_c = 0.0;
    int ref_size = 0;         // total reference sample size
    int chunk_size = 0;       // per-solve reference size (transport cap bound)
    double mq = 0.0;
};

struct FgOptions {
    int ref_multiplier = 20;
    int atom_cap = 4096;
    int threads = 2;
};

// Monte Carlo measurement of E dist_MK,1(mu_N, reference) over n_list.
// The reference is a fixed seeded sample of ref_multiplier * max(n_list)
// atoms; each trial is solved exactly against one cap-sized chunk of it
// (chunks rotate across trials).
FgResult fg_rate_experiment(const ReferenceDensity& f, const std::vector<int>& n_list, int trials,
                            std::uint64_t seed, const FgOptions& opts = {});

}  // namespace mflab
