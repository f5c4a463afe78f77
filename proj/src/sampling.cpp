#include "mflab/sampling.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mflab/rng.hpp"
#include "mflab/transport.hpp"

namespace mflab {

namespace {

constexpr std::uint64_t kRefStreamTag = 0x5245464d41535445ULL;  // reference substream marker

double chi_moment(int dim, int k) {
    // E |N(0, I_dim)|^k = 2^{k/2} Gamma((dim+k)/2) / Gamma(dim/2)
    return std::exp2(0.5 * k) *
           std::exp(std::lgamma(0.5 * (dim + k)) - std::lgamma(0.5 * dim));
}

double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

std::string ReferenceDensity::name() const {
    switch (kind) {
        case Kind::gaussian_phase:
            return "gaussian_phase";
        case Kind::uniform_box:
            return "uniform_box";
        case Kind::two_bump:
            return "two_bump";
    }
    return "?";
}

void ReferenceDensity::validate() const {
    if (d < 1) throw std::invalid_argument("reference density: d must be positive");
    if (kind == Kind::gaussian_phase && (sigma_x <= 0.0 || sigma_xi <= 0.0))
        throw std::invalid_argument("reference density: gaussian widths must be positive");
    if (kind == Kind::uniform_box && half_width <= 0.0)
        throw std::invalid_argument("reference density: box half width must be positive");
    if (kind == Kind::two_bump) {
        if (center1.size() != static_cast<std::size_t>(2 * d) ||
            center2.size() != static_cast<std::size_t>(2 * d))
            throw std::invalid_argument("reference density: bump centers must be in R^{2d}");
        if (bump_sigma < 0.0) throw std::invalid_argument("reference density: negative bump width");
    }
    if (q < 1) throw std::invalid_argument("reference density: q must be >= 1");
}

double ReferenceDensity::moment_mq() const {
    validate();
    if (kind == Kind::gaussian_phase) {
        // |x| + |xi| with independent scaled chi_d factors.
        double m = 0.0;
        for (int k = 0; k <= q; ++k)
            m += binomial(q, k) * std::pow(sigma_x, k) * chi_moment(d, k) *
                 std::pow(sigma_xi, q - k) * chi_moment(d, q - k);
        return m;
    }
    if (kind == Kind::two_bump && bump_sigma == 0.0) {
        auto val = [&](const std::vector<double>& c) {
            double nx = 0.0, nxi = 0.0;
            for (int i = 0; i < d; ++i) {
                nx += c[i] * c[i];
                nxi += c[d + i] * c[d + i];
            }
            return std::pow(std::sqrt(nx) + std::sqrt(nxi), q);
        };
        return 0.5 * (val(center1) + val(center2));
    }
    return std::nan("");
}

EmpiricalMeasure sample_iid(const ReferenceDensity& f, int n, std::uint64_t seed,
                            std::uint64_t trial) {
    f.validate();
    if (n < 1) throw std::invalid_argument("sample_iid: n must be >= 1");
    const int dim = 2 * f.d;
    std::vector<double> pts(static_cast<std::size_t>(n) * dim);
    for (int k = 0; k < n; ++k) {
        CounterRng rng(seed, trial, static_cast<std::uint64_t>(k));
        double* z = pts.data() + static_cast<std::size_t>(k) * dim;
        switch (f.kind) {
            case ReferenceDensity::Kind::gaussian_phase:
                for (int i = 0; i < f.d; ++i) z[i] = f.sigma_x * rng.normal();
                for (int i = 0; i < f.d; ++i) z[f.d + i] = f.sigma_xi * rng.normal();
                break;
            case ReferenceDensity::Kind::uniform_box:
                for (int i = 0; i < dim; ++i) z[i] = rng.uniform(-f.half_width, f.half_width);
                break;
            case ReferenceDensity::Kind::two_bump: {
                const bool first = rng.uniform() < 0.5;
                const auto& c = first ? f.center1 : f.center2;
                for (int i = 0; i < dim; ++i) z[i] = c[i] + f.bump_sigma * rng.normal();
                break;
            }
        }
    }
    return EmpiricalMeasure::uniform(dim, std::move(pts));
}

FgResult fg_rate_experiment(const ReferenceDensity& f, const std::vector<int>& n_list, int trials,
                            std::uint64_t seed, const FgOptions& opts) {
    f.validate();
    if (f.d < 3) throw std::invalid_argument("fg_rate_experiment: requires d >= 3");
    if (f.q <= 1 || std::abs(f.q - 2.0 * f.d / (2.0 * f.d - 1.0)) < 1e-12)
        throw std::invalid_argument("fg_rate_experiment: inadmissible moment order q");
    if (trials < 5) throw std::invalid_argument("fg_rate_experiment: needs at least 5 trials");
    if (n_list.empty()) throw std::invalid_argument("fg_rate_experiment: empty n list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("fg_rate_experiment: n list must be increasing");

    const int max_n = n_list.back();
    if (max_n > opts.atom_cap)
        throw std::invalid_argument("fg_rate_experiment: max n exceeds the transport cap");
    const long ref_total = static_cast<long>(opts.ref_multiplier) * max_n;
    const int chunk = static_cast<int>(std::min<long>(opts.atom_cap, ref_total));
    const int n_chunks = static_cast<int>((ref_total + chunk - 1) / chunk);

    std::vector<EmpiricalMeasure> ref_chunks;
    ref_chunks.reserve(n_chunks);
    for (int c = 0; c < n_chunks; ++c)
        ref_chunks.push_back(sample_iid(f, chunk, seed, kRefStreamTag + c));

    FgResult res;
    res.ref_size = static_cast<int>(ref_total);
    res.chunk_size = chunk;
    res.mq = f.moment_mq();

    MkOptions mk_opts;
    mk_opts.atom_cap = opts.atom_cap;
    mk_opts.want_plan = false;

    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        const int n = n_list[ni];
        std::vector<double> dist(trials, 0.0);
        const int nthreads = std::max(1, opts.threads);
        std::vector<std::thread> pool;
        std::atomic<int> cursor{0};
        auto worker = [&]() {
            while (true) {
                const int t = cursor.fetch_add(1);
                if (t >= trials) break;
                const auto mu =
                    sample_iid(f, n, seed, static_cast<std::uint64_t>(ni) * 1000003ULL + t);
                const auto& ref = ref_chunks[t % n_chunks];
                dist[t] = mk_distance(mu, ref, 1.0, mk_opts).distance;
            }
        };
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();

        double mean = 0.0;
        for (double v : dist) mean += v;
        mean /= trials;
        double var = 0.0;
        for (double v : dist) var += (v - mean) * (v - mean);
        const double se = trials > 1 ? std::sqrt(var / (trials - 1) / trials) : 0.0;
        res.rows.push_back({n, mean, se, trials, 0.0, 0.0});
    }

    // Log-log slope of the means.
    const int m = static_cast<int>(res.rows.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& r : res.rows) {
        const double lx = std::log(static_cast<double>(r.n)), ly = std::log(r.mean);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    res.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    // Envelope anchored at the first n: smallest c with mean <= c * shape(n0).
    const double q = f.q;
    auto shape_q = [&](double n) { return std::pow(n, -1.0 / q) + std::pow(n, -(1.0 - 1.0 / q)); };
    auto shape_dim = [&](double n) {
        return std::pow(n, -1.0 / (2.0 * f.d)) + std::pow(n, -(1.0 - 1.0 / q));
    };
    const double n0 = res.rows.front().n;
    res.envelope_c = res.rows.front().mean / shape_q(n0);
    res.envelope_dim_c = res.rows.front().mean / shape_dim(n0);
    for (auto& r : res.rows) {
        r.envelope = res.envelope_c * shape_q(r.n);
        r.envelope_dim_rate = res.envelope_dim_c * shape_dim(r.n);
    }
    return res;
}

}  // namespace mflab
