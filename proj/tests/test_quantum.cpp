#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "mflab/fft.hpp"
#include "mflab/potentials.hpp"
#include "mflab/quantum.hpp"
#include "mflab/rng.hpp"

using namespace mflab;
using Family = InteractionPotential::Family;

namespace {

const SpatialGrid g32{32, 2.0 * kPi};

InteractionPotential cos_potential(double a = 1.0, double L = 2.0 * kPi) {
    return builtin_potential(Family::cosine, {a, L}, 1);
}

WaveFunction random_bosonic(const SpatialGrid& g, int n, std::uint64_t seed, double scale) {
    WaveFunction base;
    base.grid = g;
    base.particles = n;
    base.scale = scale;
    CounterRng rng(seed, 0, 0);
    base.amp.resize(base.expected_size());
    for (auto& v : base.amp) v = cplx(rng.normal(), rng.normal());
    // Smooth in every axis so the state has bounded kinetic content.
    WaveFunction smooth = base;
    for (int axis = 0; axis < n; ++axis) {
        fft_axis(smooth.amp.data(), smooth.amp.size(), g.points, n, axis, false);
        std::vector<int> keep(g.points, 0);
        for (int m = 0; m < g.points; ++m)
            if (std::abs(signed_freq(m, g.points)) <= 2) keep[m] = 1;
        std::size_t stride = 1;
        for (int a = n - 1; a > axis; --a) stride *= g.points;
        for (std::size_t idx = 0; idx < smooth.amp.size(); ++idx) {
            const int m = static_cast<int>((idx / stride) % g.points);
            if (!keep[m]) smooth.amp[idx] = 0.0;
        }
        fft_axis(smooth.amp.data(), smooth.amp.size(), g.points, n, axis, true);
    }
    smooth.normalize();
    return symmetrize_bosonic(smooth);
}

}  // namespace

TEST_CASE("free fourier mode acquires a pure phase") {
    auto zero = builtin_potential(Family::zero, {}, 1);
    auto psi0 = fourier_mode_state(g32, 2, 1.0);
    auto series = hartree_evolve(psi0, zero, 0.5, 1e-3, {3, false});
    const double k = kTwoPi * 2 / g32.length;
    for (const auto& snap : series) {
        const cplx expect = std::polar(1.0, -0.5 * snap.scale * k * k * snap.time);
        for (int i = 0; i < g32.points; ++i) {
            CHECK(std::abs(std::abs(snap.amp[i]) - std::abs(psi0.amp[i])) < 1e-12);
            CHECK(std::abs(snap.amp[i] - expect * psi0.amp[i]) < 1e-10);
        }
    }
}

TEST_CASE("uniform state is a fixed point up to a global phase") {
    auto psi0 = uniform_state(g32, 0.5);
    auto series = hartree_evolve(psi0, cos_potential(), 0.4, 1e-3, {3, false});
    for (const auto& snap : series)
        for (int i = 0; i < g32.points; ++i)
            CHECK(std::abs(std::abs(snap.amp[i]) - std::abs(psi0.amp[0])) < 1e-12);
}

TEST_CASE("hartree self-convergence is second order") {
    auto psi0 = gaussian_packet(g32, 0.3, 0.5, 0.7, 1.0);
    auto coarse = hartree_evolve(psi0, cos_potential(), 1.0, 1e-3).back();
    auto fine = hartree_evolve(psi0, cos_potential(), 1.0, 1e-4).back();
    double err = 0.0;
    for (int i = 0; i < g32.points; ++i) err = std::max(err, std::abs(coarse.amp[i] - fine.amp[i]));
    CHECK(err < 1e-6);
}

TEST_CASE("hartree norm and energy conservation") {
    auto psi0 = gaussian_packet(g32, -0.4, 0.8, 0.6, 1.0);
    auto V = cos_potential();
    const double e0 = hartree_energy(psi0, V);
    auto series = hartree_evolve(psi0, V, 1.0, 1e-3, {11, false});
    for (const auto& snap : series) {
        CHECK(std::abs(snap.norm() - 1.0) < 1e-10);
        CHECK(std::abs(hartree_energy(snap, V) - e0) <= 1e-6 * std::max(1.0, std::abs(e0)));
    }
}

TEST_CASE("n-body: free product states, permutation symmetry, energy drift") {
    auto zero = builtin_potential(Family::zero, {}, 1);
    auto mode = fourier_mode_state(g32, 1, 1.0);
    auto Psi0 = tensor_power(mode, 2);
    auto free_series = nbody_schrodinger_evolve(Psi0, zero, 0.3, 1e-3);
    for (std::size_t i = 0; i < Psi0.amp.size(); ++i)
        CHECK(std::abs(std::abs(free_series.back().amp[i]) - std::abs(Psi0.amp[i])) < 1e-12);

    auto V = cos_potential();
    auto Psi = random_bosonic(g32, 2, 5, 1.0);
    CHECK(is_bosonic_symmetric(Psi, 1e-12));
    auto evolved = nbody_schrodinger_evolve(Psi, V, 0.5, 1e-3, {3, true});
    for (const auto& snap : evolved) {
        CHECK(is_bosonic_symmetric(snap, 1e-12));
        CHECK(std::abs(snap.norm() - 1.0) < 1e-10);
    }

    const double e0 = nbody_energy(Psi, V);
    CHECK(std::abs(nbody_energy(evolved.back(), V) - e0) <= 1e-6 * std::max(1.0, std::abs(e0)));

    // Asymmetric input is rejected when the bosonic flag is set.
    WaveFunction asym = Psi;
    asym.amp[3] += 0.1;
    asym.normalize();
    CHECK_THROWS(nbody_schrodinger_evolve(asym, V, 0.1, 1e-2, {2, true}));
}

TEST_CASE("axis swap commutes with the propagator") {
    auto V = cos_potential();
    // Non-symmetric product state: evolve, swap axes, compare with swapped input.
    auto a = gaussian_packet(g32, 0.5, 0.3, 0.5, 1.0);
    auto b = gaussian_packet(g32, -0.8, -0.2, 0.7, 1.0);
    WaveFunction ab;
    ab.grid = g32;
    ab.particles = 2;
    ab.scale = 1.0;
    ab.amp.resize(ab.expected_size());
    WaveFunction ba = ab;
    const int M = g32.points;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            ab.amp[static_cast<std::size_t>(i) * M + j] = a.amp[i] * b.amp[j];
            ba.amp[static_cast<std::size_t>(i) * M + j] = b.amp[i] * a.amp[j];
        }
    auto eab = nbody_schrodinger_evolve(ab, V, 0.4, 1e-3).back();
    auto eba = nbody_schrodinger_evolve(ba, V, 0.4, 1e-3).back();
    double err = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            err = std::max(err, std::abs(eab.amp[static_cast<std::size_t>(i) * M + j] -
                                         eba.amp[static_cast<std::size_t>(j) * M + i]));
    CHECK(err < 1e-12);
}

TEST_CASE("reduce_density: product state, mixed state, trace") {
    auto psi = gaussian_packet(g32, 0.2, 0.4, 0.6, 1.0);
    auto Psi = tensor_power(psi, 3);
    auto R1 = reduce_density(Psi, 1);
    R1.validate();
    const auto P = projector(psi);
    CHECK((R1.mat - P).cwiseAbs().maxCoeff() < 1e-10);

    // (psi1 x psi1 + psi2 x psi2)/sqrt(2) with orthogonal components:
    // marginal = (|psi1><psi1| + |psi2><psi2|) / 2.
    auto p1 = fourier_mode_state(g32, 0, 1.0);
    auto p2 = fourier_mode_state(g32, 1, 1.0);
    WaveFunction mix;
    mix.grid = g32;
    mix.particles = 2;
    mix.scale = 1.0;
    mix.amp.resize(mix.expected_size());
    const int M = g32.points;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            mix.amp[static_cast<std::size_t>(i) * M + j] =
                (p1.amp[i] * p1.amp[j] + p2.amp[i] * p2.amp[j]) / std::sqrt(2.0);
    auto Rm = reduce_density(mix, 1);
    Rm.validate();
    Eigen::MatrixXcd expect = 0.5 * projector(p1) + 0.5 * projector(p2);
    CHECK((Rm.mat - expect).cwiseAbs().maxCoeff() < 1e-10);

    auto Psi_rand = random_bosonic(g32, 2, 9, 1.0);
    auto Rr = reduce_density(Psi_rand, 1);
    CHECK(std::abs(Rr.mat.trace().real() - 1.0) < 1e-10);
    CHECK_THROWS(reduce_density(psi, 1));   // k >= N
    CHECK_THROWS(reduce_density(Psi, 0));
}

TEST_CASE("reduce_density against a direct kernel integral on a 16-point grid") {
    const SpatialGrid g16{16, 2.0 * kPi};
    auto Psi = random_bosonic(g16, 2, 12, 1.0);
    auto R1 = reduce_density(Psi, 1);
    const int M = g16.points;
    const double h = g16.spacing();
    // r_1(x, y) = integral Psi(x, z) conj(Psi(y, z)) dz; coefficient matrix is h * kernel.
    for (int x = 0; x < M; ++x)
        for (int y = 0; y < M; ++y) {
            cplx acc = 0.0;
            for (int z = 0; z < M; ++z)
                acc += Psi.amp[static_cast<std::size_t>(x) * M + z] *
                       std::conj(Psi.amp[static_cast<std::size_t>(y) * M + z]);
            acc *= h * h;
            CHECK(std::abs(R1.mat(x, y) - acc) < 1e-12);
        }
}

TEST_CASE("klimontovich expectations: identity, projector duality, product overlap") {
    auto Psi = random_bosonic(g32, 3, 21, 1.0);
    const int M = g32.points;
    CHECK(std::abs(klimontovich_expectation(Psi, Eigen::MatrixXcd::Identity(M, M)) - 1.0) < 1e-10);

    auto phi = random_smooth_state(g32, 3, 77, 1.0);
    const auto P = projector(phi);
    const auto R1 = reduce_density(Psi, 1);
    Eigen::Map<const Eigen::VectorXcd> pv(phi.amp.data(), M);
    const cplx rhs = (pv.adjoint() * (R1.mat * pv))(0, 0) * g32.spacing();
    CHECK(std::abs(klimontovich_expectation(Psi, P) - rhs) < 1e-10);

    auto psi = gaussian_packet(g32, 0.0, 0.6, 0.5, 1.0);
    auto Prod = tensor_power(psi, 3);
    cplx ov = 0.0;
    for (int i = 0; i < M; ++i) ov += std::conj(phi.amp[i]) * psi.amp[i];
    ov *= g32.spacing();
    CHECK(std::abs(klimontovich_expectation(Prod, P) - std::norm(ov)) < 1e-10);
}

TEST_CASE("interaction bracket: zero potential impossible, identity cancels") {
    auto V = cos_potential();
    auto Psi = random_bosonic(g32, 2, 33, 1.0);
    const int M = g32.points;

    auto zero = builtin_potential(Family::zero, {}, 1);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(M, M);
    CHECK_THROWS(interaction_bracket_expectation(Psi, A, zero));

    // A = identity: the two terms cancel after the omega sum.
    CHECK(std::abs(interaction_bracket_expectation(Psi, A, V)) < 1e-12);

    // A diagonal (multiplication operator): commutes with every E_omega, so
    // the bracket reduces to commutators of averaged multiplications: zero.
    Eigen::VectorXcd d(M);
    for (int i = 0; i < M; ++i) d(i) = std::cos(g32.x(i));
    CHECK(std::abs(interaction_bracket_expectation(Psi, d.asDiagonal().toDenseMatrix(), V)) <
          1e-12);
}

TEST_CASE("qklim residual: the klimontovich evolution equation holds to O(dt^2)") {
    const double hbar = 1.0, dt = 1e-3, t0 = 0.2;
    auto V = cos_potential();
    auto Psi0 = random_bosonic(g32, 2, 55, hbar);

    const int M = g32.points;
    for (int obs = 0; obs < 5; ++obs) {
        auto phi = random_smooth_state(g32, 2, 1000 + obs, hbar);
        const auto A = projector(phi);

        auto at = [&](double t) {
            return nbody_schrodinger_evolve(Psi0, V, t, dt).back();
        };
        const auto Pm = at(t0 - dt);
        const auto P0 = at(t0);
        const auto Pp = at(t0 + dt);
        const cplx fd = cplx(0.0, hbar) * (klimontovich_expectation(Pp, A) -
                                           klimontovich_expectation(Pm, A)) /
                        (2.0 * dt);

        // ad*(-hbar^2/2 Delta) M_N (A) = -M_N([H0, A]).
        Eigen::MatrixXcd H0 = Eigen::MatrixXcd::Zero(M, M);
        {
            Eigen::MatrixXcd F(M, M);
            for (int n = 0; n < M; ++n)
                for (int j = 0; j < M; ++j)
                    F(n, j) = std::polar(1.0 / std::sqrt(static_cast<double>(M)),
                                         -g32.k(n) * g32.x(j));
            Eigen::VectorXcd kin(M);
            for (int n = 0; n < M; ++n) kin(n) = 0.5 * hbar * hbar * g32.k(n) * g32.k(n);
            H0 = F.adjoint() * kin.asDiagonal() * F;
        }
        const Eigen::MatrixXcd comm = H0 * A - A * H0;
        const cplx ad_term = -klimontovich_expectation(P0, comm);
        const cplx bracket = interaction_bracket_expectation(P0, A, V);
        const cplx residual = fd - (ad_term - bracket);
        CHECK(std::abs(residual) <= 10.0 * dt * dt + 1e-8);
    }
}

TEST_CASE("mf_error: identical states, mixed pickl value") {
    auto psi = gaussian_packet(g32, 0.1, 0.2, 0.6, 1.0);
    auto Psi = tensor_power(psi, 3);
    auto e = mf_error(Psi, psi);
    CHECK(e.op_norm < 1e-10);
    CHECK(std::abs(e.pickl) < 1e-10);

    auto p1 = fourier_mode_state(g32, 0, 1.0);
    auto p2 = fourier_mode_state(g32, 2, 1.0);
    WaveFunction mix;
    mix.grid = g32;
    mix.particles = 2;
    mix.scale = 1.0;
    mix.amp.resize(mix.expected_size());
    const int M = g32.points;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            mix.amp[static_cast<std::size_t>(i) * M + j] =
                (p1.amp[i] * p1.amp[j] + p2.amp[i] * p2.amp[j]) / std::sqrt(2.0);
    auto e2 = mf_error(mix, p1);
    CHECK(e2.pickl == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("checkpoint container round-trips") {
    auto psi = gaussian_packet(g32, -0.3, 1.1, 0.8, 0.5);
    auto Psi = tensor_power(psi, 2);
    Psi.time = 0.75;
    const std::string path = "/tmp/mflab_test_state.mfq1";
    save_wavefunction(path, Psi);
    auto back = load_wavefunction(path);
    CHECK(back.particles == 2);
    CHECK(back.grid.points == Psi.grid.points);
    CHECK(back.grid.length == Psi.grid.length);
    CHECK(back.scale == Psi.scale);
    CHECK(back.time == Psi.time);
    CHECK(back.amp == Psi.amp);
    std::remove(path.c_str());
}
