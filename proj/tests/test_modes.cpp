#include <doctest.h>

#include "oracles.hpp"
#include "starnet/error.hpp"
#include "starnet/linalg.hpp"
#include "starnet/modes.hpp"
#include "starnet/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace starnet;

namespace {

NetworkParams net(std::vector<double> k, std::vector<double> g, double m = 1.0) {
    NetworkParams p;
    p.n = g.size();
    p.mass = m;
    p.hooke = std::move(k);
    p.couplings = std::move(g);
    return p;
}

Eigen::VectorXd sorted(Eigen::VectorXd v) {
    std::sort(v.data(), v.data() + v.size());
    return v;
}

double max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("declared mode order and tags") {
    CHECK(mode_kind(0) == ModeKind::leaking_plus);
    CHECK(mode_kind(1) == ModeKind::leaking_minus);
    CHECK(mode_kind(2) == ModeKind::protected_mode);
    CHECK(mode_tag(0) == "plus");
    CHECK(mode_tag(1) == "minus");
    CHECK(mode_tag(2) == "0_1");
    CHECK(mode_tag(4) == "0_3");
}

TEST_CASE("uniform two-oscillator eigensystem") {
    const auto d = build_potential(net({1, 1, 1}, {1, 1}));
    const auto m = analyze_modes(d);
    CHECK(m.g_plus == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m.g_minus == doctest::Approx(-1.0).epsilon(1e-14));

    Eigen::VectorXd plus(3), minus(3), zero(3);
    plus << -1, -1, 2;
    minus << 1, 1, 1;
    zero << 1, -1, 0;
    CHECK(max_diff(m.vec_plus, plus / std::sqrt(6.0)) < 1e-14);
    CHECK(max_diff(m.vec_minus, minus / std::sqrt(3.0)) < 1e-14);
    CHECK(max_diff(m.zero_basis.col(0), zero / std::sqrt(2.0)) < 1e-14);

    Eigen::VectorXd k(3);
    k << 4, 1, 2;
    CHECK(max_diff(m.k_corr, k) < 1e-13);
    CHECK(max_diff(m.freqs, k.cwiseSqrt()) < 1e-13);
    CHECK(m.dk_plus == 0.0);
    CHECK(m.dk_minus == 0.0);
    CHECK(std::abs(m.dk_zero(0)) < 1e-15);
    CHECK(std::tan(m.theta_mix) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_FALSE(m.regime_warning);
}

TEST_CASE("uniform couplings give G+ = N g and G- = -g") {
    for (std::size_t n : {1u, 2u, 3u, 6u, 10u}) {
        for (double g : {0.5, 3.0, 40.0}) {
            const auto d = build_potential(net(std::vector<double>(n + 1, 2.0), std::vector<double>(n, g)));
            const auto m = g_eigensystem(d);
            CHECK(m.g_plus == doctest::Approx(static_cast<double>(n) * g).epsilon(1e-13));
            CHECK(m.g_minus == doctest::Approx(-g).epsilon(1e-13));
        }
    }
}

TEST_CASE("decoupled outer oscillator gives an exact zero mode") {
    const auto d = build_potential(net({1, 1, 1}, {1, 0}));
    const auto m = g_eigensystem(d);
    REQUIRE(m.zero_basis.cols() == 1);
    Eigen::VectorXd e2(3);
    e2 << 0, 1, 0;
    CHECK(max_diff(m.zero_basis.col(0), e2) < 1e-15);
    CHECK(max_diff(m.givens_basis.col(0).cwiseAbs(), e2) < 1e-15);
    CHECK(max_diff(analyze_modes(d).zero_basis.col(0), e2) < 1e-15);
}

TEST_CASE("detuned pair: first-order protected constant") {
    const auto d = build_potential(net({1, 1.2, 1}, {10, 10}));
    const auto m = analyze_modes(d);
    CHECK(m.dk_zero(0) == doctest::Approx(1.0 / 30.0).epsilon(1e-12));
    CHECK(m.k_corr(2) == doctest::Approx(11.1).epsilon(1e-13));
    CHECK(m.freqs(2) == doctest::Approx(std::sqrt(11.1)).epsilon(1e-13));
    // exact V spectrum (independently diagonalized, frozen)
    const auto ex = exact_diagonalize(d);
    CHECK(ex.eigenvalues(0) == doctest::Approx(1.06592958).epsilon(1e-8));
    CHECK(ex.eigenvalues(1) == doctest::Approx(11.10049496).epsilon(1e-8));
    CHECK(ex.eigenvalues(2) == doctest::Approx(31.03357546).epsilon(1e-8));
    // O(xi^2) agreement
    const double xi = *d.xi;
    CHECK(std::abs(m.k_corr(2) - ex.eigenvalues(1)) < 10.0 * xi * xi * d.g_av);
    CHECK(std::abs(m.k_corr(0) - ex.eigenvalues(2)) < 10.0 * xi * xi * d.g_av);
    CHECK(std::abs(m.k_corr(1) - ex.eigenvalues(0)) < 10.0 * xi * xi * d.g_av);
}

TEST_CASE("uniform N=5 network is exact at first order") {
    const auto d = build_potential(net(std::vector<double>(6, 1.0), std::vector<double>(5, 10.0)));
    const auto ex = exact_diagonalize(d);
    Eigen::VectorXd expected(6);
    expected << 1, 11, 11, 11, 11, 61;
    CHECK(max_diff(ex.eigenvalues, expected) < 1e-10);
    const auto m = analyze_modes(d);
    CHECK(max_diff(sorted(m.k_corr), expected) < 1e-10);
    CHECK(m.k_corr(0) == doctest::Approx(61.0).epsilon(1e-13));
    CHECK(m.k_corr(1) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("exact diagonalization examples") {
    Eigen::MatrixXd v(3, 3);
    v << 2, 0, -1, 0, 2, -1, -1, -1, 3;
    const auto ex = exact_diagonalize(v, 1.0);
    CHECK(max_diff(ex.eigenvalues, Eigen::Vector3d(1, 2, 4)) < 1e-13);
    CHECK(ex.max_residual < 1e-10);
    const auto order = ex.declared_order();
    CHECK(order == std::vector<std::size_t>{2, 0, 1});

    Eigen::MatrixXd diag = Eigen::Vector4d(3, 1, 4, 2).asDiagonal();
    const auto exd = exact_diagonalize(diag, 2.0);
    CHECK(max_diff(exd.eigenvalues, Eigen::Vector4d(1, 2, 3, 4)) == 0.0);
    CHECK(exd.freqs(3) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("degenerate zero sector is ordered and orthogonal") {
    // three equal couplings: the restriction of D to the zero sector is a full 2x2 block
    const auto d = build_potential(net({1.0, 1.3, 0.8, 1.0}, {20, 20, 20}));
    const auto m = analyze_modes(d);
    REQUIRE(m.dk_zero.size() == 2);
    CHECK(m.dk_zero(0) <= m.dk_zero(1));
    const Eigen::MatrixXd o = m.zero_rotation;
    CHECK(linalg::max_abs(o * o.transpose() - Eigen::MatrixXd::Identity(2, 2)) < 1e-12);
    const Eigen::MatrixXd restricted = m.givens_basis.transpose() * d.d_matrix * m.givens_basis;
    const auto ref = oracle::jacobi_eigenvalues(restricted);
    CHECK(max_diff(m.dk_zero, ref) < 1e-13);
    const Eigen::MatrixXd rotated = m.zero_basis.transpose() * d.d_matrix * m.zero_basis;
    CHECK(linalg::max_abs(rotated - Eigen::MatrixXd(m.dk_zero.asDiagonal())) < 1e-13);
}

TEST_CASE("errors") {
    const auto d0 = build_potential(net({1, 1, 1}, {0, 0}));
    try {
        g_eigensystem(d0);
        FAIL("expected degenerate network");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_network);
    }
    auto m = g_eigensystem(build_potential(net({1, 1, 1}, {1, 1})));
    auto undefined = d0;
    undefined.xi.reset();
    try {
        perturb_corrections(m, undefined);
        FAIL("expected perturbation_inapplicable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::perturbation_inapplicable);
    }
    const auto strong = analyze_modes(build_potential(net({1, 5, 1}, {1, 1})));
    CHECK(strong.regime_warning);
}

TEST_CASE("property: root identities, orthonormal frame, residuals") {
    const std::uint64_t seed = oracle::announce_seed("modes.identities", 0x5eed0002);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 8;
        auto p = oracle::random_network(rng, n, 0.2 + 30.0 * unit(rng), 3.0);
        if (n > 1 && trial % 5 == 0) p.couplings[0] = 0.0; // decoupled oscillator, still nondegenerate
        const auto d = build_potential(p);
        const auto m = analyze_modes(d);
        const double scale = std::max(std::abs(m.g_plus), std::abs(m.g_minus));
        CHECK(std::abs(m.g_plus + m.g_minus - d.delta) <= 1e-12 * scale);
        CHECK(std::abs(m.g_plus * m.g_minus + d.lambda_sq) <= 1e-12 * scale * scale);
        CHECK(m.g_plus >= 0.0);
        CHECK(m.g_minus <= 0.0);

        const Eigen::MatrixXd b = m.modal_matrix();
        const auto dim = static_cast<Eigen::Index>(n + 1);
        CHECK(linalg::max_abs(b * b.transpose() - Eigen::MatrixXd::Identity(dim, dim)) < 1e-10);
        for (Eigen::Index j = 0; j < m.zero_basis.cols(); ++j) {
            CHECK(m.zero_basis(dim - 1, j) == 0.0);
            CHECK(m.givens_basis(dim - 1, j) == 0.0);
        }
        const Eigen::MatrixXd& g = d.g_matrix;
        CHECK((g * m.vec_plus - m.g_plus * m.vec_plus).norm() <= 1e-10 * scale);
        CHECK((g * m.vec_minus - m.g_minus * m.vec_minus).norm() <= 1e-10 * scale);
        if (m.givens_basis.cols() > 0) CHECK(linalg::max_abs(g * m.givens_basis) <= 1e-10 * scale);

        const auto ex = exact_diagonalize(d);
        CHECK(ex.max_residual <= 1e-10);
        const auto ref = oracle::jacobi_eigenvalues(d.v);
        CHECK(max_diff(ex.eigenvalues, ref) <= 1e-10 * linalg::max_abs(d.v));
    }
}

TEST_CASE("property: first-order error scales quadratically in the perturbation") {
    const auto base = build_potential(net({1.0, 0.2, 10.0, 1.0}, {20.9, 21.0, 21.1}));
    std::vector<double> xs, ys;
    for (double ls = -3.0; ls <= -1.0 + 1e-9; ls += 0.25) {
        const double s = std::pow(10.0, ls);
        const auto d = scale_perturbation(base, s);
        const auto m = analyze_modes(d);
        const auto ex = exact_diagonalize(d);
        xs.push_back(std::log(s));
        ys.push_back(std::log(max_diff(sorted(m.k_corr), ex.eigenvalues)));
    }
    const auto fit = fit_line(xs, ys);
    MESSAGE("slope = " << fit.exponent);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("squeezing estimate") {
    // m = 1, k_av = 1, g = 99, protected corrections -0.1 and +0.1
    ModeDecomposition m;
    m.mass = 1.0;
    m.vec_plus = Eigen::VectorXd::Zero(4);
    m.dk_zero = Eigen::Vector2d(-0.1, 0.1);
    PotentialDecomposition d;
    d.k_av = 1.0;
    d.g_av = 99.0;
    d.shift = 100.0;
    d.mass = 1.0;
    d.v = 100.0 * Eigen::MatrixXd::Identity(4, 4);
    const auto est = squeezing_estimate(m, d);
    CHECK(est.approx_freqs(0) == doctest::Approx(10.0 * (1.0 - 0.1 / 200.0)).epsilon(1e-14));
    CHECK(est.approx_freqs(1) == doctest::Approx(10.0 * (1.0 + 0.1 / 200.0)).epsilon(1e-14));
    CHECK(est.spread_approx == doctest::Approx(0.01).epsilon(1e-12));

    const auto flat = build_potential(net({1, 1, 1, 1}, {5, 5, 5}));
    const auto e0 = squeezing_estimate(analyze_modes(flat), flat);
    CHECK(e0.spread_approx == 0.0);
    CHECK(e0.spread_exact < 1e-12);

    const auto single = build_potential(net({1, 2}, {3}));
    const auto e1 = squeezing_estimate(analyze_modes(single), single);
    CHECK(e1.no_pair);
    CHECK(e1.spread_approx == 0.0);
}

TEST_CASE("property: spread times sqrt(g + k_av) is constant at strong coupling") {
    const std::vector<double> k = {1.0, 0.2, 10.0, 1.0};
    double max_dk = 0.0;
    const double k_av = (1.0 + 0.2 + 10.0 + 1.0) / 4.0;
    for (double ki : k) max_dk = std::max(max_dk, std::abs(ki - k_av));
    std::vector<double> scaled;
    for (double g = 10.0 * max_dk; g <= 4000.0; g *= 1.7) {
        const auto d = build_potential(net(k, {g, g, g}));
        const auto est = squeezing_estimate(analyze_modes(d), d);
        scaled.push_back(est.spread_exact * std::sqrt(g + k_av));
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    CHECK(*hi / *lo < 1.10);
}
