// acceptance.cpp — end-to-end acceptance criteria, one PASS/FAIL line each
//
// Exit status is the number of failed criteria (0 when all pass).

#include "oracles.hpp"
#include "starnet/starnet.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace starnet;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

NetworkParams three_outer() {
    NetworkParams p;
    p.n = 3;
    p.mass = 1.0;
    p.hooke = {1.0, 0.2, 10.0, 1.0};
    p.couplings = {0.9, 1.0, 1.1};
    return p;
}

const std::vector<double> kOffsets = {0.9, 1.0, 1.1};

double protected_spread(const SweepPoint& pt) {
    const auto w = pt.freqs_exact.tail(pt.freqs_exact.size() - 2);
    return w.maxCoeff() - w.minCoeff();
}

Outcome convergence() {
    const auto sweep = frequency_sweep(three_outer(), 1.0, 100.0, 50, kOffsets);
    bool monotone = true;
    for (std::size_t i = 1; i < sweep.points.size(); ++i) {
        if (sweep.points[i - 1].g < 10.0) continue;
        monotone = monotone && sweep.points[i].spread_exact < sweep.points[i - 1].spread_exact;
    }
    const double ratio = protected_spread(sweep_point(three_outer(), 100.0, kOffsets)) /
                         protected_spread(sweep_point(three_outer(), 10.0, kOffsets));
    const double target = 0.356;
    const bool ok = monotone && std::abs(ratio - target) <= 0.15 * target;
    return {ok, fmt("monotone=%g ratio=%.4f target=0.356+-15%%", monotone ? 1.0 : 0.0, ratio)};
}

Outcome scaling_law() {
    const auto sweep = frequency_sweep(three_outer(), 1.0, 100.0, 50, kOffsets);
    const auto fit = scaling_fit(sweep, 20.0);
    const bool ok = std::abs(fit.exponent + 0.5) <= 0.1;
    return {ok, fmt("exponent=%.4f stderr=%.4f points=%g", fit.exponent, fit.stderr_exponent,
                    static_cast<double>(fit.points))};
}

Outcome perturbation_order() {
    auto p = three_outer();
    p.couplings = {20.9, 21.0, 21.1};
    const auto base = build_potential(p);
    std::vector<double> xs, ys;
    for (int i = 0; i <= 8; ++i) {
        const double s = std::pow(10.0, -3.0 + 0.25 * i);
        const auto d = scale_perturbation(base, s);
        Eigen::VectorXd k = analyze_modes(d).k_corr;
        std::sort(k.data(), k.data() + k.size());
        const auto ex = exact_diagonalize(d);
        xs.push_back(std::log(s));
        ys.push_back(std::log((k - ex.eigenvalues).cwiseAbs().maxCoeff()));
    }
    const auto fit = fit_line(xs, ys);
    return {std::abs(fit.exponent - 2.0) <= 0.3, fmt("slope=%.4f target=2.0+-0.3", fit.exponent)};
}

Outcome uniform_exactness() {
    NetworkParams p;
    p.n = 5;
    p.hooke.assign(6, 1.0);
    p.couplings.assign(5, 10.0);
    const auto d = build_potential(p);
    const auto ex = exact_diagonalize(d);
    Eigen::VectorXd expected(6);
    expected << 1, 11, 11, 11, 11, 61;
    const double exact_err = (ex.eigenvalues - expected).cwiseAbs().maxCoeff();
    Eigen::VectorXd k = analyze_modes(d).k_corr;
    std::sort(k.data(), k.data() + k.size());
    const double pert_err = (k - ex.eigenvalues).cwiseAbs().maxCoeff();
    return {exact_err <= 1e-10 && pert_err <= 1e-10,
            fmt("exact_err=%.3g pert_err=%.3g", exact_err, pert_err)};
}

Outcome canonical_consistency() {
    const std::uint64_t seed = oracle::announce_seed("acceptance.canonical", 20260101);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double comm = 0.0, symp = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto p = oracle::random_network(rng, 1 + static_cast<std::size_t>(i % 6), 1.0 + 30.0 * unit(rng), 1.0);
        const auto t = build_canonical_transform(analyze_modes(build_potential(p)), p);
        comm = std::max(comm, t.commutation_defect());
        symp = std::max(symp, bogoliubov_map(t).symplectic_defect());
    }
    return {comm <= 1e-10 && symp <= 1e-10, fmt("commutation=%.3g symplectic=%.3g", comm, symp)};
}

Outcome thermalization() {
    NetworkParams p;
    p.n = 3;
    p.hooke = {1.0, 1.2, 0.9, 1.1};
    p.couplings = {10.0, 10.5, 9.8};
    p.bath_rate = 0.5;
    p.bath_temp = 2.0;
    const auto modes = analyze_modes(build_potential(p));
    const auto t = build_canonical_transform(modes, p);
    const auto diss = make_dissipation(modes, p);
    const double t_end = 50.0 / std::min(diss.gamma_plus, diss.gamma_minus);

    const auto mixed = init_state({ModePrep::coherent({1.0, -0.5}), ModePrep::thermal(2.0),
                                   ModePrep::coherent({0.3, 0.0}), ModePrep::vacuum()},
                                  StateFrame::normal);
    const auto occ = occupations(evolve_gaussian(mixed, diss, t, t_end));
    const double occ_err = std::max(std::abs(occ(0) - diss.nbar_plus), std::abs(occ(1) - diss.nbar_minus));

    const auto prot = init_state({ModePrep::vacuum(), ModePrep::vacuum(), ModePrep::coherent({0.8, 0.2}),
                                  ModePrep::coherent({-0.4, 0.6})},
                                 StateFrame::normal);
    const auto energy = [&](const GaussianState& s) {
        const auto n = occupations(s);
        return t.freqs_normal(2) * n(2) + t.freqs_normal(3) * n(3);
    };
    const double e0 = energy(prot);
    double drift = 0.0;
    for (double time : linear_grid(t_end, 51)) drift = std::max(drift, std::abs(energy(evolve_gaussian(prot, diss, t, time)) - e0));
    return {occ_err <= 1e-6 && drift <= 1e-10, fmt("occupation_err=%.3g energy_drift=%.3g t=%.1f", occ_err, drift, t_end)};
}

Outcome oracle_equivalence() {
    NetworkParams p;
    p.n = 2;
    p.hooke = {1.0, 1.2, 1.0};
    p.couplings = {10.0, 10.0};
    p.bath_rate = 0.1;
    const auto modes = analyze_modes(build_potential(p));
    const auto t = build_canonical_transform(modes, p);
    const auto diss = make_dissipation(modes, p);
    const std::vector<ModePrep> preps(3, ModePrep::coherent({0.5, 0.0}));
    const auto times = linear_grid(20.0, 201);
    FockOptions opts;
    opts.cutoff = 8;
    const auto fock = fock_oracle_evolve(t, diss, preps, times, opts);
    const auto gauss = position_trajectory(init_state(preps, StateFrame::normal), t, diss, times);
    double worst = 0.0;
    for (const char* l : {"x_1", "x_2", "x_3"}) {
        const auto& a = fock.trajectory.series(l);
        const auto& b = gauss.series(l);
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return {worst <= 1e-3 && fock.max_trace_deviation < 1e-6,
            fmt("max_dx=%.3g trace_dev=%.3g min_eig=%.3g step=%g", worst, fock.max_trace_deviation,
                fock.min_eigenvalue, fock.step)};
}

// Outer oscillators 1 and 2 displaced by the same length, everything else in vacuum.
SyncMetrics synchronization_at(double g) {
    NetworkParams p = three_outer();
    p.bath_rate = 1.0;
    for (std::size_t i = 0; i < p.n; ++i) p.couplings[i] = g + kOffsets[i];
    const auto decomp = build_potential(p);
    const auto modes = analyze_modes(decomp);
    const auto t = build_exact_transform(exact_diagonalize(decomp), p);
    const auto diss = make_dissipation(modes, t, p);
    const double x0 = 1.0;
    std::vector<ModePrep> preps(4, ModePrep::vacuum());
    for (std::size_t l = 0; l < 2; ++l) {
        const double w = t.freqs_physical(static_cast<Eigen::Index>(l));
        preps[l] = ModePrep::coherent({x0 * std::sqrt(p.mass * w / 2.0), 0.0});
    }
    const auto state = init_state(preps, StateFrame::physical);
    const auto traj = position_trajectory(state, t, diss, linear_grid(100.0 / p.bath_rate, 4001));
    return sync_metrics(traj, {"x_1", "x_2", "x_3"}, 0.25);
}

Outcome synchronization() {
    const auto strong = synchronization_at(100.0);
    const auto weak = synchronization_at(1.0);
    double weak_max = 0.0;
    for (const auto& pr : weak.pairs) weak_max = std::max(weak_max, std::abs(pr.correlation));
    return {strong.min_abs_correlation >= 0.99 && weak_max < 0.9,
            fmt("g=100 min|r|=%.4f  g=1 max|r|=%.4f min|r|=%.4f", strong.min_abs_correlation, weak_max,
                weak.min_abs_correlation)};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "protected frequencies converge", 1.0, convergence},
        {2, "squeezing scaling law", 1.0, scaling_law},
        {3, "perturbation order", 1.0, perturbation_order},
        {4, "uniform-model exactness", 0.1, uniform_exactness},
        {5, "canonical consistency", 1.0, canonical_consistency},
        {6, "thermalization endpoint", 1.0, thermalization},
        {7, "oracle equivalence", 60.0, oracle_equivalence},
        {8, "synchronization", 5.0, synchronization},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s [%d] %s: %s; runtime %.3f s (budget %g s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
