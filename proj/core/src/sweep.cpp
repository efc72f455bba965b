#include "starnet/sweep.hpp"

#include "starnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace starnet {

NetworkParams with_couplings(NetworkParams base, double g, const std::vector<double>& offsets) {
    if (offsets.size() != base.n) {
        throw Error(ErrorCode::parameter, "sweep.offsets: expected " + std::to_string(base.n) + " entries");
    }
    base.couplings.resize(base.n);
    for (std::size_t i = 0; i < base.n; ++i) base.couplings[i] = g + offsets[i];
    return base;
}

SweepPoint sweep_point(const NetworkParams& base, double g, const std::vector<double>& offsets) {
    const NetworkParams params = with_couplings(base, g, offsets);
    const PotentialDecomposition decomp = build_potential(params);
    const ModeDecomposition modes = analyze_modes(decomp);
    const ExactSpectrum exact = exact_diagonalize(decomp);

    SweepPoint pt;
    pt.g = g;
    pt.g_av = decomp.g_av;
    pt.k_av = decomp.k_av;
    pt.xi = decomp.xi.value_or(std::numeric_limits<double>::infinity());
    if (exact.eigenvalues.minCoeff() <= 0.0) {
        throw Error(ErrorCode::instability,
                    "frequency_sweep: non-positive eigenvalue at g = " + std::to_string(g));
    }
    const auto order = exact.declared_order();
    const auto dim = exact.eigenvalues.size();
    pt.freqs_pert = modes.freqs;
    pt.freqs_exact.resize(dim);
    pt.vecs_exact.resize(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(j)]);
        pt.freqs_exact(j) = exact.freqs(src);
        pt.vecs_exact.col(j) = exact.eigenvectors.col(src);
    }
    return pt;
}

namespace {

double protected_spread(const Eigen::VectorXd& w) {
    if (w.size() < 4) return 0.0;
    const auto prot = w.tail(w.size() - 2);
    return prot.maxCoeff() - prot.minCoeff();
}

// Reorder the exact columns of `cur` to follow the identities in `prev`.
void track(const SweepPoint& prev, SweepPoint& cur) {
    const auto dim = cur.vecs_exact.cols();
    const Eigen::MatrixXd overlap = (prev.vecs_exact.transpose() * cur.vecs_exact).cwiseAbs();
    std::vector<Eigen::Index> assign(static_cast<std::size_t>(dim), -1);
    std::vector<bool> row_used(static_cast<std::size_t>(dim), false);
    std::vector<bool> col_used(static_cast<std::size_t>(dim), false);
    // greedy on the globally largest remaining overlap
    for (Eigen::Index round = 0; round < dim; ++round) {
        double best = -1.0;
        Eigen::Index bi = 0, bj = 0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (row_used[static_cast<std::size_t>(i)]) continue;
            for (Eigen::Index j = 0; j < dim; ++j) {
                if (col_used[static_cast<std::size_t>(j)]) continue;
                if (overlap(i, j) > best) {
                    best = overlap(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        row_used[static_cast<std::size_t>(bi)] = true;
        col_used[static_cast<std::size_t>(bj)] = true;
        assign[static_cast<std::size_t>(bi)] = bj;
    }
    Eigen::VectorXd w(dim);
    Eigen::MatrixXd v(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto j = assign[static_cast<std::size_t>(i)];
        w(i) = cur.freqs_exact(j);
        v.col(i) = cur.vecs_exact.col(j);
        if (v.col(i).dot(prev.vecs_exact.col(i)) < 0.0) v.col(i) = -v.col(i);
    }
    cur.freqs_exact = w;
    cur.vecs_exact = v;
}

} // namespace

SweepResult frequency_sweep(const NetworkParams& base, double g_min, double g_max,
                            std::size_t steps, const std::vector<double>& offsets) {
    if (!(g_min > 0.0) || !(g_max > g_min)) {
        throw Error(ErrorCode::parameter, "sweep: need 0 < g_min < g_max");
    }
    if (steps < 2) throw Error(ErrorCode::parameter, "sweep.steps: need at least 2 grid points");
    if (offsets.size() != base.n) {
        throw Error(ErrorCode::parameter, "sweep.offsets: expected " + std::to_string(base.n) + " entries");
    }
    SweepResult result;
    result.offsets = offsets;
    const double lmin = std::log(g_min);
    const double lmax = std::log(g_max);
    for (std::size_t i = 0; i < steps; ++i) {
        double g = std::exp(lmin + (lmax - lmin) * static_cast<double>(i) / static_cast<double>(steps - 1));
        if (i == 0) g = g_min;
        if (i + 1 == steps) g = g_max;
        result.points.push_back(sweep_point(base, g, offsets));
    }
    for (std::size_t i = 1; i < result.points.size(); ++i) track(result.points[i - 1], result.points[i]);
    for (auto& pt : result.points) {
        pt.spread_exact = protected_spread(pt.freqs_exact);
        pt.spread_pert = protected_spread(pt.freqs_pert);
    }
    return result;
}

ScalingFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw Error(ErrorCode::degenerate_fit, "fit_line: need at least three points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw Error(ErrorCode::degenerate_fit, "fit_line: abscissae are all equal");
    ScalingFit fit;
    fit.exponent = sxy / sxx;
    fit.log_constant = my - fit.exponent * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.log_constant - fit.exponent * x[i];
        sse += r * r;
    }
    fit.stderr_exponent = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    fit.points = n;
    return fit;
}

ScalingFit scaling_fit(const SweepResult& result, double g_threshold) {
    std::vector<double> x, y;
    bool any_positive = false;
    for (const auto& pt : result.points) {
        if (pt.g < g_threshold) continue;
        if (pt.spread_exact > 0.0) {
            any_positive = true;
            x.push_back(std::log(pt.g_av + pt.k_av));
            y.push_back(std::log(pt.spread_exact));
        }
    }
    if (!any_positive) throw Error(ErrorCode::degenerate_fit, "scaling_fit: every spread is zero");
    if (x.size() < 5) throw Error(ErrorCode::degenerate_fit, "scaling_fit: fewer than five points above threshold");
    return fit_line(x, y);
}

} // namespace starnet
