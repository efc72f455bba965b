#include "starnet/dynamics.hpp"
#include "starnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace starnet {

namespace {

// Hann-tapered, mean-removed copy of the signal.
std::vector<double> taper(const std::vector<double>& s) {
    const std::size_t n = s.size();
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = n > 1 ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                       static_cast<double>(n - 1))
                               : 1.0;
        out[i] = (s[i] - mean) * w;
    }
    return out;
}

double power_of_tapered(const std::vector<double>& t, const std::vector<double>& w, double omega) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < t.size(); ++i) {
        acc += w[i] * std::polar(1.0, -omega * t[i]);
    }
    const double n = static_cast<double>(t.size());
    return std::norm(acc) / (n * n);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b, std::size_t from) {
    const std::size_t n = a.size() - from;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = from; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = from; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) {
        throw Error(ErrorCode::diagnostics, "sync_metrics: signal is constant over the window");
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace

double spectral_power(const std::vector<double>& t, const std::vector<double>& s, double omega) {
    if (t.size() != s.size() || t.size() < 2) {
        throw Error(ErrorCode::contract, "spectral_power: need matching series of length >= 2");
    }
    return power_of_tapered(t, taper(s), omega);
}

double dominant_frequency(const std::vector<double>& t, const std::vector<double>& s) {
    if (t.size() != s.size() || t.size() < 4) {
        throw Error(ErrorCode::contract, "dominant_frequency: need matching series of length >= 4");
    }
    const std::vector<double> w = taper(s);
    const double span = t.back() - t.front();
    const double dt = span / static_cast<double>(t.size() - 1);
    const double nyquist = std::numbers::pi / dt;
    const double step = std::numbers::pi / span; // 2x oversampled frequency grid

    double best_w = step;
    double best_p = -1.0;
    for (double omega = step; omega <= nyquist; omega += step) {
        const double p = power_of_tapered(t, w, omega);
        if (p > best_p) {
            best_p = p;
            best_w = omega;
        }
    }
    if (best_p <= 0.0) throw Error(ErrorCode::diagnostics, "dominant_frequency: signal has no spectral content");

    // golden-section refinement inside the bracketing bins
    double lo = std::max(best_w - step, 0.5 * step);
    double hi = best_w + step;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double pa = power_of_tapered(t, w, a);
    double pb = power_of_tapered(t, w, b);
    for (int it = 0; it < 60 && hi - lo > 1e-12 * best_w; ++it) {
        if (pa > pb) {
            hi = b;
            b = a;
            pb = pa;
            a = hi - ratio * (hi - lo);
            pa = power_of_tapered(t, w, a);
        } else {
            lo = a;
            a = b;
            pa = pb;
            b = lo + ratio * (hi - lo);
            pb = power_of_tapered(t, w, b);
        }
    }
    return 0.5 * (lo + hi);
}

SyncMetrics sync_metrics(const Trajectory& traj, const std::vector<std::string>& labels, double window) {
    if (labels.size() < 2) throw Error(ErrorCode::contract, "sync_metrics: need at least two series");
    if (!(window > 0.0 && window <= 1.0)) {
        throw Error(ErrorCode::contract, "sync_metrics: window must lie in (0, 1]");
    }
    if (traj.times.size() < 4) throw Error(ErrorCode::contract, "sync_metrics: trajectory too short");

    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    const double start = t1 - window * (t1 - t0);
    const auto first = static_cast<std::size_t>(
        std::lower_bound(traj.times.begin(), traj.times.end(), start) - traj.times.begin());
    if (traj.times.size() - first < 4) {
        throw Error(ErrorCode::diagnostics, "sync_metrics: window holds fewer than four samples");
    }
    const std::vector<double> tw(traj.times.begin() + static_cast<std::ptrdiff_t>(first), traj.times.end());
    const double span = tw.back() - tw.front();

    SyncMetrics out;
    out.labels = labels;
    out.window_start = tw.front();
    for (const auto& label : labels) {
        const auto& s = traj.series(label);
        const std::vector<double> sw(s.begin() + static_cast<std::ptrdiff_t>(first), s.end());
        const double w = dominant_frequency(tw, sw);
        if (span * w / (2.0 * std::numbers::pi) < 4.0) {
            throw Error(ErrorCode::diagnostics, "sync_metrics: window shorter than four dominant periods of " + label);
        }
        out.dominant_freqs.push_back(w);
    }
    const auto [lo, hi] = std::minmax_element(out.dominant_freqs.begin(), out.dominant_freqs.end());
    out.max_freq_difference = *hi - *lo;

    out.min_abs_correlation = 1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            const double r = pearson(traj.series(labels[i]), traj.series(labels[j]), first);
            out.pairs.push_back({labels[i], labels[j], r});
            out.min_abs_correlation = std::min(out.min_abs_correlation, std::abs(r));
        }
    }
    return out;
}

} // namespace starnet
