// sweep.hpp — coupling-strength scans and the frequency-squeezing fit

#pragma once

#include "starnet/model.hpp"
#include "starnet/modes.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace starnet {

struct SweepPoint {
    double g{0.0};     // sweep variable; couplings are g + offset_i
    double g_av{0.0};
    double k_av{0.0};
    double xi{0.0};
    Eigen::VectorXd freqs_pert;  // declared order (+, -, 0_j)
    Eigen::VectorXd freqs_exact; // declared order, tracked by eigenvector overlap
    Eigen::MatrixXd vecs_exact;  // columns in declared order
    double spread_exact{0.0};    // max - min over protected modes
    double spread_pert{0.0};
};

struct ScalingFit {
    double exponent{0.0};
    double stderr_exponent{0.0};
    double log_constant{0.0};
    std::size_t points{0};
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<double> offsets;
};

// Couplings g + offset_i at one value of g.
NetworkParams with_couplings(NetworkParams base, double g, const std::vector<double>& offsets);

// Spectrum at a single g, exact modes labelled by interlacing order.
SweepPoint sweep_point(const NetworkParams& base, double g, const std::vector<double>& offsets);

// Log-spaced scan over [g_min, g_max]. Exact modes keep their identity from
// point to point by maximal eigenvector overlap. Throws Error{instability}
// naming the grid point when the exact spectrum has a non-positive eigenvalue.
SweepResult frequency_sweep(const NetworkParams& base, double g_min, double g_max,
                            std::size_t steps, const std::vector<double>& offsets);

// Least-squares slope of log(spread_exact) against log(g_av + k_av) over
// points with g >= g_threshold. Throws Error{degenerate_fit} when fewer than
// five usable points remain or every spread is zero.
ScalingFit scaling_fit(const SweepResult& result, double g_threshold);

// Plain least-squares line fit y = a + b x, returning slope, its standard
// error, and intercept.
ScalingFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

} // namespace starnet
