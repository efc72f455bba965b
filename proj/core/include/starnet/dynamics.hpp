// dynamics.hpp — Gaussian-moment evolution under the secular master equation
//
// Protected modes rotate freely; each leaking mode (+/-) sees its own thermal
// dissipator with rate gamma and occupation nbar. The Hamiltonian is quadratic
// and the dissipators linear, so first and second moments evolve in closed form.
//
// Quadratures are dimensionless, x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)),
// interleaved per mode as (x_0, p_0, x_1, p_1, ...). Vacuum covariance is I/2.

#pragma once

#include "starnet/model.hpp"
#include "starnet/modes.hpp"
#include "starnet/transform.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace starnet {

enum class StateFrame { physical, normal };

struct GaussianState {
    StateFrame frame{StateFrame::normal};
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    std::size_t modes() const noexcept { return static_cast<std::size_t>(mean.size() / 2); }
};

// Smallest eigenvalue of cov + (i/2) Omega; >= 0 for a physical state.
double uncertainty_min_eigenvalue(const GaussianState& state);
bool is_physical(const GaussianState& state, double tol = -1e-9);

// Mean occupation of every mode in the state's own frame.
Eigen::VectorXd occupations(const GaussianState& state);

struct DissipationSpec {
    double gamma_plus{0.0};
    double gamma_minus{0.0};
    double nbar_plus{0.0};
    double nbar_minus{0.0};
};

struct RateOverride {
    std::optional<double> gamma_plus;
    std::optional<double> gamma_minus;
};

// gamma_+ = gamma_0 cos^2(theta), gamma_- = gamma_0 sin^2(theta),
// nbar_+- = thermal_occupation(omega~_+-, T).
DissipationSpec make_dissipation(const ModeDecomposition& modes, const NetworkParams& params,
                                 const RateOverride& overrides = {});
// Same, with the leaking frequencies taken from a transform (exact frame).
DissipationSpec make_dissipation(const ModeDecomposition& modes, const CanonicalTransform& t,
                                 const NetworkParams& params, const RateOverride& overrides = {});

struct ModePrep {
    enum class Kind { vacuum, coherent, thermal };
    Kind kind{Kind::vacuum};
    std::complex<double> amplitude{0.0, 0.0}; // coherent
    double nbar{0.0};                         // thermal

    static ModePrep vacuum() { return {}; }
    static ModePrep coherent(std::complex<double> alpha) { return {Kind::coherent, alpha, 0.0}; }
    static ModePrep thermal(double n) { return {Kind::thermal, {0.0, 0.0}, n}; }
};

// Product state. Throws Error{domain} on negative nbar or non-finite amplitude.
GaussianState init_state(const std::vector<ModePrep>& preps, StateFrame frame);

// Re-express a state in the other frame through the transform's quadrature map.
GaussianState to_frame(const GaussianState& state, const CanonicalTransform& t, StateFrame target);

// Closed-form evolution by time t >= 0. The state must be in the normal frame
// (Error{contract} otherwise). Frequencies and mode kinds come from `t`.
GaussianState evolve_gaussian(const GaussianState& state0, const DissipationSpec& diss,
                              const CanonicalTransform& t, double time);
// Perturbative-frame variant driven directly by the mode decomposition.
GaussianState evolve_gaussian(const GaussianState& state0, const DissipationSpec& diss,
                              const ModeDecomposition& modes, double time);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> columns; // columns[i] belongs to labels[i]
    std::map<std::string, std::string> metadata;

    const std::vector<double>& series(const std::string& label) const;
    void add(std::string label, std::vector<double> values);
};

// Expectation values on a time grid. Labels:
//   x_l, p_l      physical position/momentum of oscillator l (1-based, hub = N+1)
//   xn_<tag>, pn_<tag>, n_<tag>   normal-mode position, momentum, occupation
// with <tag> from mode_tag(). Empty labels select x_1..x_{N+1}.
// Throws Error{contract} for an empty grid or unknown label.
Trajectory position_trajectory(const GaussianState& state0, const CanonicalTransform& t,
                               const DissipationSpec& diss, const std::vector<double>& times,
                               std::vector<std::string> labels = {});

// Evenly spaced grid of `samples` points on [0, t_max].
std::vector<double> linear_grid(double t_max, std::size_t samples);

struct PairMetric {
    std::string first;
    std::string second;
    double correlation{0.0}; // Pearson over the late window
};

struct SyncMetrics {
    std::vector<PairMetric> pairs;
    std::vector<std::string> labels;
    std::vector<double> dominant_freqs;
    double max_freq_difference{0.0};
    double min_abs_correlation{0.0};
    double window_start{0.0};
};

// Pairwise correlations and dominant frequencies over the final `window`
// fraction of the trajectory. Throws Error{diagnostics} if the window spans
// fewer than four dominant periods.
SyncMetrics sync_metrics(const Trajectory& traj, const std::vector<std::string>& labels,
                         double window);

// Periodogram |sum_i s_i e^{-i w t_i}|^2 / n^2 of a mean-removed sampled signal.
double spectral_power(const std::vector<double>& t, const std::vector<double>& s, double omega);
// Location of the periodogram peak on (0, pi/dt], refined by golden-section search.
double dominant_frequency(const std::vector<double>& t, const std::vector<double>& s);

} // namespace starnet
