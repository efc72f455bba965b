// modes.hpp — normal modes of the star network
//
// The analytic route diagonalizes the arrow matrix G exactly (two leaking
// singlets G+/G-, an (N-1)-fold zero eigenvalue spanned by a Givens chain) and
// treats D to first order. exact_diagonalize() is the brute-force reference.
//
// Mode order everywhere: (+, -, 0_1, ..., 0_{N-1}).

#pragma once

#include "starnet/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace starnet {

enum class ModeKind { leaking_plus, leaking_minus, protected_mode };

// Kind of the mode at position `index` of the declared order.
ModeKind mode_kind(std::size_t index) noexcept;
// "plus", "minus", "0_1", "0_2", ...
std::string mode_tag(std::size_t index);

inline constexpr double kRegimeWarningXi = 0.3;

struct ModeDecomposition {
    double mass{1.0};
    double g_plus{0.0};
    double g_minus{0.0};
    Eigen::VectorXd vec_plus;
    Eigen::VectorXd vec_minus;
    Eigen::MatrixXd givens_basis;   // (N+1) x (N-1), unrotated Givens chain
    Eigen::MatrixXd zero_basis;     // givens_basis * zero_rotation^T once corrected
    Eigen::MatrixXd zero_rotation;  // O, rows give z_0j in terms of the Givens modes
    double dk_plus{0.0};
    double dk_minus{0.0};
    Eigen::VectorXd dk_zero;        // ascending
    Eigen::VectorXd k_corr;         // (k+, k-, k_0j...)
    Eigen::VectorXd freqs;          // sqrt(k_corr / m)
    double theta_mix{0.0};          // tan(theta) = -G-/G+
    std::optional<double> xi;
    bool corrected{false};
    bool regime_warning{false};     // xi > kRegimeWarningXi

    std::size_t dim() const noexcept { return static_cast<std::size_t>(vec_plus.size()); }
    std::size_t protected_count() const noexcept { return dim() - 2; }

    // Rows are the normal-mode vectors in declared order.
    Eigen::MatrixXd modal_matrix() const;
};

// Closed-form eigensystem of G. Corrections are zero; k_corr/freqs hold the
// unperturbed values. Throws Error{degenerate_network} when every g_i = 0.
ModeDecomposition g_eigensystem(const PotentialDecomposition& decomp);

// First-order treatment of D. Throws Error{perturbation_inapplicable} when xi
// is undefined; sets regime_warning when xi > 0.3.
ModeDecomposition perturb_corrections(ModeDecomposition modes, const PotentialDecomposition& decomp);

// g_eigensystem + perturb_corrections.
ModeDecomposition analyze_modes(const PotentialDecomposition& decomp);

struct ExactSpectrum {
    Eigen::VectorXd eigenvalues;  // ascending Hooke constants
    Eigen::MatrixXd eigenvectors; // columns, canonical sign
    Eigen::VectorXd freqs;        // sqrt(lambda / m); NaN for lambda <= 0
    double max_residual{0.0};     // max_i |V v_i - lambda_i v_i| / |V|

    // Column indices of eigenvectors in declared mode order. The lowest and
    // highest eigenvalues are the leaking pair (arrow-matrix interlacing).
    std::vector<std::size_t> declared_order() const;
};

ExactSpectrum exact_diagonalize(const PotentialDecomposition& decomp);
ExactSpectrum exact_diagonalize(const Eigen::MatrixXd& v, double mass);

struct SqueezingEstimate {
    Eigen::VectorXd approx_freqs;  // first-order Taylor frequencies of protected modes
    double spread_approx{0.0};
    Eigen::VectorXd exact_freqs;   // protected exact frequencies, ascending
    double spread_exact{0.0};
    bool no_pair{false};           // fewer than two protected modes
};

SqueezingEstimate squeezing_estimate(const ModeDecomposition& modes,
                                     const PotentialDecomposition& decomp);

} // namespace starnet
