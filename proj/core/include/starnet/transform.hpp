// transform.hpp — canonical map between physical and normal coordinates
//
// Normal coordinates are x~_j = sum_l b(j,l) x_l and p~_j = sum_l c(j,l) p_l,
// inverted by x_l = sum_j eps(l,j) x~_j and p_l = sum_j eta(l,j) p~_j.
// Rows of b follow the declared mode order (+, -, 0_1, ...).

#pragma once

#include "starnet/model.hpp"
#include "starnet/modes.hpp"

#include <Eigen/Dense>

#include <vector>

namespace starnet {

enum class Frame { perturbative, exact };

struct CanonicalTransform {
    Frame frame{Frame::perturbative};
    double mass{1.0};
    Eigen::MatrixXd b;
    Eigen::MatrixXd c;
    Eigen::MatrixXd eps;
    Eigen::MatrixXd eta;
    Eigen::VectorXd freqs_physical; // sqrt(k_l / m)
    Eigen::VectorXd freqs_normal;   // normal-mode frequencies, declared order
    std::vector<ModeKind> kinds;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(b.rows()); }

    // max |b c^T - I|, max |eta eps^T - I|
    double commutation_defect() const;
    // max |eps b - I|, max |eta c - I|
    double inverse_defect() const;

    // 2(N+1) square maps on interleaved dimensionless quadratures (x_0, p_0, x_1, ...).
    // to_normal() is symplectic; to_physical() is its inverse.
    Eigen::MatrixXd to_normal() const;
    Eigen::MatrixXd to_physical() const;
};

// Point transformation from the perturbative modes (c = b, orthogonal).
// Throws Error{instability} if a corrected Hooke constant is <= 0.
CanonicalTransform build_canonical_transform(const ModeDecomposition& modes,
                                             const NetworkParams& params);

// Same construction on the oracle eigenvectors.
CanonicalTransform build_exact_transform(const ExactSpectrum& spectrum,
                                         const NetworkParams& params);

// a~_j = sum_k u(j,k) a_k + v(j,k) a_k^dagger
struct BogoliubovMap {
    Eigen::MatrixXd u;
    Eigen::MatrixXd v;

    // max |u u^T - v v^T - I| and max |u v^T - (u v^T)^T|
    double symplectic_defect() const;
};

// Throws Error{domain} on non-positive frequencies.
BogoliubovMap bogoliubov_map(const CanonicalTransform& t);

} // namespace starnet
