// model.hpp — star-network parameters and the potential quadratic form
//
// N outer oscillators x_1..x_N, each tied to the hub x_{N+1} by a spring g_i.
// Units: hbar = k_B = 1, one common mass.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace starnet {

struct NetworkParams {
    std::size_t n{0};              // outer oscillators (N >= 1)
    double mass{1.0};
    std::vector<double> hooke;     // k_1..k_{N+1}, hub last
    std::vector<double> couplings; // g_1..g_N
    double bath_rate{0.0};         // gamma_0
    double bath_temp{0.0};         // T

    std::size_t dim() const noexcept { return n + 1; }
};

// Throws Error{parameter} naming the offending field.
void validate(const NetworkParams& params);

struct PotentialDecomposition {
    double mass{1.0};
    Eigen::MatrixXd v;        // full potential matrix
    double shift{0.0};        // k_av + g_av
    Eigen::MatrixXd g_matrix; // arrow matrix, Delta in the hub corner
    Eigen::MatrixXd d_matrix; // diagonal perturbation, hub entry 0
    double k_av{0.0};
    double g_av{0.0};
    Eigen::VectorXd delta_k;  // k_j - k_av, length N+1
    Eigen::VectorXd delta_g;  // g_j - g_av, length N
    Eigen::VectorXd couplings;
    double delta{0.0};        // delta_k_{N+1} + (N-1) g_av
    double lambda_sq{0.0};    // sum g_j^2
    std::optional<double> xi; // empty when g_av == 0

    std::size_t dim() const noexcept { return static_cast<std::size_t>(v.rows()); }
    std::size_t outer() const noexcept { return dim() - 1; }
};

PotentialDecomposition build_potential(const NetworkParams& params);

// Same network with D replaced by s*D (V and xi rebuilt accordingly).
PotentialDecomposition scale_perturbation(const PotentialDecomposition& decomp, double s);

// Bose-Einstein occupation; 0 at T = 0. Throws Error{domain} for omega <= 0 or T < 0.
double thermal_occupation(double omega, double temp);

} // namespace starnet
