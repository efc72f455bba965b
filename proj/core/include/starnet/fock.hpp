// fock.hpp — truncated number-basis Lindblad integrator (reference engine)
//
// Integrates the secular master equation for the full density matrix of all
// N+1 normal modes. The Hamiltonian sum_j w_j a_j^dag a_j is diagonal in the
// number basis and commutes with both thermal dissipators as superoperators,
// so the run is carried out in its interaction picture: RK4 handles the
// dissipators, the free rotation e^{-i w_j t} is applied exactly on readout.

#pragma once

#include "starnet/dynamics.hpp"
#include "starnet/transform.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace starnet {

struct FockOptions {
    std::size_t cutoff{8};          // levels per mode
    std::size_t max_dim{10000};     // cap on the Hilbert dimension
    double step_tolerance{1e-8};    // max observable change when the step is halved
    double trace_tolerance{1e-6};
    std::size_t positivity_checks{5}; // output times at which min eig(rho) is evaluated
    std::size_t max_halvings{8};
};

struct FockResult {
    Trajectory trajectory;          // x_l, xn_<tag>, n_<tag>, purity_protected
    double step{0.0};               // accepted RK4 step
    double halving_change{0.0};     // observable change between step and step/2
    double max_trace_deviation{0.0};
    double min_eigenvalue{0.0};     // over the sampled output times
    double final_purity_protected{1.0};
    Eigen::MatrixXcd final_rho;     // interaction picture
};

// `preps` are per normal mode in declared order. Throws Error{resource} when
// cutoff^(N+1) > max_dim and Error{integration_accuracy} when the trace drifts
// or the step-halving check never converges.
FockResult fock_oracle_evolve(const CanonicalTransform& t, const DissipationSpec& diss,
                              const std::vector<ModePrep>& preps, const std::vector<double>& times,
                              const FockOptions& options = {});

// Perturbative-frame convenience wrapper.
FockResult fock_oracle_evolve(const NetworkParams& params, const ModeDecomposition& modes,
                              const DissipationSpec& diss, const std::vector<ModePrep>& preps,
                              const std::vector<double>& times, const FockOptions& options = {});

} // namespace starnet
