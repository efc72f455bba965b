#include "starnet/model.hpp"

#include "starnet/error.hpp"

#include <cmath>
#include <string>

namespace starnet {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorCode::parameter, msg);
}

} // namespace

void validate(const NetworkParams& p) {
    require(p.n >= 1, "network.n: need at least one outer oscillator");
    require(std::isfinite(p.mass) && p.mass > 0.0, "network.mass: must be > 0");
    require(p.hooke.size() == p.n + 1,
            "network.hooke: expected " + std::to_string(p.n + 1) + " entries, got " +
                std::to_string(p.hooke.size()));
    require(p.couplings.size() == p.n,
            "network.couplings: expected " + std::to_string(p.n) + " entries, got " +
                std::to_string(p.couplings.size()));
    for (std::size_t i = 0; i < p.hooke.size(); ++i) {
        require(std::isfinite(p.hooke[i]) && p.hooke[i] > 0.0,
                "network.hooke[" + std::to_string(i + 1) + "]: must be > 0");
    }
    for (std::size_t i = 0; i < p.couplings.size(); ++i) {
        require(std::isfinite(p.couplings[i]) && p.couplings[i] >= 0.0,
                "network.couplings[" + std::to_string(i + 1) + "]: must be >= 0");
    }
    require(std::isfinite(p.bath_rate) && p.bath_rate >= 0.0, "dissipation.gamma0: must be >= 0");
    require(std::isfinite(p.bath_temp) && p.bath_temp >= 0.0,
            "dissipation.temperature: must be >= 0");
}

PotentialDecomposition build_potential(const NetworkParams& params) {
    validate(params);
    const auto n = static_cast<Eigen::Index>(params.n);
    const Eigen::Index dim = n + 1;

    PotentialDecomposition out;
    out.mass = params.mass;
    out.couplings = Eigen::Map<const Eigen::VectorXd>(params.couplings.data(), n);
    const Eigen::VectorXd k = Eigen::Map<const Eigen::VectorXd>(params.hooke.data(), dim);

    out.v = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.v(i, i) = k(i) + out.couplings(i);
        out.v(i, n) = -out.couplings(i);
        out.v(n, i) = -out.couplings(i);
    }
    out.v(n, n) = k(n) + out.couplings.sum();

    out.k_av = k.mean();
    out.g_av = out.couplings.mean();
    out.shift = out.k_av + out.g_av;
    out.delta_k = k.array() - out.k_av;
    out.delta_g = out.couplings.array() - out.g_av;
    out.delta = out.delta_k(n) + static_cast<double>(n - 1) * out.g_av;
    out.lambda_sq = out.couplings.squaredNorm();

    out.g_matrix = Eigen::MatrixXd::Zero(dim, dim);
    out.g_matrix.col(n).head(n) = -out.couplings;
    out.g_matrix.row(n).head(n) = -out.couplings.transpose();
    out.g_matrix(n, n) = out.delta;

    out.d_matrix = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < n; ++j) out.d_matrix(j, j) = out.delta_k(j) + out.delta_g(j);

    if (out.g_av > 0.0) {
        // hub enters the max with delta_g_{N+1} = 0
        double worst = std::abs(out.delta_k(n));
        for (Eigen::Index j = 0; j < n; ++j) {
            worst = std::max(worst, std::abs(out.delta_k(j)) + std::abs(out.delta_g(j)));
        }
        out.xi = worst / out.g_av;
    }
    return out;
}

PotentialDecomposition scale_perturbation(const PotentialDecomposition& decomp, double s) {
    PotentialDecomposition out = decomp;
    out.d_matrix *= s;
    out.v = out.shift * Eigen::MatrixXd::Identity(decomp.dim(), decomp.dim()) + out.g_matrix +
            out.d_matrix;
    if (out.xi) *out.xi *= std::abs(s);
    return out;
}

double thermal_occupation(double omega, double temp) {
    if (!(omega > 0.0)) throw Error(ErrorCode::domain, "thermal_occupation: omega must be > 0");
    if (!(temp >= 0.0)) throw Error(ErrorCode::domain, "thermal_occupation: temperature must be >= 0");
    if (temp == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temp);
}

} // namespace starnet
