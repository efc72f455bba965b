#include "starnet/modes.hpp"

#include "starnet/error.hpp"
#include "starnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace starnet {

ModeKind mode_kind(std::size_t index) noexcept {
    if (index == 0) return ModeKind::leaking_plus;
    if (index == 1) return ModeKind::leaking_minus;
    return ModeKind::protected_mode;
}

std::string mode_tag(std::size_t index) {
    switch (mode_kind(index)) {
    case ModeKind::leaking_plus: return "plus";
    case ModeKind::leaking_minus: return "minus";
    case ModeKind::protected_mode: break;
    }
    return "0_" + std::to_string(index - 1);
}

Eigen::MatrixXd ModeDecomposition::modal_matrix() const {
    const auto dim = vec_plus.size();
    Eigen::MatrixXd b(dim, dim);
    b.row(0) = vec_plus.transpose();
    b.row(1) = vec_minus.transpose();
    if (dim > 2) b.bottomRows(dim - 2) = zero_basis.transpose();
    return b;
}

namespace {

Eigen::VectorXd hooke_to_freqs(const Eigen::VectorXd& k, double mass) {
    Eigen::VectorXd w(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) {
        w(i) = k(i) > 0.0 ? std::sqrt(k(i) / mass) : std::numeric_limits<double>::quiet_NaN();
    }
    return w;
}

Eigen::VectorXd leaking_vector(const Eigen::VectorXd& g, double root) {
    const auto n = g.size();
    Eigen::VectorXd v(n + 1);
    v.head(n) = -g / root;
    v(n) = 1.0;
    v.normalize();
    linalg::canonical_sign(v);
    return v;
}

// Orthonormal basis of the (N-1)-dim subspace orthogonal to (g, 0) with no
// hub component. Column k-1 is
//   z_k = cos(t_k) r_k + sin(t_k) e_{k+1},   tan(t_k) = -|g_1..g_k| / g_{k+1},
// where r_k is the unit running direction of (g_1..g_k); r_1 = e_1.
Eigen::MatrixXd givens_chain(const Eigen::VectorXd& g) {
    const auto n = g.size();
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n + 1, std::max<Eigen::Index>(n - 1, 0));
    if (n < 2) return z;
    Eigen::VectorXd running = Eigen::VectorXd::Zero(n + 1);
    running(0) = 1.0;
    double norm_so_far = g(0);
    for (Eigen::Index k = 1; k < n; ++k) {
        const double theta = std::atan2(-norm_so_far, g(k));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        Eigen::VectorXd next_axis = Eigen::VectorXd::Zero(n + 1);
        next_axis(k) = 1.0;
        z.col(k - 1) = c * running + s * next_axis;
        running = -s * running + c * next_axis;
        norm_so_far = std::hypot(norm_so_far, g(k));
    }
    return z;
}

} // namespace

ModeDecomposition g_eigensystem(const PotentialDecomposition& decomp) {
    if (decomp.outer() == 0 || !(decomp.lambda_sq > 0.0)) {
        throw Error(ErrorCode::degenerate_network,
                    "g_eigensystem: all couplings are zero; use exact_diagonalize instead");
    }
    ModeDecomposition m;
    m.mass = decomp.mass;
    const double disc = std::sqrt(decomp.delta * decomp.delta + 4.0 * decomp.lambda_sq);
    // take the root without cancellation, recover the other from G+ G- = -Lambda^2
    if (decomp.delta >= 0.0) {
        m.g_plus = 0.5 * (decomp.delta + disc);
        m.g_minus = -decomp.lambda_sq / m.g_plus;
    } else {
        m.g_minus = 0.5 * (decomp.delta - disc);
        m.g_plus = -decomp.lambda_sq / m.g_minus;
    }
    m.vec_plus = leaking_vector(decomp.couplings, m.g_plus);
    m.vec_minus = leaking_vector(decomp.couplings, m.g_minus);
    m.givens_basis = givens_chain(decomp.couplings);
    m.zero_basis = m.givens_basis;
    for (Eigen::Index j = 0; j < m.zero_basis.cols(); ++j) linalg::canonical_sign(m.zero_basis.col(j));
    const auto nz = m.givens_basis.cols();
    m.zero_rotation = Eigen::MatrixXd::Identity(nz, nz);
    m.dk_zero = Eigen::VectorXd::Zero(nz);
    m.theta_mix = std::atan2(-m.g_minus, m.g_plus);
    m.xi = decomp.xi;

    m.k_corr.resize(nz + 2);
    m.k_corr(0) = decomp.shift + m.g_plus;
    m.k_corr(1) = decomp.shift + m.g_minus;
    m.k_corr.tail(nz).setConstant(decomp.shift);
    m.freqs = hooke_to_freqs(m.k_corr, m.mass);
    return m;
}

ModeDecomposition perturb_corrections(ModeDecomposition m, const PotentialDecomposition& decomp) {
    if (!decomp.xi || !std::isfinite(*decomp.xi)) {
        throw Error(ErrorCode::perturbation_inapplicable,
                    "perturb_corrections: xi undefined (g_av = 0)");
    }
    const Eigen::MatrixXd& d = decomp.d_matrix;
    m.dk_plus = m.vec_plus.dot(d * m.vec_plus);
    m.dk_minus = m.vec_minus.dot(d * m.vec_minus);

    const auto nz = m.givens_basis.cols();
    if (nz > 0) {
        const Eigen::MatrixXd restricted = m.givens_basis.transpose() * d * m.givens_basis;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (restricted + restricted.transpose()));
        if (es.info() != Eigen::Success) {
            throw Error(ErrorCode::diagnostics, "perturb_corrections: zero-sector eigensolver failed");
        }
        Eigen::MatrixXd q = es.eigenvectors();
        Eigen::MatrixXd rotated = m.givens_basis * q;
        for (Eigen::Index j = 0; j < nz; ++j) {
            Eigen::VectorXd col = rotated.col(j);
            linalg::canonical_sign(col);
            if (col.dot(rotated.col(j)) < 0.0) q.col(j) = -q.col(j);
            rotated.col(j) = col;
        }

        // ascending eigenvalue, near-ties broken lexicographically on the mode vector
        const Eigen::VectorXd& vals = es.eigenvalues();
        const double tie = 1e-12 * std::max(1.0, vals.cwiseAbs().maxCoeff());
        std::vector<Eigen::Index> order(static_cast<std::size_t>(nz));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            if (std::abs(vals(a) - vals(b)) > tie) return vals(a) < vals(b);
            const auto ca = rotated.col(a);
            const auto cb = rotated.col(b);
            return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
        });

        Eigen::MatrixXd q_sorted(nz, nz);
        m.dk_zero.resize(nz);
        m.zero_basis.resize(rotated.rows(), nz);
        for (Eigen::Index j = 0; j < nz; ++j) {
            const auto src = order[static_cast<std::size_t>(j)];
            q_sorted.col(j) = q.col(src);
            m.dk_zero(j) = vals(src);
            m.zero_basis.col(j) = rotated.col(src);
        }
        m.zero_rotation = q_sorted.transpose();
    }

    m.k_corr(0) = decomp.shift + m.g_plus + m.dk_plus;
    m.k_corr(1) = decomp.shift + m.g_minus + m.dk_minus;
    for (Eigen::Index j = 0; j < nz; ++j) m.k_corr(2 + j) = decomp.shift + m.dk_zero(j);
    m.freqs = hooke_to_freqs(m.k_corr, m.mass);
    m.xi = decomp.xi;
    m.regime_warning = *decomp.xi > kRegimeWarningXi;
    m.corrected = true;
    return m;
}

ModeDecomposition analyze_modes(const PotentialDecomposition& decomp) {
    return perturb_corrections(g_eigensystem(decomp), decomp);
}

std::vector<std::size_t> ExactSpectrum::declared_order() const {
    const auto dim = static_cast<std::size_t>(eigenvalues.size());
    std::vector<std::size_t> order;
    order.reserve(dim);
    if (dim == 0) return order;
    order.push_back(dim - 1);
    if (dim > 1) order.push_back(0);
    for (std::size_t i = 1; i + 1 < dim; ++i) order.push_back(i);
    return order;
}

ExactSpectrum exact_diagonalize(const Eigen::MatrixXd& v, double mass) {
    if (v.rows() != v.cols()) throw Error(ErrorCode::contract, "exact_diagonalize: V must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (v + v.transpose()));
    if (es.info() != Eigen::Success) {
        throw Error(ErrorCode::diagnostics, "exact_diagonalize: eigensolver did not converge");
    }
    ExactSpectrum out;
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
        linalg::canonical_sign(out.eigenvectors.col(j));
    }
    out.freqs = hooke_to_freqs(out.eigenvalues, mass);

    const double scale = std::max(linalg::max_abs(v), std::numeric_limits<double>::min());
    const Eigen::MatrixXd resid =
        v * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
    out.max_residual = linalg::max_abs(resid) / scale;
    if (out.max_residual > 1e-10) {
        throw Error(ErrorCode::diagnostics, "exact_diagonalize: residual " +
                                                std::to_string(out.max_residual) +
                                                " exceeds 1e-10");
    }
    return out;
}

ExactSpectrum exact_diagonalize(const PotentialDecomposition& decomp) {
    return exact_diagonalize(decomp.v, decomp.mass);
}

SqueezingEstimate squeezing_estimate(const ModeDecomposition& modes,
                                     const PotentialDecomposition& decomp) {
    SqueezingEstimate est;
    const auto nz = static_cast<Eigen::Index>(modes.protected_count());
    est.no_pair = nz < 2;

    const double base = std::sqrt(decomp.shift / modes.mass);
    est.approx_freqs = base * (1.0 + modes.dk_zero.array() / (2.0 * decomp.shift));

    const ExactSpectrum exact = exact_diagonalize(decomp);
    est.exact_freqs = exact.freqs.segment(1, nz);

    if (!est.no_pair) {
        est.spread_approx = est.approx_freqs.maxCoeff() - est.approx_freqs.minCoeff();
        est.spread_exact = est.exact_freqs.maxCoeff() - est.exact_freqs.minCoeff();
    }
    return est;
}

} // namespace starnet
