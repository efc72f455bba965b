#include "starnet/transform.hpp"

#include "starnet/error.hpp"
#include "starnet/linalg.hpp"

#include <cmath>
#include <string>

namespace starnet {

namespace {

Eigen::VectorXd physical_freqs(const NetworkParams& params) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(params.dim()));
    for (Eigen::Index l = 0; l < w.size(); ++l) {
        w(l) = std::sqrt(params.hooke[static_cast<std::size_t>(l)] / params.mass);
    }
    return w;
}

CanonicalTransform from_orthogonal_rows(Eigen::MatrixXd b, const NetworkParams& params) {
    CanonicalTransform t;
    t.mass = params.mass;
    t.c = b;
    t.eps = b.transpose();
    t.eta = b.transpose();
    t.b = std::move(b);
    t.freqs_physical = physical_freqs(params);
    for (std::size_t j = 0; j < t.dim(); ++j) t.kinds.push_back(mode_kind(j));
    return t;
}

void require_positive_frequencies(const Eigen::VectorXd& w, const char* where) {
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (!(w(j) > 0.0)) {
            throw Error(ErrorCode::domain,
                        std::string(where) + ": non-positive frequency at mode " + mode_tag(static_cast<std::size_t>(j)));
        }
    }
}

} // namespace

double CanonicalTransform::commutation_defect() const {
    const auto n = b.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    return std::max(linalg::max_abs(b * c.transpose() - id),
                    linalg::max_abs(eta * eps.transpose() - id));
}

double CanonicalTransform::inverse_defect() const {
    const auto n = b.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    return std::max(linalg::max_abs(eps * b - id), linalg::max_abs(eta * c - id));
}

Eigen::MatrixXd CanonicalTransform::to_normal() const {
    const auto n = b.rows();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index l = 0; l < n; ++l) {
            const double ratio = std::sqrt(freqs_normal(j) / freqs_physical(l));
            s(2 * j, 2 * l) = b(j, l) * ratio;
            s(2 * j + 1, 2 * l + 1) = c(j, l) / ratio;
        }
    }
    return s;
}

Eigen::MatrixXd CanonicalTransform::to_physical() const {
    const auto n = b.rows();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double ratio = std::sqrt(freqs_physical(l) / freqs_normal(j));
            s(2 * l, 2 * j) = eps(l, j) * ratio;
            s(2 * l + 1, 2 * j + 1) = eta(l, j) / ratio;
        }
    }
    return s;
}

CanonicalTransform build_canonical_transform(const ModeDecomposition& modes,
                                             const NetworkParams& params) {
    validate(params);
    if (modes.dim() != params.dim()) {
        throw Error(ErrorCode::contract, "build_canonical_transform: mode/parameter size mismatch");
    }
    for (Eigen::Index j = 0; j < modes.k_corr.size(); ++j) {
        if (!(modes.k_corr(j) > 0.0)) {
            throw Error(ErrorCode::instability,
                        "build_canonical_transform: corrected Hooke constant of mode " +
                            mode_tag(static_cast<std::size_t>(j)) + " is not positive");
        }
    }
    CanonicalTransform t = from_orthogonal_rows(modes.modal_matrix(), params);
    t.frame = Frame::perturbative;
    t.freqs_normal = modes.freqs;
    return t;
}

CanonicalTransform build_exact_transform(const ExactSpectrum& spectrum,
                                         const NetworkParams& params) {
    validate(params);
    const auto n = spectrum.eigenvalues.size();
    if (static_cast<std::size_t>(n) != params.dim()) {
        throw Error(ErrorCode::contract, "build_exact_transform: spectrum/parameter size mismatch");
    }
    const auto order = spectrum.declared_order();
    Eigen::MatrixXd b(n, n);
    Eigen::VectorXd w(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(j)]);
        if (!(spectrum.eigenvalues(src) > 0.0)) {
            throw Error(ErrorCode::instability,
                        "build_exact_transform: eigenvalue of mode " +
                            mode_tag(static_cast<std::size_t>(j)) + " is not positive");
        }
        b.row(j) = spectrum.eigenvectors.col(src).transpose();
        w(j) = spectrum.freqs(src);
    }
    CanonicalTransform t = from_orthogonal_rows(std::move(b), params);
    t.frame = Frame::exact;
    t.freqs_normal = w;
    return t;
}

double BogoliubovMap::symplectic_defect() const {
    const auto n = u.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd uv = u * v.transpose();
    return std::max(linalg::max_abs(u * u.transpose() - v * v.transpose() - id),
                    linalg::max_abs(uv - uv.transpose()));
}

BogoliubovMap bogoliubov_map(const CanonicalTransform& t) {
    require_positive_frequencies(t.freqs_normal, "bogoliubov_map");
    require_positive_frequencies(t.freqs_physical, "bogoliubov_map");
    const auto n = t.b.rows();
    BogoliubovMap m;
    m.u.resize(n, n);
    m.v.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double ratio = std::sqrt(t.freqs_normal(j) / t.freqs_physical(k));
            const double pos = t.b(j, k) * ratio;
            const double mom = t.c(j, k) / ratio;
            m.u(j, k) = 0.5 * (pos + mom);
            m.v(j, k) = 0.5 * (pos - mom);
        }
    }
    return m;
}

} // namespace starnet
