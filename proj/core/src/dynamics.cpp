#include "starnet/dynamics.hpp"

#include "starnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace starnet {

namespace {

struct ModeRates {
    Eigen::VectorXd freqs;
    Eigen::VectorXd gamma;
    Eigen::VectorXd nbar;
};

ModeRates rates_for(const Eigen::VectorXd& freqs, const std::vector<ModeKind>& kinds,
                    const DissipationSpec& diss) {
    ModeRates r;
    r.freqs = freqs;
    r.gamma = Eigen::VectorXd::Zero(freqs.size());
    r.nbar = Eigen::VectorXd::Zero(freqs.size());
    for (std::size_t j = 0; j < kinds.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        if (kinds[j] == ModeKind::leaking_plus) {
            r.gamma(i) = diss.gamma_plus;
            r.nbar(i) = diss.nbar_plus;
        } else if (kinds[j] == ModeKind::leaking_minus) {
            r.gamma(i) = diss.gamma_minus;
            r.nbar(i) = diss.nbar_minus;
        }
    }
    return r;
}

GaussianState evolve_impl(const GaussianState& s0, const ModeRates& r, double time) {
    if (s0.frame != StateFrame::normal) {
        throw Error(ErrorCode::contract, "evolve_gaussian: state must be in the normal frame");
    }
    const auto n = static_cast<Eigen::Index>(s0.modes());
    if (n != r.freqs.size()) {
        throw Error(ErrorCode::contract, "evolve_gaussian: state/mode count mismatch");
    }
    if (!(time >= 0.0)) throw Error(ErrorCode::contract, "evolve_gaussian: time must be >= 0");

    // block-diagonal propagator: exp(-gamma t/2) R(omega t)
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::VectorXd fill(2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double env = std::exp(-0.5 * r.gamma(j) * time);
        const double c = std::cos(r.freqs(j) * time) * env;
        const double s = std::sin(r.freqs(j) * time) * env;
        phi(2 * j, 2 * j) = c;
        phi(2 * j, 2 * j + 1) = s;
        phi(2 * j + 1, 2 * j) = -s;
        phi(2 * j + 1, 2 * j + 1) = c;
        const double f = (r.nbar(j) + 0.5) * -std::expm1(-r.gamma(j) * time);
        fill(2 * j) = f;
        fill(2 * j + 1) = f;
    }
    GaussianState out;
    out.frame = StateFrame::normal;
    out.mean = phi * s0.mean;
    out.cov = phi * s0.cov * phi.transpose();
    out.cov.diagonal() += fill;
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    return out;
}

double position_scale(double mass, double omega) { return 1.0 / std::sqrt(mass * omega); }

} // namespace

double uncertainty_min_eigenvalue(const GaussianState& state) {
    const auto dim = state.cov.rows();
    Eigen::MatrixXcd m = state.cov.cast<std::complex<double>>();
    for (Eigen::Index j = 0; j + 1 < dim; j += 2) {
        m(j, j + 1) += std::complex<double>(0.0, 0.5);
        m(j + 1, j) -= std::complex<double>(0.0, 0.5);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_physical(const GaussianState& state, double tol) {
    const double asym = (state.cov - state.cov.transpose()).cwiseAbs().maxCoeff();
    return asym <= 1e-12 * std::max(1.0, state.cov.cwiseAbs().maxCoeff()) &&
           uncertainty_min_eigenvalue(state) >= tol;
}

Eigen::VectorXd occupations(const GaussianState& state) {
    const auto n = static_cast<Eigen::Index>(state.modes());
    Eigen::VectorXd occ(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double x = state.mean(2 * j);
        const double p = state.mean(2 * j + 1);
        occ(j) = 0.5 * (state.cov(2 * j, 2 * j) + state.cov(2 * j + 1, 2 * j + 1) + x * x + p * p - 1.0);
    }
    return occ;
}

DissipationSpec make_dissipation(const ModeDecomposition& modes, const NetworkParams& params,
                                 const RateOverride& overrides) {
    DissipationSpec d;
    const double c = std::cos(modes.theta_mix);
    const double s = std::sin(modes.theta_mix);
    d.gamma_plus = overrides.gamma_plus.value_or(params.bath_rate * c * c);
    d.gamma_minus = overrides.gamma_minus.value_or(params.bath_rate * s * s);
    if (d.gamma_plus < 0.0 || d.gamma_minus < 0.0) {
        throw Error(ErrorCode::parameter, "dissipation: decay rates must be >= 0");
    }
    d.nbar_plus = thermal_occupation(modes.freqs(0), params.bath_temp);
    d.nbar_minus = thermal_occupation(modes.freqs(1), params.bath_temp);
    return d;
}

DissipationSpec make_dissipation(const ModeDecomposition& modes, const CanonicalTransform& t,
                                 const NetworkParams& params, const RateOverride& overrides) {
    DissipationSpec d = make_dissipation(modes, params, overrides);
    d.nbar_plus = thermal_occupation(t.freqs_normal(0), params.bath_temp);
    d.nbar_minus = thermal_occupation(t.freqs_normal(1), params.bath_temp);
    return d;
}

GaussianState init_state(const std::vector<ModePrep>& preps, StateFrame frame) {
    const auto n = static_cast<Eigen::Index>(preps.size());
    GaussianState s;
    s.frame = frame;
    s.mean = Eigen::VectorXd::Zero(2 * n);
    s.cov = 0.5 * Eigen::MatrixXd::Identity(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const ModePrep& p = preps[static_cast<std::size_t>(j)];
        switch (p.kind) {
        case ModePrep::Kind::vacuum:
            break;
        case ModePrep::Kind::coherent:
            if (!std::isfinite(p.amplitude.real()) || !std::isfinite(p.amplitude.imag())) {
                throw Error(ErrorCode::domain, "init_state: coherent amplitude must be finite");
            }
            s.mean(2 * j) = std::numbers::sqrt2 * p.amplitude.real();
            s.mean(2 * j + 1) = std::numbers::sqrt2 * p.amplitude.imag();
            break;
        case ModePrep::Kind::thermal:
            if (!(p.nbar >= 0.0) || !std::isfinite(p.nbar)) {
                throw Error(ErrorCode::domain, "init_state: thermal occupation must be >= 0");
            }
            s.cov(2 * j, 2 * j) = p.nbar + 0.5;
            s.cov(2 * j + 1, 2 * j + 1) = p.nbar + 0.5;
            break;
        }
    }
    return s;
}

GaussianState to_frame(const GaussianState& state, const CanonicalTransform& t, StateFrame target) {
    if (state.modes() != t.dim()) {
        throw Error(ErrorCode::contract, "to_frame: state/transform size mismatch");
    }
    if (state.frame == target) return state;
    const Eigen::MatrixXd s = target == StateFrame::normal ? t.to_normal() : t.to_physical();
    GaussianState out;
    out.frame = target;
    out.mean = s * state.mean;
    out.cov = s * state.cov * s.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    return out;
}

GaussianState evolve_gaussian(const GaussianState& state0, const DissipationSpec& diss,
                              const CanonicalTransform& t, double time) {
    return evolve_impl(state0, rates_for(t.freqs_normal, t.kinds, diss), time);
}

GaussianState evolve_gaussian(const GaussianState& state0, const DissipationSpec& diss,
                              const ModeDecomposition& modes, double time) {
    std::vector<ModeKind> kinds;
    for (std::size_t j = 0; j < modes.dim(); ++j) kinds.push_back(mode_kind(j));
    return evolve_impl(state0, rates_for(modes.freqs, kinds, diss), time);
}

const std::vector<double>& Trajectory::series(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw Error(ErrorCode::contract, "trajectory has no series '" + label + "'");
    return columns[static_cast<std::size_t>(it - labels.begin())];
}

void Trajectory::add(std::string label, std::vector<double> values) {
    if (values.size() != times.size()) {
        throw Error(ErrorCode::contract, "trajectory series '" + label + "' length mismatch");
    }
    labels.push_back(std::move(label));
    columns.push_back(std::move(values));
}

namespace {

struct Observable {
    enum class What { phys_x, phys_p, norm_x, norm_p, norm_n } what;
    Eigen::Index index;
};

Observable parse_label(const std::string& label, std::size_t dim) {
    const auto sep = label.find('_');
    if (sep == std::string::npos) throw Error(ErrorCode::contract, "unknown observable '" + label + "'");
    const std::string head = label.substr(0, sep);
    const std::string tail = label.substr(sep + 1);
    if (head == "x" || head == "p") {
        std::size_t pos = 0;
        long idx = 0;
        try {
            idx = std::stol(tail, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tail.size() || idx < 1 || static_cast<std::size_t>(idx) > dim) {
            throw Error(ErrorCode::contract, "observable '" + label + "' is out of range");
        }
        return {head == "x" ? Observable::What::phys_x : Observable::What::phys_p, idx - 1};
    }
    for (std::size_t j = 0; j < dim; ++j) {
        if (tail != mode_tag(j)) continue;
        const auto i = static_cast<Eigen::Index>(j);
        if (head == "xn") return {Observable::What::norm_x, i};
        if (head == "pn") return {Observable::What::norm_p, i};
        if (head == "n") return {Observable::What::norm_n, i};
    }
    throw Error(ErrorCode::contract, "unknown observable '" + label + "'");
}

} // namespace

Trajectory position_trajectory(const GaussianState& state0, const CanonicalTransform& t,
                               const DissipationSpec& diss, const std::vector<double>& times,
                               std::vector<std::string> labels) {
    if (times.empty()) throw Error(ErrorCode::contract, "position_trajectory: empty time grid");
    const std::size_t dim = t.dim();
    if (labels.empty()) {
        for (std::size_t l = 1; l <= dim; ++l) labels.push_back("x_" + std::to_string(l));
    }
    std::vector<Observable> obs;
    obs.reserve(labels.size());
    for (const auto& label : labels) obs.push_back(parse_label(label, dim));

    const GaussianState normal0 = to_frame(state0, t, StateFrame::normal);
    const ModeRates rates = rates_for(t.freqs_normal, t.kinds, diss);
    const auto n = static_cast<Eigen::Index>(dim);

    Eigen::VectorXd x_scale(n), p_scale(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        x_scale(j) = position_scale(t.mass, t.freqs_normal(j));
        p_scale(j) = 1.0 / x_scale(j);
    }

    std::vector<std::vector<double>> cols(labels.size(), std::vector<double>(times.size()));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const GaussianState st = evolve_impl(normal0, rates, times[i]);
        Eigen::VectorXd xn(n), pn(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            xn(j) = st.mean(2 * j) * x_scale(j);
            pn(j) = st.mean(2 * j + 1) * p_scale(j);
        }
        const Eigen::VectorXd xs = t.eps * xn;
        const Eigen::VectorXd ps = t.eta * pn;
        Eigen::VectorXd occ;
        for (std::size_t k = 0; k < obs.size(); ++k) {
            const auto idx = obs[k].index;
            double value = 0.0;
            switch (obs[k].what) {
            case Observable::What::phys_x: value = xs(idx); break;
            case Observable::What::phys_p: value = ps(idx); break;
            case Observable::What::norm_x: value = xn(idx); break;
            case Observable::What::norm_p: value = pn(idx); break;
            case Observable::What::norm_n:
                if (occ.size() == 0) occ = occupations(st);
                value = occ(idx);
                break;
            }
            cols[k][i] = value;
        }
    }

    Trajectory traj;
    traj.times = times;
    for (std::size_t k = 0; k < labels.size(); ++k) traj.add(labels[k], std::move(cols[k]));
    traj.metadata["engine"] = "gaussian";
    traj.metadata["frame"] = t.frame == Frame::exact ? "exact" : "perturbative";
    return traj;
}

std::vector<double> linear_grid(double t_max, std::size_t samples) {
    if (samples < 2 || !(t_max > 0.0)) {
        throw Error(ErrorCode::contract, "linear_grid: need t_max > 0 and at least two samples");
    }
    std::vector<double> grid(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        grid[i] = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    }
    return grid;
}

} // namespace starnet
