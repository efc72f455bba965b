#include "starnet/fock.hpp"

#include "starnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace starnet {

namespace {

using cplx = std::complex<double>;

struct Channel {
    std::size_t mode{0};
    double down{0.0}; // gamma (nbar + 1)
    double up{0.0};   // gamma nbar
};

class Lindbladian {
public:
    Lindbladian(std::size_t modes, std::size_t cutoff, std::vector<Channel> channels)
        : modes_(modes), cutoff_(cutoff), channels_(std::move(channels)) {
        dim_ = 1;
        for (std::size_t j = 0; j < modes_; ++j) {
            strides_.push_back(dim_);
            dim_ *= cutoff_;
        }
        occ_.assign(modes_, std::vector<int>(dim_));
        for (std::size_t idx = 0; idx < dim_; ++idx) {
            std::size_t rest = idx;
            for (std::size_t j = 0; j < modes_; ++j) {
                occ_[j][idx] = static_cast<int>(rest % cutoff_);
                rest /= cutoff_;
            }
        }
        // diagonal part: -1/2 {a^dag a, .} and -1/2 {a a^dag, .} with the
        // truncated a a^dag, which vanishes on the top level
        diag_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
        for (const Channel& ch : channels_) {
            for (std::size_t idx = 0; idx < dim_; ++idx) {
                const int k = occ_[ch.mode][idx];
                const double aad = k + 1 < static_cast<int>(cutoff_) ? k + 1.0 : 0.0;
                diag_(static_cast<Eigen::Index>(idx)) += -0.5 * (ch.down * k + ch.up * aad);
            }
            Eigen::VectorXd lower(static_cast<Eigen::Index>(dim_)), raise(static_cast<Eigen::Index>(dim_));
            for (std::size_t idx = 0; idx < dim_; ++idx) {
                const int k = occ_[ch.mode][idx];
                const auto i = static_cast<Eigen::Index>(idx);
                lower(i) = k + 1 < static_cast<int>(cutoff_) ? std::sqrt(k + 1.0) : 0.0;
                raise(i) = std::sqrt(static_cast<double>(k));
            }
            lower_.push_back(std::move(lower));
            raise_.push_back(std::move(raise));
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t stride(std::size_t mode) const { return strides_[mode]; }
    int occupation(std::size_t mode, std::size_t idx) const { return occ_[mode][idx]; }

    void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
        const auto d = static_cast<Eigen::Index>(dim_);
        for (Eigen::Index n = 0; n < d; ++n) {
            out.col(n).array() = (diag_.array() + diag_(n)) * rho.col(n).array();
        }
        for (std::size_t c = 0; c < channels_.size(); ++c) {
            const Channel& ch = channels_[c];
            const auto s = static_cast<Eigen::Index>(strides_[ch.mode]);
            const Eigen::VectorXd& lower = lower_[c]; // sqrt(k+1) below the top level, else 0
            const Eigen::VectorXd& raise = raise_[c]; // sqrt(k)
            const Eigen::Index len = d - s;
            // factors vanish wherever the level shift would leave the truncated space,
            // so the shifted slices can run over every index that stays in range
            for (Eigen::Index n = 0; n < d; ++n) {
                if (ch.down != 0.0 && lower(n) != 0.0) {
                    out.col(n).head(len).array() +=
                        (ch.down * lower(n)) * lower.head(len).array() * rho.col(n + s).tail(len).array();
                }
                if (ch.up != 0.0 && raise(n) != 0.0) {
                    out.col(n).tail(len).array() +=
                        (ch.up * raise(n)) * raise.tail(len).array() * rho.col(n - s).head(len).array();
                }
            }
        }
    }

private:
    std::size_t modes_;
    std::size_t cutoff_;
    std::vector<Channel> channels_;
    std::size_t dim_{1};
    std::vector<std::size_t> strides_;
    std::vector<std::vector<int>> occ_;
    Eigen::VectorXd diag_;
    std::vector<Eigen::VectorXd> lower_;
    std::vector<Eigen::VectorXd> raise_;
};

Eigen::MatrixXcd single_mode(const ModePrep& p, std::size_t cutoff) {
    const auto c = static_cast<Eigen::Index>(cutoff);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(c, c);
    switch (p.kind) {
    case ModePrep::Kind::vacuum:
        rho(0, 0) = 1.0;
        break;
    case ModePrep::Kind::coherent: {
        Eigen::VectorXcd psi(c);
        cplx term = std::exp(-0.5 * std::norm(p.amplitude));
        for (Eigen::Index k = 0; k < c; ++k) {
            psi(k) = term;
            term *= p.amplitude / std::sqrt(static_cast<double>(k + 1));
        }
        psi.normalize();
        rho = psi * psi.adjoint();
        break;
    }
    case ModePrep::Kind::thermal: {
        if (!(p.nbar >= 0.0)) throw Error(ErrorCode::domain, "fock oracle: thermal occupation must be >= 0");
        const double q = p.nbar / (1.0 + p.nbar);
        double w = 1.0;
        for (Eigen::Index k = 0; k < c; ++k, w *= q) rho(k, k) = w;
        rho /= rho.trace();
        break;
    }
    }
    return rho;
}

struct RunOutput {
    std::vector<std::vector<double>> columns;
    std::vector<std::string> labels;
    double max_trace_dev{0.0};
    double min_eig{std::numeric_limits<double>::infinity()};
    double final_purity{1.0};
    Eigen::MatrixXcd final_rho;
};

class Run {
public:
    Run(const CanonicalTransform& t, const Lindbladian& lind, std::size_t cutoff,
        const FockOptions& opts)
        : t_(t), lind_(lind), cutoff_(cutoff), opts_(opts) {}

    RunOutput operator()(const Eigen::MatrixXcd& rho0, const std::vector<double>& times,
                         double max_step, bool check_positivity) const {
        const std::size_t n_modes = t_.dim();
        RunOutput out;
        for (std::size_t l = 1; l <= n_modes; ++l) out.labels.push_back("x_" + std::to_string(l));
        for (std::size_t j = 0; j < n_modes; ++j) out.labels.push_back("xn_" + mode_tag(j));
        for (std::size_t j = 0; j < n_modes; ++j) out.labels.push_back("n_" + mode_tag(j));
        out.labels.push_back("purity_protected");
        out.columns.assign(out.labels.size(), std::vector<double>(times.size()));

        std::vector<std::size_t> checks;
        if (check_positivity && opts_.positivity_checks > 0) {
            const std::size_t k = std::min(opts_.positivity_checks, times.size());
            for (std::size_t i = 1; i <= k; ++i) checks.push_back(i * (times.size() - 1) / k);
        }

        Eigen::MatrixXcd rho = rho0;
        Eigen::MatrixXcd k1(rho.rows(), rho.cols()), k2 = k1, k3 = k1, k4 = k1, tmp = k1;
        double now = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double span = times[i] - now;
            if (span > 0.0) {
                const auto steps = static_cast<std::size_t>(std::ceil(span / max_step - 1e-9));
                const double h = span / static_cast<double>(std::max<std::size_t>(steps, 1));
                for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) {
                    lind_.apply(rho, k1);
                    tmp = rho + (0.5 * h) * k1;
                    lind_.apply(tmp, k2);
                    tmp = rho + (0.5 * h) * k2;
                    lind_.apply(tmp, k3);
                    tmp = rho + h * k3;
                    lind_.apply(tmp, k4);
                    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
                now = times[i];
            }
            record(rho, times[i], i, out);
            if (std::find(checks.begin(), checks.end(), i) != checks.end()) {
                const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
                out.min_eig = std::min(out.min_eig, es.eigenvalues().minCoeff());
            }
        }
        out.final_rho = rho;
        out.final_purity = out.columns.back().back();
        return out;
    }

private:
    void record(const Eigen::MatrixXcd& rho, double time, std::size_t i, RunOutput& out) const {
        const std::size_t n_modes = t_.dim();
        const std::size_t dim = lind_.dim();
        const auto nm = static_cast<Eigen::Index>(n_modes);

        out.max_trace_dev = std::max(out.max_trace_dev, std::abs(rho.trace() - cplx(1.0, 0.0)));

        Eigen::VectorXd xn(nm);
        for (std::size_t j = 0; j < n_modes; ++j) {
            const auto s = static_cast<Eigen::Index>(lind_.stride(j));
            cplx a{0.0, 0.0};
            double occ = 0.0;
            for (std::size_t idx = 0; idx < dim; ++idx) {
                const int k = lind_.occupation(j, idx);
                const auto r = static_cast<Eigen::Index>(idx);
                occ += k * rho(r, r).real();
                if (k > 0) a += std::sqrt(static_cast<double>(k)) * rho(r, r - s);
            }
            const double w = t_.freqs_normal(static_cast<Eigen::Index>(j));
            a *= std::polar(1.0, -w * time);
            // x~ = (a + a^dag)/sqrt(2 m w)
            xn(static_cast<Eigen::Index>(j)) = std::sqrt(2.0) * a.real() / std::sqrt(t_.mass * w);
            out.columns[n_modes + j][i] = xn(static_cast<Eigen::Index>(j));
            out.columns[2 * n_modes + j][i] = occ;
        }
        const Eigen::VectorXd xs = t_.eps * xn;
        for (std::size_t l = 0; l < n_modes; ++l) out.columns[l][i] = xs(static_cast<Eigen::Index>(l));
        out.columns.back()[i] = protected_purity(rho);
    }

    double protected_purity(const Eigen::MatrixXcd& rho) const {
        const std::size_t n_modes = t_.dim();
        if (n_modes <= 2) return 1.0;
        // leaking modes are 0 and 1, so each index splits as leak + c^2 * prot
        const std::size_t leak_dim = cutoff_ * cutoff_;
        const std::size_t prot_dim = lind_.dim() / leak_dim;
        Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(prot_dim),
                                                      static_cast<Eigen::Index>(prot_dim));
        for (std::size_t p = 0; p < prot_dim; ++p) {
            for (std::size_t q = 0; q < prot_dim; ++q) {
                cplx acc{0.0, 0.0};
                for (std::size_t l = 0; l < leak_dim; ++l) {
                    acc += rho(static_cast<Eigen::Index>(l + leak_dim * p),
                               static_cast<Eigen::Index>(l + leak_dim * q));
                }
                red(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = acc;
            }
        }
        return red.cwiseAbs2().sum() / std::norm(red.trace());
    }

    const CanonicalTransform& t_;
    const Lindbladian& lind_;
    std::size_t cutoff_;
    const FockOptions& opts_;
};

double max_difference(const RunOutput& a, const RunOutput& b) {
    double worst = 0.0;
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        for (std::size_t i = 0; i < a.columns[c].size(); ++i) {
            worst = std::max(worst, std::abs(a.columns[c][i] - b.columns[c][i]));
        }
    }
    return worst;
}

} // namespace

FockResult fock_oracle_evolve(const CanonicalTransform& t, const DissipationSpec& diss,
                              const std::vector<ModePrep>& preps, const std::vector<double>& times,
                              const FockOptions& options) {
    const std::size_t n_modes = t.dim();
    if (preps.size() != n_modes) {
        throw Error(ErrorCode::contract, "fock oracle: need one preparation per normal mode");
    }
    if (times.empty()) throw Error(ErrorCode::contract, "fock oracle: empty time grid");
    if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
        throw Error(ErrorCode::contract, "fock oracle: times must be ascending and >= 0");
    }
    if (options.cutoff < 2) throw Error(ErrorCode::contract, "fock oracle: cutoff must be >= 2");
    double dim = 1.0;
    for (std::size_t j = 0; j < n_modes; ++j) dim *= static_cast<double>(options.cutoff);
    if (dim > static_cast<double>(options.max_dim)) {
        throw Error(ErrorCode::resource, "fock oracle: Hilbert dimension " + std::to_string(static_cast<long long>(dim)) +
                                             " exceeds cap " + std::to_string(options.max_dim));
    }

    std::vector<Channel> channels;
    for (std::size_t j = 0; j < n_modes; ++j) {
        if (t.kinds[j] == ModeKind::leaking_plus) {
            channels.push_back({j, diss.gamma_plus * (diss.nbar_plus + 1.0), diss.gamma_plus * diss.nbar_plus});
        } else if (t.kinds[j] == ModeKind::leaking_minus) {
            channels.push_back({j, diss.gamma_minus * (diss.nbar_minus + 1.0), diss.gamma_minus * diss.nbar_minus});
        }
    }
    const Lindbladian lind(n_modes, options.cutoff, channels);

    // product initial state, mode 0 fastest
    std::vector<Eigen::MatrixXcd> locals;
    for (const auto& p : preps) locals.push_back(single_mode(p, options.cutoff));
    const auto d = static_cast<Eigen::Index>(lind.dim());
    Eigen::MatrixXcd rho0(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        for (Eigen::Index m = 0; m < d; ++m) {
            cplx v{1.0, 0.0};
            for (std::size_t j = 0; j < n_modes; ++j) {
                v *= locals[j](lind.occupation(j, static_cast<std::size_t>(m)),
                               lind.occupation(j, static_cast<std::size_t>(n)));
            }
            rho0(m, n) = v;
        }
    }

    double rate_scale = 0.0;
    for (const auto& ch : channels) rate_scale += (ch.down + ch.up) * static_cast<double>(options.cutoff);
    double spacing = times.front() > 0.0 ? times.front() : std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] > times[i - 1]) spacing = std::min(spacing, times[i] - times[i - 1]);
    }
    double step = rate_scale > 0.0 ? 0.25 / rate_scale : spacing;
    if (std::isfinite(spacing)) step = std::min(step, spacing);
    if (!std::isfinite(step)) step = 1.0;

    const Run run(t, lind, options.cutoff, options);
    RunOutput coarse = run(rho0, times, step, false);
    for (std::size_t h = 0;; ++h) {
        RunOutput fine = run(rho0, times, 0.5 * step, true);
        const double change = max_difference(coarse, fine);
        if (change < options.step_tolerance) {
            if (fine.max_trace_dev > options.trace_tolerance) {
                throw Error(ErrorCode::integration_accuracy,
                            "fock oracle: trace deviation " + std::to_string(fine.max_trace_dev));
            }
            FockResult res;
            res.step = 0.5 * step;
            res.halving_change = change;
            res.max_trace_deviation = fine.max_trace_dev;
            res.min_eigenvalue = fine.min_eig;
            res.final_purity_protected = fine.final_purity;
            res.final_rho = std::move(fine.final_rho);
            res.trajectory.times = times;
            for (std::size_t c = 0; c < fine.labels.size(); ++c) {
                res.trajectory.add(fine.labels[c], std::move(fine.columns[c]));
            }
            res.trajectory.metadata["engine"] = "fock";
            res.trajectory.metadata["cutoff"] = std::to_string(options.cutoff);
            return res;
        }
        if (h + 1 >= options.max_halvings) {
            throw Error(ErrorCode::integration_accuracy,
                        "fock oracle: step halving did not converge (change " + std::to_string(change) + ")");
        }
        step *= 0.5;
        coarse = std::move(fine);
    }
}

FockResult fock_oracle_evolve(const NetworkParams& params, const ModeDecomposition& modes,
                              const DissipationSpec& diss, const std::vector<ModePrep>& preps,
                              const std::vector<double>& times, const FockOptions& options) {
    return fock_oracle_evolve(build_canonical_transform(modes, params), diss, preps, times, options);
}

} // namespace starnet
