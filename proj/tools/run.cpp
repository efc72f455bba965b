#include "run.hpp"

#include "output.hpp"

#include <cmath>
#include <limits>

namespace starnet::cli {

namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

std::vector<ModePrep> preps_or_vacuum(const RunConfig& cfg) {
    if (!cfg.initial_state.empty()) return cfg.initial_state;
    return std::vector<ModePrep>(cfg.network.dim(), ModePrep::vacuum());
}

CanonicalTransform transform_for(const RunConfig& cfg, const PotentialDecomposition& decomp,
                                 const ModeDecomposition& modes) {
    if (cfg.frame == Frame::exact) return build_exact_transform(exact_diagonalize(decomp), cfg.network);
    return build_canonical_transform(modes, cfg.network);
}

void emit(RunOutcome& out, const RunConfig& cfg, const std::filesystem::path& path, const std::string& text,
          const std::string& format) {
    if (!cfg.wants(format)) return;
    write_text(path, text);
    out.artifacts.push_back(path);
}

void run_modes(const RunConfig& cfg, const std::filesystem::path& dir, RunOutcome& out) {
    const PotentialDecomposition decomp = build_potential(cfg.network);
    const ModeDecomposition modes = analyze_modes(decomp);
    const ExactSpectrum exact = exact_diagonalize(decomp);
    const auto order = exact.declared_order();

    // csv rows ascending in frequency: minus, protected..., plus
    CsvTable table;
    table.header = {"mode", "k_pert", "freq_pert", "k_exact", "freq_exact"};
    std::vector<std::size_t> rows;
    rows.push_back(1);
    for (std::size_t j = 2; j < modes.dim(); ++j) rows.push_back(j);
    rows.push_back(0);
    for (std::size_t j : rows) {
        const auto i = static_cast<Eigen::Index>(j);
        const auto src = static_cast<Eigen::Index>(order[j]);
        table.row_labels.push_back(mode_tag(j));
        table.rows.push_back({modes.k_corr(i), modes.freqs(i), exact.eigenvalues(src), exact.freqs(src)});
    }
    json list = json::array();
    for (std::size_t j = 0; j < modes.dim(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        const auto src = static_cast<Eigen::Index>(order[j]);
        const char* kind = mode_kind(j) == ModeKind::protected_mode ? "protected" : "leaking";
        list.push_back({{"tag", mode_tag(j)},
                        {"kind", kind},
                        {"k_pert", modes.k_corr(i)},
                        {"freq_pert", modes.freqs(i)},
                        {"k_exact", exact.eigenvalues(src)},
                        {"freq_exact", exact.freqs(src)}});
    }
    emit(out, cfg, dir / "modes.csv", to_csv(table), "csv");

    const SqueezingEstimate sq = squeezing_estimate(modes, decomp);
    out.report["result"] = {
        {"modes", list},
        {"xi", decomp.xi ? json(*decomp.xi) : json(nullptr)},
        {"regime_warning", modes.regime_warning},
        {"g_plus", modes.g_plus},
        {"g_minus", modes.g_minus},
        {"theta_mix", modes.theta_mix},
        {"k_av", decomp.k_av},
        {"g_av", decomp.g_av},
        {"delta", decomp.delta},
        {"lambda_sq", decomp.lambda_sq},
        {"exact_residual", exact.max_residual},
        {"squeezing",
         {{"approx_freqs", vec_json(sq.approx_freqs)},
          {"spread_approx", sq.spread_approx},
          {"exact_freqs", vec_json(sq.exact_freqs)},
          {"spread_exact", sq.spread_exact},
          {"no_pair", sq.no_pair}}},
    };
}

void run_sweep(const RunConfig& cfg, const std::filesystem::path& dir, RunOutcome& out) {
    const SweepResult res = frequency_sweep(cfg.network, cfg.g_min, cfg.g_max, cfg.steps, cfg.offsets);
    const std::size_t dim = cfg.network.dim();

    CsvTable table;
    table.header = {"g", "g_av", "xi"};
    for (std::size_t j = 0; j < dim; ++j) table.header.push_back("freq_pert_" + mode_tag(j));
    for (std::size_t j = 0; j < dim; ++j) table.header.push_back("freq_exact_" + mode_tag(j));
    table.header.push_back("spread_exact");
    table.header.push_back("spread_pert");
    for (const auto& pt : res.points) {
        std::vector<double> row{pt.g, pt.g_av, pt.xi};
        for (Eigen::Index j = 0; j < pt.freqs_pert.size(); ++j) row.push_back(pt.freqs_pert(j));
        for (Eigen::Index j = 0; j < pt.freqs_exact.size(); ++j) row.push_back(pt.freqs_exact(j));
        row.push_back(pt.spread_exact);
        row.push_back(pt.spread_pert);
        table.rows.push_back(std::move(row));
    }
    emit(out, cfg, dir / "sweep.csv", to_csv(table), "csv");

    json fit;
    try {
        const ScalingFit f = scaling_fit(res, cfg.fit_threshold);
        fit = {{"exponent", f.exponent},
               {"stderr", f.stderr_exponent},
               {"log_constant", f.log_constant},
               {"points", f.points},
               {"g_threshold", cfg.fit_threshold}};
    } catch (const Error& e) {
        fit = {{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
    }
    out.report["result"] = {{"points", res.points.size()},
                            {"spread_first", res.points.front().spread_exact},
                            {"spread_last", res.points.back().spread_exact},
                            {"fit", fit}};
}

void run_evolve(const RunConfig& cfg, const std::filesystem::path& dir, RunOutcome& out) {
    const PotentialDecomposition decomp = build_potential(cfg.network);
    const ModeDecomposition modes = analyze_modes(decomp);
    const CanonicalTransform t = transform_for(cfg, decomp, modes);
    const DissipationSpec diss = make_dissipation(modes, t, cfg.network, cfg.rate_override);
    const GaussianState state0 = init_state(preps_or_vacuum(cfg), cfg.state_frame);
    const auto times = linear_grid(cfg.t_max, cfg.samples);

    std::vector<std::string> labels;
    for (std::size_t l = 1; l <= cfg.network.dim(); ++l) labels.push_back("x_" + std::to_string(l));
    for (const auto& o : cfg.observables) {
        if (std::find(labels.begin(), labels.end(), o) == labels.end()) labels.push_back(o);
    }
    const Trajectory traj = position_trajectory(state0, t, diss, times, labels);
    emit(out, cfg, dir / "trajectory.csv", to_csv(to_table(traj)), "csv");

    const GaussianState normal0 = to_frame(state0, t, StateFrame::normal);
    const GaussianState final_state = evolve_gaussian(normal0, diss, t, times.back());

    json metrics;
    if (cfg.network.n >= 2) {
        std::vector<std::string> outer;
        for (std::size_t l = 1; l <= cfg.network.n; ++l) outer.push_back("x_" + std::to_string(l));
        try {
            const SyncMetrics m = sync_metrics(traj, outer, cfg.window);
            json pairs = json::array();
            for (const auto& p : m.pairs) pairs.push_back({{"a", p.first}, {"b", p.second}, {"correlation", p.correlation}});
            metrics = {{"window_start", m.window_start},
                       {"pairs", pairs},
                       {"min_abs_correlation", m.min_abs_correlation},
                       {"dominant_freqs", m.dominant_freqs},
                       {"max_freq_difference", m.max_freq_difference}};
        } catch (const Error& e) {
            metrics = {{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
        }
    }
    out.report["result"] = {
        {"frame", cfg.frame == Frame::exact ? "exact" : "perturbative"},
        {"dissipation",
         {{"gamma_plus", diss.gamma_plus},
          {"gamma_minus", diss.gamma_minus},
          {"nbar_plus", diss.nbar_plus},
          {"nbar_minus", diss.nbar_minus}}},
        {"freqs_normal", vec_json(t.freqs_normal)},
        {"common_frequency", std::sqrt(decomp.shift / decomp.mass)},
        {"xi", decomp.xi ? json(*decomp.xi) : json(nullptr)},
        {"regime_warning", modes.regime_warning},
        {"initial_occupations", vec_json(occupations(normal0))},
        {"final_occupations", vec_json(occupations(final_state))},
        {"final_uncertainty_min_eigenvalue", uncertainty_min_eigenvalue(final_state)},
        {"sync", metrics},
    };
}

void run_oracle(const RunConfig& cfg, const std::filesystem::path& dir, RunOutcome& out) {
    const PotentialDecomposition decomp = build_potential(cfg.network);
    const ModeDecomposition modes = analyze_modes(decomp);
    const CanonicalTransform t = transform_for(cfg, decomp, modes);
    const DissipationSpec diss = make_dissipation(modes, t, cfg.network, cfg.rate_override);
    const auto preps = preps_or_vacuum(cfg);
    const auto times = linear_grid(cfg.t_max, cfg.samples);

    const FockResult fock = fock_oracle_evolve(t, diss, preps, times, cfg.fock);
    const Trajectory gauss = position_trajectory(init_state(preps, StateFrame::normal), t, diss, times);

    CsvTable table;
    table.header = {"t"};
    const std::size_t dim = cfg.network.dim();
    for (std::size_t l = 1; l <= dim; ++l) table.header.push_back("x_" + std::to_string(l) + "_fock");
    for (std::size_t l = 1; l <= dim; ++l) table.header.push_back("x_" + std::to_string(l) + "_gaussian");
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i]};
        for (std::size_t l = 1; l <= dim; ++l) row.push_back(fock.trajectory.series("x_" + std::to_string(l))[i]);
        for (std::size_t l = 1; l <= dim; ++l) {
            const double g = gauss.series("x_" + std::to_string(l))[i];
            row.push_back(g);
            worst = std::max(worst, std::abs(g - row[l]));
        }
        table.rows.push_back(std::move(row));
    }
    emit(out, cfg, dir / "oracle.csv", to_csv(table), "csv");
    out.report["result"] = {{"max_position_deviation", worst},
                            {"max_trace_deviation", fock.max_trace_deviation},
                            {"min_eigenvalue", fock.min_eigenvalue},
                            {"step", fock.step},
                            {"halving_change", fock.halving_change},
                            {"final_purity_protected", fock.final_purity_protected},
                            {"cutoff", cfg.fock.cutoff}};
}

} // namespace

RunOutcome run(Command command, const RunConfig& cfg, const std::filesystem::path& out_dir) {
    RunOutcome out;
    out.report["command"] = to_string(command);
    out.report["config"] = to_json(cfg);
    bool dir_ok = false;
    try {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec || !std::filesystem::is_directory(out_dir)) {
            throw Error(ErrorCode::resource, "cannot create output directory '" + out_dir.string() + "'");
        }
        dir_ok = true;
        validate_for(cfg, command);
        switch (command) {
        case Command::modes: run_modes(cfg, out_dir, out); break;
        case Command::sweep: run_sweep(cfg, out_dir, out); break;
        case Command::evolve: run_evolve(cfg, out_dir, out); break;
        case Command::oracle: run_oracle(cfg, out_dir, out); break;
        }
        out.report["status"] = "ok";
        out.exit_code = 0;
    } catch (const Error& e) {
        out.report["status"] = "error";
        out.report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
        out.exit_code = is_numeric(e.code()) ? 2 : 1;
    }
    if (dir_ok && cfg.wants("json")) {
        try {
            const auto path = out_dir / "report.json";
            write_text(path, out.report.dump(2) + "\n");
            out.artifacts.push_back(path);
        } catch (const Error& e) {
            out.report["status"] = "error";
            out.report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
            out.exit_code = 2;
        }
    }
    return out;
}

RunOutcome config_failure(Command command, const Error& error, const std::filesystem::path& out_dir) {
    RunOutcome out;
    out.report["command"] = to_string(command);
    out.report["status"] = "error";
    out.report["error"] = {{"code", to_string(error.code())}, {"message", error.what()}};
    out.exit_code = is_numeric(error.code()) ? 2 : 1;
    if (out_dir.empty()) return out;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return out;
    try {
        const auto path = out_dir / "report.json";
        write_text(path, out.report.dump(2) + "\n");
        out.artifacts.push_back(path);
    } catch (const Error&) {
    }
    return out;
}

} // namespace starnet::cli
