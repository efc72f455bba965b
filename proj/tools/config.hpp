// config.hpp — run configuration file
//
// INI-style grammar, one setting per line:
//
//   # comment            ; comment
//   [section]
//   key = value          value: number | word | comma-separated list
//
// Sections and keys are listed in README.md. Every problem is reported with
// the file line and the dotted field name.

#pragma once

#include "starnet/starnet.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace starnet::cli {

struct RunConfig {
    NetworkParams network;
    bool has_couplings{false};

    RateOverride rate_override;

    StateFrame state_frame{StateFrame::physical};
    std::vector<ModePrep> initial_state; // empty = all vacuum

    double t_max{10.0};
    std::size_t samples{1001};

    Frame frame{Frame::perturbative};
    double window{0.25};
    std::vector<std::string> observables;

    double g_min{1.0};
    double g_max{100.0};
    std::size_t steps{50};
    std::vector<double> offsets;
    double fit_threshold{20.0};

    FockOptions fock;

    std::string out_dir{"."};
    std::vector<std::string> formats{"csv", "json"};

    bool wants(const std::string& format) const;
};

// Parse configuration text. `origin` prefixes error messages (usually the path).
// Throws Error{parameter}.
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::filesystem::path& path);

enum class Command { modes, sweep, evolve, oracle };
std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command c);

// Command-specific required fields and cross-field checks.
void validate_for(const RunConfig& cfg, Command command);

nlohmann::json to_json(const RunConfig& cfg);
RunConfig from_json(const nlohmann::json& j);

std::string format_prep(const ModePrep& p);
ModePrep parse_prep(const std::string& text); // throws Error{parameter}

} // namespace starnet::cli
