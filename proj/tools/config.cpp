#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace starnet::cli {

namespace {

const std::set<std::string> kKnownKeys = {
    "network.n",          "network.mass",        "network.hooke",        "network.couplings",
    "dissipation.gamma0", "dissipation.temperature", "dissipation.gamma_plus",
    "dissipation.gamma_minus",
    "initial_state.frame", "initial_state.modes",
    "time.t_max",         "time.samples",
    "dynamics.frame",     "dynamics.window",     "dynamics.observables",
    "sweep.g_min",        "sweep.g_max",         "sweep.steps",          "sweep.offsets",
    "sweep.fit_threshold",
    "oracle.cutoff",      "oracle.max_dim",
    "output.directory",   "output.formats",
};

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

// Split on commas that are not inside parentheses.
std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

std::optional<double> to_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (pos != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

struct Entry {
    std::string value;
    int line{0};
};

class Settings {
public:
    explicit Settings(std::string origin) : origin_(std::move(origin)) {}

    void put(const std::string& key, const std::string& value, int line) {
        if (!kKnownKeys.count(key)) fail(line, key, "unknown setting");
        if (entries_.count(key)) fail(line, key, "duplicate setting (first on line " +
                                                     std::to_string(entries_[key].line) + ")");
        entries_[key] = {value, line};
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    double number(const std::string& key) const {
        const Entry& e = entries_.at(key);
        const auto v = to_number(e.value);
        if (!v) fail(e.line, key, "expected a number, got '" + e.value + "'");
        return *v;
    }

    std::size_t count(const std::string& key) const {
        const Entry& e = entries_.at(key);
        const auto v = to_number(e.value);
        if (!v || *v < 0.0 || std::floor(*v) != *v) {
            fail(e.line, key, "expected a non-negative integer, got '" + e.value + "'");
        }
        return static_cast<std::size_t>(*v);
    }

    std::vector<double> numbers(const std::string& key) const {
        const Entry& e = entries_.at(key);
        std::vector<double> out;
        for (const auto& item : split_list(e.value)) {
            const auto v = to_number(item);
            if (!v) fail(e.line, key, "expected a list of numbers, bad entry '" + item + "'");
            out.push_back(*v);
        }
        return out;
    }

    std::vector<std::string> words(const std::string& key) const { return split_list(entries_.at(key).value); }

    std::string word(const std::string& key) const { return entries_.at(key).value; }

    int line(const std::string& key) const { return entries_.at(key).line; }

    [[noreturn]] void fail(int line, const std::string& key, const std::string& msg) const {
        throw Error(ErrorCode::parameter, origin_ + ":" + std::to_string(line) + ": " + key + ": " + msg);
    }

private:
    std::string origin_;
    std::map<std::string, Entry> entries_;
};

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

bool RunConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ModePrep parse_prep(const std::string& raw) {
    const std::string text = trim(raw);
    if (text == "vacuum") return ModePrep::vacuum();
    const auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')') {
        throw Error(ErrorCode::parameter, "bad mode preparation '" + text +
                                              "' (use vacuum, coherent(re[, im]) or thermal(nbar))");
    }
    const std::string kind = trim(text.substr(0, open));
    const auto args = split_list(text.substr(open + 1, text.size() - open - 2));
    std::vector<double> nums;
    for (const auto& a : args) {
        const auto v = to_number(a);
        if (!v) throw Error(ErrorCode::parameter, "bad number '" + a + "' in '" + text + "'");
        nums.push_back(*v);
    }
    if (kind == "coherent" && (nums.size() == 1 || nums.size() == 2)) {
        return ModePrep::coherent({nums[0], nums.size() == 2 ? nums[1] : 0.0});
    }
    if (kind == "thermal" && nums.size() == 1) {
        if (nums[0] < 0.0) throw Error(ErrorCode::parameter, "thermal occupation must be >= 0 in '" + text + "'");
        return ModePrep::thermal(nums[0]);
    }
    throw Error(ErrorCode::parameter, "bad mode preparation '" + text + "'");
}

std::string format_prep(const ModePrep& p) {
    switch (p.kind) {
    case ModePrep::Kind::vacuum: return "vacuum";
    case ModePrep::Kind::coherent:
        if (p.amplitude.imag() == 0.0) return "coherent(" + format_number(p.amplitude.real()) + ")";
        return "coherent(" + format_number(p.amplitude.real()) + ", " + format_number(p.amplitude.imag()) + ")";
    case ModePrep::Kind::thermal: return "thermal(" + format_number(p.nbar) + ")";
    }
    return "vacuum";
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    Settings s(origin);
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto cut = raw.find_first_of("#;");
        std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') s.fail(line_no, line, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) s.fail(line_no, line, "expected 'key = value'");
        if (section.empty()) s.fail(line_no, trim(line.substr(0, eq)), "setting outside of a [section]");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) s.fail(line_no, key, "empty value");
        s.put(key, value, line_no);
    }

    RunConfig cfg;
    if (!s.has("network.n")) s.fail(line_no, "network.n", "missing required field");
    if (!s.has("network.hooke")) s.fail(line_no, "network.hooke", "missing required field");
    cfg.network.n = s.count("network.n");
    if (s.has("network.mass")) cfg.network.mass = s.number("network.mass");
    cfg.network.hooke = s.numbers("network.hooke");
    if (s.has("network.couplings")) {
        cfg.network.couplings = s.numbers("network.couplings");
        cfg.has_couplings = true;
    }
    if (s.has("dissipation.gamma0")) cfg.network.bath_rate = s.number("dissipation.gamma0");
    if (s.has("dissipation.temperature")) cfg.network.bath_temp = s.number("dissipation.temperature");
    if (s.has("dissipation.gamma_plus")) cfg.rate_override.gamma_plus = s.number("dissipation.gamma_plus");
    if (s.has("dissipation.gamma_minus")) cfg.rate_override.gamma_minus = s.number("dissipation.gamma_minus");

    // field-level checks that do not need couplings
    const auto field_check = [&](const std::string& key, bool ok, const std::string& msg) {
        if (!ok) s.fail(s.has(key) ? s.line(key) : line_no, key, msg);
    };
    field_check("network.n", cfg.network.n >= 1, "need at least one outer oscillator");
    field_check("network.mass", cfg.network.mass > 0.0, "must be > 0");
    field_check("network.hooke", cfg.network.hooke.size() == cfg.network.n + 1,
                "expected " + std::to_string(cfg.network.n + 1) + " entries");
    field_check("network.hooke",
                std::all_of(cfg.network.hooke.begin(), cfg.network.hooke.end(), [](double k) { return k > 0.0; }),
                "entries must be > 0");
    if (cfg.has_couplings) {
        field_check("network.couplings", cfg.network.couplings.size() == cfg.network.n,
                    "expected " + std::to_string(cfg.network.n) + " entries");
        field_check("network.couplings",
                    std::all_of(cfg.network.couplings.begin(), cfg.network.couplings.end(),
                                [](double g) { return g >= 0.0; }),
                    "entries must be >= 0");
    }
    field_check("dissipation.gamma0", cfg.network.bath_rate >= 0.0, "must be >= 0");
    field_check("dissipation.temperature", cfg.network.bath_temp >= 0.0, "must be >= 0");
    field_check("dissipation.gamma_plus", cfg.rate_override.gamma_plus.value_or(0.0) >= 0.0, "must be >= 0");
    field_check("dissipation.gamma_minus", cfg.rate_override.gamma_minus.value_or(0.0) >= 0.0, "must be >= 0");

    if (s.has("initial_state.frame")) {
        const auto f = s.word("initial_state.frame");
        if (f == "physical") cfg.state_frame = StateFrame::physical;
        else if (f == "normal") cfg.state_frame = StateFrame::normal;
        else s.fail(s.line("initial_state.frame"), "initial_state.frame", "expected physical or normal");
    }
    if (s.has("initial_state.modes")) {
        for (const auto& item : s.words("initial_state.modes")) {
            try {
                cfg.initial_state.push_back(parse_prep(item));
            } catch (const Error& e) {
                s.fail(s.line("initial_state.modes"), "initial_state.modes", e.what());
            }
        }
        field_check("initial_state.modes", cfg.initial_state.size() == cfg.network.n + 1,
                    "expected " + std::to_string(cfg.network.n + 1) + " entries");
    }

    if (s.has("time.t_max")) cfg.t_max = s.number("time.t_max");
    if (s.has("time.samples")) cfg.samples = s.count("time.samples");
    field_check("time.t_max", cfg.t_max > 0.0, "must be > 0");
    field_check("time.samples", cfg.samples >= 2, "need at least 2 samples");

    if (s.has("dynamics.frame")) {
        const auto f = s.word("dynamics.frame");
        if (f == "perturbative") cfg.frame = Frame::perturbative;
        else if (f == "exact") cfg.frame = Frame::exact;
        else s.fail(s.line("dynamics.frame"), "dynamics.frame", "expected perturbative or exact");
    }
    if (s.has("dynamics.window")) cfg.window = s.number("dynamics.window");
    field_check("dynamics.window", cfg.window > 0.0 && cfg.window <= 1.0, "must lie in (0, 1]");
    if (s.has("dynamics.observables")) cfg.observables = s.words("dynamics.observables");

    if (s.has("sweep.g_min")) cfg.g_min = s.number("sweep.g_min");
    if (s.has("sweep.g_max")) cfg.g_max = s.number("sweep.g_max");
    if (s.has("sweep.steps")) cfg.steps = s.count("sweep.steps");
    if (s.has("sweep.fit_threshold")) cfg.fit_threshold = s.number("sweep.fit_threshold");
    if (s.has("sweep.offsets")) {
        cfg.offsets = s.numbers("sweep.offsets");
        field_check("sweep.offsets", cfg.offsets.size() == cfg.network.n,
                    "expected " + std::to_string(cfg.network.n) + " entries");
    }
    field_check("sweep.g_min", cfg.g_min > 0.0, "must be > 0");
    field_check("sweep.g_max", cfg.g_max > cfg.g_min, "must exceed sweep.g_min");
    field_check("sweep.steps", cfg.steps >= 2, "need at least 2 grid points");

    if (s.has("oracle.cutoff")) cfg.fock.cutoff = s.count("oracle.cutoff");
    if (s.has("oracle.max_dim")) cfg.fock.max_dim = s.count("oracle.max_dim");
    field_check("oracle.cutoff", cfg.fock.cutoff >= 2, "must be >= 2");

    if (s.has("output.directory")) cfg.out_dir = s.word("output.directory");
    if (s.has("output.formats")) {
        cfg.formats = s.words("output.formats");
        for (const auto& f : cfg.formats) {
            if (f != "csv" && f != "json") s.fail(s.line("output.formats"), "output.formats", "unknown format '" + f + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::parameter, "cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.string());
}

std::optional<Command> parse_command(const std::string& name) {
    if (name == "modes") return Command::modes;
    if (name == "sweep") return Command::sweep;
    if (name == "evolve") return Command::evolve;
    if (name == "oracle") return Command::oracle;
    return std::nullopt;
}

std::string to_string(Command c) {
    switch (c) {
    case Command::modes: return "modes";
    case Command::sweep: return "sweep";
    case Command::evolve: return "evolve";
    case Command::oracle: return "oracle";
    }
    return "unknown";
}

void validate_for(const RunConfig& cfg, Command command) {
    const auto missing = [](const std::string& key) {
        throw Error(ErrorCode::parameter, key + ": missing required field");
    };
    switch (command) {
    case Command::sweep:
        if (cfg.offsets.empty()) missing("sweep.offsets");
        break;
    case Command::oracle:
        if (!cfg.initial_state.empty() && cfg.state_frame != StateFrame::normal) {
            throw Error(ErrorCode::parameter,
                        "initial_state.frame: the oracle prepares product states of normal modes; use 'normal'");
        }
        [[fallthrough]];
    case Command::modes:
    case Command::evolve:
        if (!cfg.has_couplings) missing("network.couplings");
        validate(cfg.network);
        break;
    }
}

nlohmann::json to_json(const RunConfig& cfg) {
    using nlohmann::json;
    json j;
    j["network"] = {{"n", cfg.network.n},
                    {"mass", cfg.network.mass},
                    {"hooke", cfg.network.hooke}};
    if (cfg.has_couplings) j["network"]["couplings"] = cfg.network.couplings;
    j["dissipation"] = {{"gamma0", cfg.network.bath_rate}, {"temperature", cfg.network.bath_temp}};
    if (cfg.rate_override.gamma_plus) j["dissipation"]["gamma_plus"] = *cfg.rate_override.gamma_plus;
    if (cfg.rate_override.gamma_minus) j["dissipation"]["gamma_minus"] = *cfg.rate_override.gamma_minus;
    json modes = json::array();
    for (const auto& p : cfg.initial_state) modes.push_back(format_prep(p));
    j["initial_state"] = {{"frame", cfg.state_frame == StateFrame::normal ? "normal" : "physical"},
                          {"modes", modes}};
    j["time"] = {{"t_max", cfg.t_max}, {"samples", cfg.samples}};
    j["dynamics"] = {{"frame", cfg.frame == Frame::exact ? "exact" : "perturbative"},
                     {"window", cfg.window},
                     {"observables", cfg.observables}};
    j["sweep"] = {{"g_min", cfg.g_min},
                  {"g_max", cfg.g_max},
                  {"steps", cfg.steps},
                  {"offsets", cfg.offsets},
                  {"fit_threshold", cfg.fit_threshold}};
    j["oracle"] = {{"cutoff", cfg.fock.cutoff}, {"max_dim", cfg.fock.max_dim}};
    j["output"] = {{"directory", cfg.out_dir}, {"formats", cfg.formats}};
    return j;
}

RunConfig from_json(const nlohmann::json& j) {
    try {
        RunConfig cfg;
        const auto& net = j.at("network");
        cfg.network.n = net.at("n").get<std::size_t>();
        cfg.network.mass = net.at("mass").get<double>();
        cfg.network.hooke = net.at("hooke").get<std::vector<double>>();
        if (net.contains("couplings")) {
            cfg.network.couplings = net.at("couplings").get<std::vector<double>>();
            cfg.has_couplings = true;
        }
        const auto& diss = j.at("dissipation");
        cfg.network.bath_rate = diss.at("gamma0").get<double>();
        cfg.network.bath_temp = diss.at("temperature").get<double>();
        if (diss.contains("gamma_plus")) cfg.rate_override.gamma_plus = diss.at("gamma_plus").get<double>();
        if (diss.contains("gamma_minus")) cfg.rate_override.gamma_minus = diss.at("gamma_minus").get<double>();
        const auto& init = j.at("initial_state");
        cfg.state_frame = init.at("frame").get<std::string>() == "normal" ? StateFrame::normal : StateFrame::physical;
        for (const auto& p : init.at("modes")) cfg.initial_state.push_back(parse_prep(p.get<std::string>()));
        cfg.t_max = j.at("time").at("t_max").get<double>();
        cfg.samples = j.at("time").at("samples").get<std::size_t>();
        const auto& dyn = j.at("dynamics");
        cfg.frame = dyn.at("frame").get<std::string>() == "exact" ? Frame::exact : Frame::perturbative;
        cfg.window = dyn.at("window").get<double>();
        cfg.observables = dyn.at("observables").get<std::vector<std::string>>();
        const auto& sw = j.at("sweep");
        cfg.g_min = sw.at("g_min").get<double>();
        cfg.g_max = sw.at("g_max").get<double>();
        cfg.steps = sw.at("steps").get<std::size_t>();
        cfg.offsets = sw.at("offsets").get<std::vector<double>>();
        cfg.fit_threshold = sw.at("fit_threshold").get<double>();
        cfg.fock.cutoff = j.at("oracle").at("cutoff").get<std::size_t>();
        cfg.fock.max_dim = j.at("oracle").at("max_dim").get<std::size_t>();
        cfg.out_dir = j.at("output").at("directory").get<std::string>();
        cfg.formats = j.at("output").at("formats").get<std::vector<std::string>>();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parameter, std::string("config json: ") + e.what());
    }
}

} // namespace starnet::cli
