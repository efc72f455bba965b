#include <doctest.h>

#include "config.hpp"
#include "output.hpp"
#include "run.hpp"

#include "starnet/error.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace starnet;
using namespace starnet::cli;
namespace fs = std::filesystem;

namespace {

const char* kUniform = R"(# uniform pair
[network]
n = 2
mass = 1
hooke = 1, 1, 1
couplings = 1, 1

[dissipation]
gamma0 = 0.1
temperature = 0

[initial_state]
frame = normal
modes = coherent(0.5), coherent(0.5, -0.25), thermal(0.1)

[time]
t_max = 20
samples = 201

[sweep]
g_min = 1
g_max = 20
steps = 12
offsets = 0, 0.5
fit_threshold = 2

[oracle]
cutoff = 5
)";

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "starnet_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string parse_error(const std::string& text) {
    try {
        parse_config(text, "cfg");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parameter);
        return e.what();
    }
    FAIL("expected a parameter error");
    return {};
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(STARNET_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config(kUniform);
    CHECK(cfg.network.n == 2);
    CHECK(cfg.network.hooke == std::vector<double>{1, 1, 1});
    CHECK(cfg.network.bath_rate == 0.1);
    CHECK(cfg.state_frame == StateFrame::normal);
    REQUIRE(cfg.initial_state.size() == 3);
    CHECK(cfg.initial_state[1].amplitude == std::complex<double>(0.5, -0.25));
    CHECK(cfg.initial_state[2].kind == ModePrep::Kind::thermal);
    CHECK(cfg.samples == 201);
    CHECK(cfg.offsets == std::vector<double>{0, 0.5});
    CHECK(cfg.fock.cutoff == 5);
    CHECK(cfg.wants("csv"));
}

TEST_CASE("config errors carry line and field") {
    CHECK(parse_error("[network]\nn = 2\nhooke = 1, 1\ncouplings = 1, 1\n").find("network.hooke") != std::string::npos);
    const auto bad_number = parse_error("[network]\nn = 2\nhooke = 1, x, 1\n");
    CHECK(bad_number.find("cfg:3") != std::string::npos);
    CHECK(bad_number.find("network.hooke") != std::string::npos);
    CHECK(parse_error("[network]\nn = 1\nhooke = 1, 1\nfoo = 2\n").find("cfg:4: network.foo") != std::string::npos);
    CHECK(parse_error("[network]\nn = 1\nn = 2\n").find("duplicate") != std::string::npos);
    CHECK(parse_error("[network]\nhooke = 1, 1\n").find("network.n: missing required field") != std::string::npos);
    CHECK(parse_error("[network]\nn = 1\nhooke = 1, -1\n").find("network.hooke") != std::string::npos);
    CHECK(parse_error(std::string(kUniform) + "[dynamics]\nwindow = 2\n").find("dynamics.window") != std::string::npos);
    CHECK_THROWS_AS(parse_prep("squeezed(1)"), Error);
    CHECK(format_prep(parse_prep("coherent(0.25, 1)")) == "coherent(0.25, 1)");
}

TEST_CASE("command-specific required fields") {
    auto cfg = parse_config("[network]\nn = 2\nhooke = 1, 1, 1\n");
    try {
        validate_for(cfg, Command::modes);
        FAIL("expected missing couplings");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("network.couplings") != std::string::npos);
    }
}

TEST_CASE("config survives a trip through the JSON report") {
    const auto cfg = parse_config(kUniform);
    const auto again = from_json(to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));
    CHECK(again.network.couplings == cfg.network.couplings);
    CHECK(again.initial_state.size() == 3);
}

TEST_CASE("deterministic number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    CHECK(std::stod(format_double(std::sqrt(2.0))) == std::sqrt(2.0));
}

TEST_CASE("modes command on the uniform pair") {
    auto cfg = parse_config(kUniform);
    const auto dir = scratch("modes");
    const auto out = run(Command::modes, cfg, dir);
    REQUIRE(out.exit_code == 0);
    const auto& modes = out.report["result"]["modes"];
    CHECK(modes[0]["tag"] == "plus");
    CHECK(modes[0]["freq_pert"].get<double>() == doctest::Approx(2.0));
    CHECK(modes[1]["freq_pert"].get<double>() == doctest::Approx(1.0));
    CHECK(modes[2]["freq_pert"].get<double>() == doctest::Approx(std::sqrt(2.0)));
    CHECK(modes[2]["kind"] == "protected");

    const std::string csv = slurp(dir / "modes.csv");
    std::istringstream lines(csv);
    std::string header, r1, r2, r3;
    std::getline(lines, header);
    std::getline(lines, r1);
    std::getline(lines, r2);
    std::getline(lines, r3);
    CHECK(header == "mode,k_pert,freq_pert,k_exact,freq_exact");
    CHECK(r1.rfind("minus,", 0) == 0);
    CHECK(r2.rfind("0_1,", 0) == 0);
    CHECK(r3.rfind("plus,", 0) == 0);
    CHECK(r2.find(format_double(std::sqrt(2.0))) != std::string::npos);
    CHECK(fs::exists(dir / "report.json"));
}

TEST_CASE("repeated runs give identical CSV bytes") {
    const auto cfg = parse_config(kUniform);
    for (Command c : {Command::modes, Command::sweep, Command::evolve}) {
        const auto a = scratch("det_a"), b = scratch("det_b");
        const auto ra = run(c, cfg, a);
        const auto rb = run(c, cfg, b);
        REQUIRE(ra.exit_code == 0);
        REQUIRE(rb.exit_code == 0);
        for (const auto& p : ra.artifacts) {
            if (p.extension() != ".csv") continue;
            CHECK(slurp(p) == slurp(b / p.filename()));
        }
    }
}

TEST_CASE("oracle command agrees with the Gaussian engine") {
    const auto cfg = parse_config(kUniform);
    const auto out = run(Command::oracle, cfg, scratch("oracle"));
    REQUIRE(out.exit_code == 0);
    CHECK(out.report["result"]["max_trace_deviation"].get<double>() < 1e-6);
    CHECK(out.report["result"]["max_position_deviation"].get<double>() < 1e-2);
}

TEST_CASE("errors map to exit codes and report codes") {
    auto cfg = parse_config(kUniform);
    cfg.fock.cutoff = 40; // 64000 > max_dim
    const auto out = run(Command::oracle, cfg, scratch("resource"));
    CHECK(out.exit_code == 2);
    CHECK(out.report["error"]["code"] == "resource_error");

    cfg = parse_config("[network]\nn = 2\nhooke = 1, 1, 1\ncouplings = 1, 1\n");
    const auto missing = run(Command::sweep, cfg, scratch("missing"));
    CHECK(missing.exit_code == 1);
    CHECK(missing.report["error"]["code"] == "parameter_error");
    CHECK(missing.report["error"]["message"].get<std::string>().find("sweep.offsets") != std::string::npos);
}

TEST_CASE("command-line binary exit statuses") {
    const auto dir = scratch("binary");
    {
        std::ofstream(dir / "good.ini") << kUniform;
        std::ofstream(dir / "bad.ini") << "[network]\nn = 2\nhooke = 1, 1, 1\n";
    }
    CHECK(run_binary("modes --config " + (dir / "good.ini").string() + " --out " + (dir / "a").string()) == 0);
    CHECK(fs::exists(dir / "a" / "modes.csv"));
    CHECK(run_binary("modes --config " + (dir / "bad.ini").string() + " --out " + (dir / "b").string()) == 1);
    const std::string report = slurp(dir / "b" / "report.json");
    CHECK(report.find("parameter_error") != std::string::npos);
    CHECK(report.find("network.couplings") != std::string::npos);
    CHECK(run_binary("frobnicate") == 1);
    CHECK(run_binary("modes --config " + (dir / "missing.ini").string()) == 1);
}
