#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "capwave/io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("capwave_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Result run(const std::string& args) {
    const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
    const std::string cmd = std::string(CAPWAVE_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

// every file of a run directory except the wall-clock metadata
void check_same_outputs(const fs::path& a, const fs::path& b) {
    int files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        const std::string name = e.path().filename().string();
        if (name == "metadata.json") continue;
        REQUIRE(fs::exists(b / name));
        CHECK_MESSAGE(slurp(e.path()) == slurp(b / name), name);
        ++files;
    }
    CHECK(files > 1);
}

}  // namespace

TEST_CASE("critical Bond numbers") {
    const Result r = run("resonance critical --k0 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("b0=0.2240838") != std::string::npos);
    CHECK(r.out.find("b1=0.2396825") != std::string::npos);
}

TEST_CASE("invalid input exits with 2") {
    CHECK(run("resonance critical").code == 2);
    CHECK(run("--no-such-flag dispersion").code == 2);
    CHECK(run("frobnicate").code == 2);
    const Result r = run("sim run --k0 2 --dt 0");
    CHECK(r.code == 2);
    CHECK(r.err.find("dt") != std::string::npos);
    const Result n = run("nls run --k0 2 --b 0.11220496039122606");
    CHECK(n.code == 2);
    CHECK(n.err.find("second_harmonic_resonance") != std::string::npos);
}

TEST_CASE("numerical failure exits with 3") {
    const Result r = run("sim run --k0 2 --amp 1000 --t-end 5");
    CHECK(r.code == 3);
    CHECK(r.err.find("non-finite") != std::string::npos);
}

TEST_CASE("run directory and metadata") {
    const fs::path d = scratch() / "disp";
    REQUIRE(run("--output-dir " + d.string() + " dispersion --b 0.1 --n 11").code == 0);
    for (const char* f : {"config.json", "metadata.json", "metrics.json"}) CHECK(fs::exists(d / f));
    const capwave::Json meta = capwave::read_json((d / "metadata.json").string());
    CHECK(meta["version"] == capwave::kVersion);
    CHECK(meta["config_hash"].get<std::string>().size() == 16);
    CHECK(meta["wall_time_s"].get<double>() >= 0.0);
}

TEST_CASE("outputs are deterministic") {
    const fs::path a = scratch() / "det_a", b = scratch() / "det_b";
    const std::string args = " wavepacket build --k0 2 --eps 0.2 --b 0.01";
    REQUIRE(run("--output-dir " + a.string() + args).code == 0);
    REQUIRE(run("--output-dir " + b.string() + args).code == 0);
    check_same_outputs(a, b);
    CHECK(capwave::read_json((a / "metadata.json").string())["config_hash"] ==
          capwave::read_json((b / "metadata.json").string())["config_hash"]);

    const fs::path p = scratch() / "plot_a", q = scratch() / "plot_b";
    REQUIRE(run("--output-dir " + p.string() + " --emit-plot-data resonance scan --k0 2").code == 0);
    REQUIRE(run("--output-dir " + q.string() + " --emit-plot-data --parallel resonance scan --k0 2").code == 0);
    CHECK(fs::exists(p / "resonance_panel_9.csv"));
    CHECK(slurp(p / "resonance_panel_5.csv") == slurp(q / "resonance_panel_5.csv"));
}

TEST_CASE("a persisted config reproduces the run") {
    const fs::path a = scratch() / "cfg_a", b = scratch() / "cfg_b";
    REQUIRE(run("--output-dir " + a.string() + " nls run --k0 2 --b 0.01 --tau-end 0.5").code == 0);
    REQUIRE(run("--config " + (a / "config.json").string() + " --output-dir " + b.string() + " nls run").code == 0);
    CHECK(slurp(a / "metrics.json") == slurp(b / "metrics.json"));
    // flags override the file
    const fs::path c = scratch() / "cfg_c";
    REQUIRE(run("--config " + (a / "config.json").string() + " --output-dir " + c.string() + " nls run --tau-end 0.25")
                .code == 0);
    CHECK(slurp(a / "metrics.json") != slurp(c / "metrics.json"));
    CHECK(capwave::read_json((c / "config.json").string())["nls"]["run"]["tau-end"] == 0.25);
}

TEST_CASE("binary field files") {
    const fs::path d = scratch() / "bin";
    REQUIRE(run("--output-dir " + d.string() + " wavepacket build --k0 2 --eps 0.2").code == 0);
    const capwave::CVec u = capwave::read_binary((d / "field_u_m1.bin").string());
    CHECK(fs::file_size(d / "field_u_m1.bin") == 8 + 16 * u.size());
    double m = 0.0;
    for (const auto& z : u) m = std::max(m, std::abs(z.imag()));
    CHECK(m < 1e-12);
}

TEST_CASE("cleanup") { fs::remove_all(scratch()); }
