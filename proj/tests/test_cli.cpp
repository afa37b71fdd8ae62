#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "nsg/json_io.hpp"
#include "nsg/nosig.hpp"
#include "nsg/rational.hpp"
#include "nsg/strategy.hpp"

using namespace nsg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const fs::path& workdir) {
    const fs::path log = workdir / "cli_output.log";
    const std::string cmd = "cd '" + workdir.string() + "' && '" + NSGLAB_CLI_PATH + "' " + args +
                            " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nsglab_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& path) { return json::parse(read_file(path)); }

// Two-gate yes-instance: both gates ONE, output gate 1.
void write_yes_instance(const fs::path& path) {
    const json doc = {{"n_bits", 1},
                      {"k", 1},
                      {"gates",
                       {{{"kind", "ONE"}, {"inputs", json::array()}},
                        {{"kind", "ONE"}, {"inputs", json::array()}}}}};
    std::ofstream(path) << doc.dump(2);
}

}  // namespace

TEST_CASE("lp on tx:1 reports the exact value and a valid strategy") {
    const fs::path dir = fresh_dir("lp_tx1");
    const RunResult r = run_cli("lp --instance tx:1 --out lp.json --strategy-out strat.json "
                                "--pivot-log pivots.csv",
                                dir);
    CHECK(r.exit_code == 0);
    const json rep = read_json(dir / "lp.json");
    CHECK(rep["value"] == "15/16");
    CHECK(rep["is_yes"] == false);
    CHECK(rep["bound_satisfied"] == true);
    CHECK(rat_from_string(rep["soundness_bound"].get<std::string>()) ==
          Rat(1) - rat(1, 16 * 81));
    const Strategy strat = strategy_from_json(read_json(dir / "strat.json"));
    CHECK(check_no_signaling(strat).ok);
    const std::string pivots = read_file(dir / "pivots.csv");
    CHECK(pivots.rfind("iteration,entering,leaving,objective\n", 0) == 0);
}

TEST_CASE("lp on a yes-instance file reports value 1") {
    const fs::path dir = fresh_dir("lp_yes");
    write_yes_instance(dir / "yes.json");
    const RunResult r = run_cli("lp --instance yes.json --out lp.json", dir);
    CHECK(r.exit_code == 0);
    CHECK(read_json(dir / "lp.json")["value"] == "1");
}

TEST_CASE("lp rejects a malformed instance naming the offending gate") {
    const fs::path dir = fresh_dir("lp_bad");
    const json doc = {{"n_bits", 1},
                      {"k", 0},
                      {"gates",
                       {{{"kind", "ONE"}, {"inputs", json::array()}},
                        {{"kind", "XOR"}, {"inputs", json::array()}}}}};
    std::ofstream(dir / "bad.json") << doc.dump(2);
    const RunResult r = run_cli("lp --instance bad.json", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("gate 1") != std::string::npos);
}

TEST_CASE("lp applies the size cap") {
    const fs::path dir = fresh_dir("lp_cap");
    const RunResult r = run_cli("lp --instance tx:16", dir);  // padded N = 64 > 32
    CHECK(r.exit_code == 3);
}

TEST_CASE("qsim with the dedicated tx strategy reproduces 63/64") {
    const fs::path dir = fresh_dir("qsim_tx");
    const RunResult r = run_cli("qsim --instance tx:1 --strategy tx --out run.json", dir);
    CHECK(r.exit_code == 0);
    const json rep = read_json(dir / "run.json");
    CHECK(rep["acceptance"].get<double>() == doctest::Approx(63.0 / 64.0).epsilon(1e-9));
    CHECK(rep["config"]["k"] == 2);
}

TEST_CASE("qsim honest on a yes-instance accepts with probability 1") {
    const fs::path dir = fresh_dir("qsim_yes");
    write_yes_instance(dir / "yes.json");
    const RunResult r = run_cli("qsim --instance yes.json --strategy honest --out run.json", dir);
    CHECK(r.exit_code == 0);
    CHECK(read_json(dir / "run.json")["acceptance"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("qsim lp-optimal on tx:1 lands at 1 - (1-omega)/4") {
    const fs::path dir = fresh_dir("qsim_lp");
    const RunResult r = run_cli("qsim --instance tx:1 --strategy lp-optimal --out run.json", dir);
    CHECK(r.exit_code == 0);
    // omega = 15/16, so the embedded acceptance is 1 - (1/16)/4 = 63/64.
    CHECK(read_json(dir / "run.json")["acceptance"].get<double>() ==
          doctest::Approx(63.0 / 64.0).epsilon(1e-9));
}

TEST_CASE("qsim refuses runs over the qubit cap with exit 3") {
    const fs::path dir = fresh_dir("qsim_cap");
    const RunResult r = run_cli("qsim --instance tx:1 --qubit-cap 10", dir);
    CHECK(r.exit_code == 3);
}

TEST_CASE("verify-lemmas passes with default-style seeds and writes a summary") {
    const fs::path dir = fresh_dir("lemmas_ok");
    const RunResult r = run_cli("verify-lemmas --seed 5 --trials 30 --out sum.json", dir);
    CHECK(r.exit_code == 0);
    const json rep = read_json(dir / "sum.json");
    REQUIRE(rep["suites"].size() == 3);
    for (const auto& suite : rep["suites"]) {
        CHECK(suite["pass"] == true);
        CHECK(suite["worst_slack"].get<double>() >= -1e-9);
    }
}

TEST_CASE("verify-lemmas with zero trials passes vacuously with a warning") {
    const fs::path dir = fresh_dir("lemmas_zero");
    const RunResult r = run_cli("verify-lemmas --trials 0", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("warning") != std::string::npos);
}

TEST_CASE("verify-lemmas self-test hook produces a counterexample and exit 1") {
    const fs::path dir = fresh_dir("lemmas_negate");
    const RunResult r = run_cli("verify-lemmas --trials 10 --negate", dir);
    CHECK(r.exit_code == 1);
    const json ce = read_json(dir / "counterexample.json");
    CHECK(ce["suite"] == "pure_overlap_bound");
    CHECK(ce.contains("lhs"));
    CHECK(ce.contains("rhs"));
}

TEST_CASE("seesaw warm start stays at least at the embedded value") {
    const fs::path dir = fresh_dir("seesaw_tx1");
    const RunResult r = run_cli(
        "seesaw --instance tx:1 --restarts 0 --iters 10 --out ss.json --trace trace.csv", dir);
    CHECK(r.exit_code == 0);
    const json rep = read_json(dir / "ss.json");
    CHECK(rep["value"].get<double>() >= 63.0 / 64.0 - 1e-9);
    CHECK(std::abs(rep["replay_value"].get<double>() - rep["value"].get<double>()) <= 1e-10);
    const std::string trace = read_file(dir / "trace.csv");
    CHECK(trace.rfind("restart,iteration,value,step_size\n", 0) == 0);
}

TEST_CASE("report consolidates prior results and is deterministic") {
    const fs::path dir = fresh_dir("report");
    REQUIRE(run_cli("lp --instance tx:1 --out lp_tx1.json --strategy-out s1.json", dir).exit_code ==
            0);
    REQUIRE(run_cli("qsim --instance tx:1 --strategy lp-optimal --out qsim_tx1.json", dir)
                .exit_code == 0);
    const RunResult r1 = run_cli("report --in . --out report.csv --h-list 1 2", dir);
    CHECK(r1.exit_code == 2);  // lp_tx2.json missing

    const RunResult r2 = run_cli("report --in . --out report.csv --h-list 1", dir);
    CHECK(r2.exit_code == 0);
    const std::string csv = read_file(dir / "report.csv");
    CHECK(csv.rfind("h,ns_lp_value,tx_strategy_value,ns_lower_bound,quantum_honest_value,"
                    "seesaw_value,quantum_upper_bound\n",
                    0) == 0);
    // h=1: LP value 15/16, tx strategy value 15/16, lower bound 3/4,
    // quantum honest from file, no seesaw file, upper bound 1-(1/16)^2/144.
    CHECK(csv.find("1,15/16,15/16,3/4,0.984375,n/a,36863/36864\n") != std::string::npos);

    const RunResult r3 = run_cli("report --in . --out report2.csv --h-list 1", dir);
    CHECK(r3.exit_code == 0);
    CHECK(read_file(dir / "report2.csv") == csv);
}

TEST_CASE("report on an empty directory exits 2") {
    const fs::path dir = fresh_dir("report_empty");
    const RunResult r = run_cli("report --in . --out report.csv", dir);
    CHECK(r.exit_code == 2);
}
