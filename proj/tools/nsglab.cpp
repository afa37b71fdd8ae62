// Batch front-end: exact LP values, protocol simulation, randomized lemma
// suites and consolidated CSV reports, all deterministic given flags/seeds.
//
// Exit codes: 0 success, 1 property violation, 2 input error, 3 resource cap.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsg/circuits.hpp"
#include "nsg/game.hpp"
#include "nsg/json_io.hpp"
#include "nsg/nosig.hpp"
#include "nsg/proveropt.hpp"
#include "nsg/qip.hpp"

using namespace nsg;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance source: "tx:<h>", "random:<seed>,<n_bits>", or a JSON file path.
Instance parse_instance(const std::string& spec) {
    if (spec.rfind("tx:", 0) == 0) {
        const int h = std::stoi(spec.substr(3));
        if (h < 1 || h > 16) throw InputError("tx parameter must be in 1..16");
        return tx_instance(h);
    }
    if (spec.rfind("random:", 0) == 0) {
        const std::string rest = spec.substr(7);
        const std::size_t comma = rest.find(',');
        if (comma == std::string::npos)
            throw InputError("random instance spec must be random:<seed>,<n_bits>");
        const std::uint64_t seed = std::stoull(rest.substr(0, comma));
        const int n_bits = std::stoi(rest.substr(comma + 1));
        if (n_bits < 1 || n_bits > 5) throw InputError("random instance n_bits must be in 1..5");
        return random_instance(seed, n_bits);
    }
    return instance_from_json(load_json_file(spec));
}

int log2_of(std::uint32_t n) {
    int k = 0;
    while ((std::uint32_t{1} << k) < n) ++k;
    if ((std::uint32_t{1} << k) != n) throw InputError("question count is not a power of two");
    return k;
}

ProtocolConfig config_for(std::uint32_t n, int qubit_cap) {
    ProtocolConfig cfg;
    cfg.k = log2_of(n);
    cfg.p_qubits = 2 * cfg.k + 3;
    cfg.qubit_cap = qubit_cap;
    cfg.check_cap();
    return cfg;
}

// Exits 1 - 1/(N^2 3^N), the no-instance soundness threshold.
Rat soundness_bound(std::uint32_t n) {
    Rat pow3(1);
    for (std::uint32_t i = 0; i < n; ++i) pow3 *= 3;
    return Rat(1) - Rat(1) / (Rat(static_cast<long>(n)) * Rat(static_cast<long>(n)) * pow3);
}

Strategy resolve_strategy(const std::string& spec, const Instance& inst, const Game& g,
                          const std::string& instance_spec) {
    if (spec == "honest") return honest_strategy(inst);
    if (spec == "lp-optimal") return ns_value_lp(g).argmax;
    if (spec == "tx") {
        if (instance_spec.rfind("tx:", 0) != 0)
            throw InputError("--strategy tx requires --instance tx:<h>");
        return tx_strategy(std::stoi(instance_spec.substr(3)));
    }
    return strategy_from_json(load_json_file(spec));
}

void write_pivot_csv(const std::string& path, const std::vector<PivotStep>& log) {
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("cannot write " + path);
    out << "iteration,entering,leaving,objective\n";
    for (const PivotStep& p : log)
        out << p.iteration << "," << p.entering << "," << p.leaving << ","
            << rat_to_string(p.objective) << "\n";
}

int cmd_lp(const std::string& instance_spec, const std::string& out_path,
           const std::string& strategy_path, const std::string& pivot_path) {
    const Instance inst = parse_instance(instance_spec);
    const Game g = build_game(inst);
    if (g.N > 32) throw ResourceCapError("lp refuses games with N > 32");
    std::vector<PivotStep> pivots;
    const LpGameResult res = ns_value_lp(g, pivot_path.empty() ? nullptr : &pivots);
    if (!pivot_path.empty()) write_pivot_csv(pivot_path, pivots);
    save_json_file(strategy_path, strategy_to_json(res.argmax));
    const bool yes = is_yes(inst);
    const Rat bound = soundness_bound(g.N);
    const bool bound_ok = yes ? res.value == 1 : res.value <= bound;
    json report = {{"value", rat_to_string(res.value)},
                   {"strategy_file", strategy_path},
                   {"is_yes", yes},
                   {"soundness_bound", rat_to_string(bound)},
                   {"bound_satisfied", bound_ok},
                   {"spec", {{"subcommand", "lp"}, {"instance", instance_spec}}}};
    save_json_file(out_path, report);
    std::cout << "value " << rat_to_string(res.value) << (yes ? " (yes-" : " (no-")
              << "instance), bound " << (bound_ok ? "satisfied" : "VIOLATED") << "\n";
    return bound_ok ? kExitOk : kExitViolation;
}

int cmd_qsim(const std::string& instance_spec, const std::string& strategy_spec,
             const std::string& out_path, const std::string& dump_path, int qubit_cap) {
    const Instance inst = parse_instance(instance_spec);
    const Game g = build_game(inst);
    const ProtocolConfig cfg = config_for(g.N, qubit_cap);
    const Strategy base = resolve_strategy(strategy_spec, inst, g, instance_spec);
    const RunReport report = run_protocol(cfg, honest_prover(base, cfg), g);
    if (!dump_path.empty()) {
        StateVector psi = initial_state(cfg);
        apply_u(cfg, honest_prover(base, cfg).u, psi);
        dump_state(dump_path, cfg, psi);
    }
    json doc = run_report_to_json(report, cfg);
    doc["spec"] = {{"subcommand", "qsim"},
                   {"instance", instance_spec},
                   {"strategy", strategy_spec},
                   {"qubit_cap", qubit_cap}};
    save_json_file(out_path, doc);
    std::cout << "acceptance " << report.acceptance << " (sim " << report.p_sim << ", undo-A "
              << report.p_undo_alice << ", undo-B " << report.p_undo_bob << ")\n";
    return kExitOk;
}

struct LemmaSuiteResult {
    std::string name;
    int trials = 0;
    double worst_slack = 0;
    bool pass = true;
    json counterexample;  // populated on the first violation
};

int cmd_verify_lemmas(std::uint64_t seed, int trials, double tol, const std::string& out_path,
                      const std::string& counterexample_path, bool negate) {
    std::vector<LemmaSuiteResult> suites;

    // ||rho - phi phi^dag (x) Tr_X rho||_1 <= 4 sqrt(1 - <phi|Tr_Y rho|phi>).
    {
        LemmaSuiteResult r{"pure_overlap_bound", trials, 0, true, {}};
        std::mt19937_64 rng(seed);
        for (int i = 0; i < trials; ++i) {
            const int dx = 2 + (i % 3), dy = 2 + (i % 2);
            const Mat rho = random_density(rng, dx * dy);
            const Vec phi = random_pure(rng, dx);
            const LemmaCheck c = pure_overlap_bound_check(rho, phi, dx);
            double slack = c.rhs - c.lhs;
            if (negate) slack = -slack;  // self-test hook: flip the inequality
            r.worst_slack = std::min(i == 0 ? slack : r.worst_slack, slack);
            if (slack < -tol && r.pass) {
                r.pass = false;
                r.counterexample = {{"suite", r.name}, {"trial", i},   {"dim_x", dx},
                                    {"dim_y", dy},     {"lhs", c.lhs}, {"rhs", c.rhs}};
            }
        }
        suites.push_back(std::move(r));
    }

    // ||rho - sqrt(A) rho sqrt(A)||_1 <= 2 sqrt(Tr rho (I - A)).
    {
        LemmaSuiteResult r{"gentle_measurement", trials, 0, true, {}};
        std::mt19937_64 rng(seed + 1);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int i = 0; i < trials; ++i) {
            const int d = 2 + (i % 7);
            const Mat rho = random_density(rng, d);
            const Mat q = random_unitary(rng, d);
            Eigen::VectorXd eigs(d);
            for (int j = 0; j < d; ++j) eigs(j) = unif(rng);
            const Mat a = q * eigs.asDiagonal() * q.adjoint();
            const LemmaCheck c = gentle_measurement_check(rho, (a + a.adjoint()) / 2.0);
            const double slack = c.rhs - c.lhs;
            r.worst_slack = std::min(i == 0 ? slack : r.worst_slack, slack);
            if (slack < -tol && r.pass) {
                r.pass = false;
                r.counterexample = {
                    {"suite", r.name}, {"trial", i}, {"dim", d}, {"lhs", c.lhs}, {"rhs", c.rhs}};
            }
        }
        suites.push_back(std::move(r));
    }

    // nearest_ns distance <= 2 * min_delta, compared exactly.
    {
        LemmaSuiteResult r{"nearest_ns_within_two_min_delta", trials, 0, true, {}};
        for (int i = 0; i < trials; ++i) {
            const std::uint32_t n = 2 + (static_cast<std::uint32_t>(i) % 3);
            const Strategy p = random_strategy(seed + 2 + static_cast<std::uint64_t>(i), n);
            const Rat md = min_delta(p);
            const auto [nearest, dist] = nearest_ns(p);
            const Rat slack = Rat(2) * md - dist;
            r.worst_slack = std::min(i == 0 ? slack.get_d() : r.worst_slack, slack.get_d());
            if (slack < 0 && r.pass) {
                r.pass = false;
                r.counterexample = {{"suite", r.name},
                                    {"trial", i},
                                    {"n", n},
                                    {"distance", rat_to_string(dist)},
                                    {"min_delta", rat_to_string(md)}};
            }
        }
        suites.push_back(std::move(r));
    }

    bool all_pass = true;
    json out = {{"spec",
                 {{"subcommand", "verify-lemmas"},
                  {"seed", seed},
                  {"trials", trials},
                  {"tol", tol},
                  {"negate", negate}}},
                {"suites", json::array()}};
    for (const LemmaSuiteResult& r : suites) {
        all_pass = all_pass && r.pass;
        out["suites"].push_back({{"name", r.name},
                                 {"trials", r.trials},
                                 {"worst_slack", r.worst_slack},
                                 {"pass", r.pass}});
        std::cout << r.name << ": " << (r.pass ? "pass" : "FAIL") << " (worst slack "
                  << r.worst_slack << ")\n";
        if (!r.pass) save_json_file(counterexample_path, r.counterexample);
    }
    save_json_file(out_path, out);
    if (trials == 0) std::cerr << "warning: trials=0, all suites pass vacuously\n";
    if (!all_pass) std::cerr << "counterexample written to " << counterexample_path << "\n";
    return all_pass ? kExitOk : kExitViolation;
}

int cmd_seesaw(const std::string& instance_spec, std::uint64_t seed, int restarts, int iters,
               int qubit_cap, const std::string& out_path, const std::string& trace_path) {
    const Instance inst = parse_instance(instance_spec);
    const Game g = build_game(inst);
    const ProtocolConfig cfg = config_for(g.N, qubit_cap);
    std::vector<AscentStep> trace;
    // Warm start from the honest prover of the LP-optimal strategy, then
    // seeded random restarts; keep the best.
    AscendResult best = ascend(cfg, g, honest_prover(ns_value_lp(g).argmax, cfg), iters);
    for (AscentStep& s : best.trace) s.restart = -1;
    trace = best.trace;
    if (restarts > 0) {
        std::vector<AscentStep> rt;
        AscendResult rnd = ascend_restarts(cfg, g, seed, restarts, iters, &rt);
        trace.insert(trace.end(), rt.begin(), rt.end());
        if (rnd.value > best.value) best = std::move(rnd);
    }
    if (!trace_path.empty()) write_trace_csv(trace_path, trace);
    const double replay = acceptance_functional(cfg, g, best.prover);
    json doc = {{"value", best.value},
                {"replay_value", replay},
                {"unitarity_residual", best.prover.unitarity_residual()},
                {"spec",
                 {{"subcommand", "seesaw"},
                  {"instance", instance_spec},
                  {"seed", seed},
                  {"restarts", restarts},
                  {"iters", iters},
                  {"qubit_cap", qubit_cap}}}};
    save_json_file(out_path, doc);
    std::cout << "best value " << best.value << " (replay " << replay << ")\n";
    return std::abs(replay - best.value) <= 1e-10 ? kExitOk : kExitViolation;
}

std::optional<json> try_load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    return load_json_file(path.string());
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int cmd_report(const std::string& in_dir, const std::string& out_path,
               const std::vector<int>& h_list) {
    const std::filesystem::path dir(in_dir);
    if (!std::filesystem::is_directory(dir)) throw InputError("not a directory: " + in_dir);
    std::ostringstream csv;
    csv << "h,ns_lp_value,tx_strategy_value,ns_lower_bound,quantum_honest_value,"
           "seesaw_value,quantum_upper_bound\n";
    for (const int h : h_list) {
        const std::string tag = "tx" + std::to_string(h);
        const auto lp_doc = try_load(dir / ("lp_" + tag + ".json"));
        if (!lp_doc) throw InputError("missing " + (dir / ("lp_" + tag + ".json")).string());
        const Rat omega = rat_from_string((*lp_doc)["value"].get<std::string>());

        const Instance inst = tx_instance(h);
        const Game g = build_game(inst);
        const Rat tx_value = acceptance(g, tx_strategy(h));
        // Guaranteed cheating value 1 - 1/((h+1) 2^h) and the upper bound
        // 1 - (1-omega)^2/144 on the quantum value of the embedded game.
        const Rat lower = Rat(1) - Rat(1) / (Rat(h + 1) * rat_pow2(h));
        const Rat upper = Rat(1) - (Rat(1) - omega) * (Rat(1) - omega) / Rat(144);

        const auto qsim_doc = try_load(dir / ("qsim_" + tag + ".json"));
        const auto seesaw_doc = try_load(dir / ("seesaw_" + tag + ".json"));
        csv << h << "," << rat_to_string(omega) << "," << rat_to_string(tx_value) << ","
            << rat_to_string(lower) << ","
            << (qsim_doc ? format_double((*qsim_doc)["acceptance"].get<double>()) : "n/a") << ","
            << (seesaw_doc ? format_double((*seesaw_doc)["value"].get<double>()) : "n/a") << ","
            << rat_to_string(upper) << "\n";
    }
    std::ofstream out(out_path);
    if (!out.good()) throw std::runtime_error("cannot write " + out_path);
    out << csv.str();
    std::cout << csv.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact two-prover game values and protocol simulation"};
    app.require_subcommand(1);

    std::string instance_spec, strategy_spec = "honest";
    std::string out_path, strategy_path = "lp_strategy.json", pivot_path, dump_path;
    std::string trace_path, in_dir, counterexample_path = "counterexample.json";
    std::uint64_t seed = 1;
    int trials = 1000, qubit_cap = 24, restarts = 4, iters = 150;
    double tol = 1e-9;
    bool negate = false;
    std::vector<int> h_list = {1, 2, 3, 4};

    CLI::App* lp = app.add_subcommand("lp", "Exact no-signaling value of a game");
    lp->add_option("--instance", instance_spec, "file | tx:<h> | random:<seed>,<n_bits>")
        ->required();
    lp->add_option("--out", out_path, "report JSON path")->default_val("lp_report.json");
    lp->add_option("--strategy-out", strategy_path, "optimal strategy JSON path");
    lp->add_option("--pivot-log", pivot_path, "simplex pivot log CSV path");

    CLI::App* qsim = app.add_subcommand("qsim", "Simulate the four-message protocol");
    qsim->add_option("--instance", instance_spec, "file | tx:<h> | random:<seed>,<n_bits>")
        ->required();
    qsim->add_option("--strategy", strategy_spec, "honest | lp-optimal | tx | <file>");
    qsim->add_option("--out", out_path, "run report JSON path")->default_val("run_report.json");
    qsim->add_option("--dump-state", dump_path, "binary state dump path");
    qsim->add_option("--qubit-cap", qubit_cap, "refuse larger simulations");

    CLI::App* lemmas = app.add_subcommand("verify-lemmas", "Randomized inequality suites");
    lemmas->add_option("--seed", seed, "base RNG seed");
    lemmas->add_option("--trials", trials, "trials per suite");
    lemmas->add_option("--tol", tol, "floating-point slack tolerance");
    lemmas->add_option("--out", out_path, "summary JSON path")->default_val("lemmas_report.json");
    lemmas->add_option("--counterexample-out", counterexample_path,
                       "where to dump the first violation");
    lemmas->add_flag("--negate", negate,
                     "self-test hook: flip the first inequality to force a counterexample")
        ->group("");  // hidden

    CLI::App* seesaw = app.add_subcommand("seesaw", "Gradient ascent over prover unitaries");
    seesaw->add_option("--instance", instance_spec, "file | tx:<h> | random:<seed>,<n_bits>")
        ->required();
    seesaw->add_option("--seed", seed, "restart RNG seed");
    seesaw->add_option("--restarts", restarts, "random restarts after the warm start");
    seesaw->add_option("--iters", iters, "ascent iterations per start");
    seesaw->add_option("--qubit-cap", qubit_cap, "refuse larger simulations");
    seesaw->add_option("--out", out_path, "result JSON path")->default_val("seesaw_report.json");
    seesaw->add_option("--trace", trace_path, "ascent trace CSV path");

    CLI::App* report = app.add_subcommand("report", "Consolidate prior results into a CSV table");
    report->add_option("--in", in_dir, "directory with lp_/qsim_/seesaw_ tx<h> JSON files")
        ->required();
    report->add_option("--out", out_path, "CSV path")->default_val("report.csv");
    report->add_option("--h-list", h_list, "tower heights to include");

    try {
        app.parse(argc, argv);
        if (lp->parsed()) return cmd_lp(instance_spec, out_path, strategy_path, pivot_path);
        if (qsim->parsed())
            return cmd_qsim(instance_spec, strategy_spec, out_path, dump_path, qubit_cap);
        if (lemmas->parsed())
            return cmd_verify_lemmas(seed, trials, tol, out_path, counterexample_path, negate);
        if (seesaw->parsed())
            return cmd_seesaw(instance_spec, seed, restarts, iters, qubit_cap, out_path,
                              trace_path);
        if (report->parsed()) return cmd_report(in_dir, out_path, h_list);
        return kExitInput;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResource;
    } catch (const JsonFormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
