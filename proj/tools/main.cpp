// Command-line front end: counterexample reproduction, PE scans, Gramian
// reports and Riccati observer simulations, driven by JSON scenario files.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <string>

#include "ltvobs/chain.hpp"
#include "ltvobs/counterexample.hpp"
#include "ltvobs/integrate.hpp"
#include "ltvobs/observer.hpp"
#include "ltvobs/pe.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kAnalyticFailure = 1,
    kNumericFailure = 2,
    kUsage = 64,
    kParseError = 65,
    kMissingInput = 66,
};

int log_level() {
    static int level = [] {
        const char* env = std::getenv("TOOL_LOG");
        if (!env) return 1;
        std::string s(env);
        if (s == "error") return 0;
        if (s == "debug") return 2;
        return 1;  // info
    }();
    return level;
}

void log_error(const std::string& msg) { std::cerr << "[error] " << msg << "\n"; }
void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}
void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

std::string fnv1a64_hex(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw std::ios_base::failure("cannot write " + path.string());
    }
}

struct RunContext {
    std::string subcommand;
    fs::path out_dir;
    json resolved_config = json::object();
    std::string input_hash = fnv1a64_hex("");
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();

    void prepare() {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec || !fs::is_directory(out_dir)) {
            throw std::ios_base::failure("cannot create output directory " +
                                         out_dir.string());
        }
    }

    void write_manifest() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        json manifest{{"subcommand", subcommand},
                      {"config", resolved_config},
                      {"out_dir", out_dir.string()},
                      {"tool_version", kVersion},
                      {"wall_clock_s", secs},
                      {"input_hash", input_hash}};
        write_text(out_dir / "run_manifest.json", manifest.dump(2) + "\n");
    }
};

ltvobs::Scenario load_scenario(const fs::path& path, RunContext& ctx) {
    if (!fs::exists(path)) {
        throw CLI::FileError(path.string());  // mapped to kMissingInput below
    }
    const std::string raw = read_file(path);
    ctx.input_hash = fnv1a64_hex(raw);
    json j = json::parse(raw);
    ctx.resolved_config["scenario"] = j;
    return ltvobs::Scenario::from_json(j);
}

std::vector<double> window_grid(const ltvobs::Scenario& sc, int count) {
    std::vector<double> grid;
    const double span = std::max(0.0, sc.horizon - sc.delta);
    for (int i = 0; i < count; ++i) {
        grid.push_back(count > 1 ? span * i / (count - 1) : 0.0);
    }
    return grid;
}

int cmd_counterexample(std::vector<double> deltas, RunContext& ctx, int nodes) {
    if (deltas.empty()) {
        deltas = {1.0, 2.0 * std::numbers::pi, 10.0};
    }
    for (double d : deltas) {
        if (d <= 0.0) {
            log_error("counterexample: --delta must be positive");
            return kUsage;
        }
    }
    ctx.resolved_config["deltas"] = deltas;
    ctx.resolved_config["nodes"] = nodes;
    ctx.prepare();

    auto entries = ltvobs::counterexample_report(deltas, nodes);
    write_text(ctx.out_dir / "counterexample_report.json",
               ltvobs::to_json(entries).dump(2) + "\n");

    // Witness trajectory: C(s) Phi(s,0) x stays null along the flow.
    const ltvobs::LtvSystem sys = ltvobs::build_counterexample();
    const ltvobs::Vector witness = entries.back().witness;
    const double span = *std::max_element(deltas.begin(), deltas.end());
    std::ostringstream csv;
    csv << "s,cphix1,cphix2\n";
    char buf[32];
    ltvobs::Matrix phi = ltvobs::Matrix::Identity(2, 2);
    const int steps = 400;
    for (int i = 0; i <= steps; ++i) {
        const double s = span * i / steps;
        if (i > 0) {
            const double prev = span * (i - 1) / steps;
            phi = ltvobs::rk4_integrate(
                [&sys](double tau, const ltvobs::Matrix& p) -> ltvobs::Matrix {
                    return sys.A(tau) * p;
                },
                prev, s, std::move(phi), 1e-3);
        }
        ltvobs::Vector v = sys.C(s) * phi * witness;
        std::snprintf(buf, sizeof(buf), "%.17g", s);
        csv << buf;
        for (int k = 0; k < 2; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", v(k));
            csv << ',' << buf;
        }
        csv << '\n';
    }
    write_text(ctx.out_dir / "witness_trace.csv", csv.str());
    ctx.write_manifest();

    bool reproduced = true;
    for (const auto& e : entries) {
        log_info("delta=" + std::to_string(e.delta) +
                 " gramian_min_eig=" + std::to_string(e.gramian_min_eig) +
                 " m_integral_min_eig=" + std::to_string(e.m_integral_min_eig));
        if (e.gramian_min_eig > 1e-8 || e.m_integral_min_eig < 1e-3) {
            reproduced = false;
        }
    }
    if (!reproduced) {
        log_error("counterexample thresholds not met");
        return kAnalyticFailure;
    }
    return kOk;
}

int cmd_pe_check(const fs::path& scenario_path, RunContext& ctx, int nodes,
                 int grid_count, int jobs) {
    ltvobs::Scenario sc = load_scenario(scenario_path, ctx);
    ctx.resolved_config["nodes"] = nodes;
    ctx.resolved_config["grid_count"] = grid_count;
    ctx.prepare();

    ltvobs::PeReport rep = ltvobs::pe_check(sc, window_grid(sc, grid_count),
                                            nodes, jobs);
    write_text(ctx.out_dir / "pe_report.json",
               ltvobs::to_json(rep).dump(2) + "\n");
    ctx.write_manifest();
    log_info("pe mu=" + std::to_string(rep.mu) +
             (rep.pass ? " (pass)" : " (fail)"));
    return rep.pass ? kOk : kAnalyticFailure;
}

int cmd_gramian(const std::string& target, RunContext& ctx, double t,
                double delta, int nodes, bool use_m) {
    ctx.resolved_config["t"] = t;
    ctx.resolved_config["delta"] = delta;
    ctx.resolved_config["nodes"] = nodes;
    ctx.resolved_config["use_m"] = use_m;

    ltvobs::GramianReport rep;
    if (target == "builtin:counterexample") {
        ctx.resolved_config["target"] = target;
        ctx.prepare();
        const ltvobs::LtvSystem sys = ltvobs::build_counterexample();
        if (use_m) {
            auto chain = ltvobs::build_chain(sys, 1);
            rep = ltvobs::extended_gramian(sys, chain.stacked(), t, delta, nodes);
        } else {
            rep = ltvobs::gramian(sys, t, delta, nodes);
        }
    } else {
        ltvobs::Scenario sc = load_scenario(target, ctx);
        ctx.prepare();
        const ltvobs::LtvSystem sys = ltvobs::build_lifted_system(sc);
        if (use_m) {
            rep = ltvobs::extended_gramian(sys, ltvobs::build_M(sc), t, delta,
                                           nodes);
        } else {
            rep = ltvobs::gramian(sys, t, delta, nodes);
        }
    }
    write_text(ctx.out_dir / "gramian_report.json",
               ltvobs::to_json(rep).dump(2) + "\n");
    ctx.write_manifest();
    log_info("gramian min_eig=" + std::to_string(rep.min_eigenvalue()));
    return kOk;
}

int cmd_simulate(const fs::path& scenario_path, const std::string& observer_path,
                 RunContext& ctx, uint64_t seed, int jobs) {
    ltvobs::Scenario sc = load_scenario(scenario_path, ctx);
    ltvobs::ObserverConfig cfg = ltvobs::ObserverConfig::defaults(sc);
    if (!observer_path.empty()) {
        if (!fs::exists(observer_path)) {
            throw CLI::FileError(observer_path);
        }
        json oj = json::parse(read_file(observer_path));
        ctx.resolved_config["observer"] = oj;
        cfg = ltvobs::ObserverConfig::from_json(oj, sc);
    }
    ctx.resolved_config["seed"] = seed;
    ctx.prepare();

    ltvobs::ObserverTrace trace;
    try {
        trace = ltvobs::run_observer(sc, cfg, seed);
    } catch (const ltvobs::CovarianceError& e) {
        log_error(e.what());
        ctx.write_manifest();
        return kAnalyticFailure;
    } catch (const ltvobs::IntegrationError& e) {
        log_error(e.what());
        ctx.write_manifest();
        return kAnalyticFailure;
    }

    std::ostringstream csv;
    ltvobs::write_trace_csv(csv, trace);
    write_text(ctx.out_dir / "trace.csv", csv.str());

    json summary = ltvobs::to_json(ltvobs::convergence_metrics(trace));
    log_debug("running observability scan for the summary flag");
    ltvobs::UoVerdict verdict =
        ltvobs::uo_verdict(sc, window_grid(sc, 10), 101, sc.dt, jobs);
    summary["unobservable_suspected"] = verdict.min_extended <= 1e-6;
    write_text(ctx.out_dir / "summary.json", summary.dump(2) + "\n");
    ctx.write_manifest();
    log_info("final_pos_err=" + std::to_string(trace.points.back().pos_err));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniform-observability toolkit for LTV systems: Gramians, "
                 "observability chains, persistent-excitation checks and a "
                 "Riccati observer for range-based localization"};
    app.require_subcommand(1);

    std::string config;
    std::string observer_config;
    std::string out_dir = ".";
    std::vector<double> deltas;
    double t = 0.0;
    double delta = 2.0 * std::numbers::pi;
    int nodes = 201;
    bool use_m = false;
    uint64_t seed = 0;
    int jobs = 1;
    int grid_count = 10;

    auto* ce = app.add_subcommand("counterexample",
                                  "Reproduce the rotation/projector system "
                                  "that defeats the averaged-integral test");
    ce->add_option("--delta", deltas, "Window lengths (repeatable)");
    ce->add_option("--out", out_dir, "Output directory");
    ce->add_option("--nodes", nodes, "Quadrature node count (odd)");

    auto* pe = app.add_subcommand("pe-check",
                                  "Evaluate the persistent-excitation "
                                  "condition of a scenario");
    pe->add_option("--config", config, "Scenario JSON path")->required();
    pe->add_option("--out", out_dir, "Output directory");
    pe->add_option("--nodes", nodes, "Quadrature node count (odd)");
    pe->add_option("--grid-count", grid_count, "Window starts to scan");
    pe->add_option("--jobs", jobs, "Parallel window evaluations");

    auto* gr = app.add_subcommand("gramian",
                                  "Observability Gramian of a scenario or of "
                                  "builtin:counterexample");
    gr->add_option("--config", config,
                   "Scenario JSON path or builtin:counterexample")
        ->required();
    gr->add_option("--t", t, "Window start");
    gr->add_option("--delta", delta, "Window length");
    gr->add_option("--nodes", nodes, "Quadrature node count (odd)");
    gr->add_flag("--use-m", use_m, "Use the chain matrix M instead of C");
    gr->add_option("--out", out_dir, "Output directory");

    auto* sim = app.add_subcommand("simulate",
                                   "Run the Riccati observer on a scenario");
    sim->add_option("--config", config, "Scenario JSON path")->required();
    sim->add_option("--observer-config", observer_config,
                    "Observer weights/initialization JSON");
    sim->add_option("--seed", seed, "Noise seed");
    sim->add_option("--out", out_dir, "Output directory");
    sim->add_option("--jobs", jobs, "Parallel window evaluations in the scan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    RunContext ctx;
    ctx.out_dir = out_dir;

    try {
        if (ce->parsed()) {
            ctx.subcommand = "counterexample";
            if (nodes < 3 || nodes % 2 == 0) {
                log_error("--nodes must be odd and >= 3");
                return kUsage;
            }
            return cmd_counterexample(deltas, ctx, nodes);
        }
        if (nodes < 3 || nodes % 2 == 0) {
            log_error("--nodes must be odd and >= 3");
            return kUsage;
        }
        if (pe->parsed()) {
            ctx.subcommand = "pe-check";
            return cmd_pe_check(config, ctx, nodes, grid_count, jobs);
        }
        if (gr->parsed()) {
            ctx.subcommand = "gramian";
            if (delta <= 0.0) {
                log_error("--delta must be positive");
                return kUsage;
            }
            return cmd_gramian(config, ctx, t, delta, nodes, use_m);
        }
        ctx.subcommand = "simulate";
        return cmd_simulate(config, observer_config, ctx, seed, jobs);
    } catch (const CLI::FileError& e) {
        log_error(std::string("missing input: ") + e.what());
        return kMissingInput;
    } catch (const json::parse_error& e) {
        log_error(std::string("JSON parse error: ") + e.what());
        return kParseError;
    } catch (const ltvobs::ConfigError& e) {
        log_error(e.what());
        return kParseError;
    } catch (const ltvobs::DimensionError& e) {
        log_error(e.what());
        return kParseError;
    } catch (const ltvobs::Error& e) {
        log_error(e.what());
        return kNumericFailure;
    } catch (const std::ios_base::failure& e) {
        log_error(std::string("I/O failure: ") + e.what());
        return kNumericFailure;
    } catch (const std::exception& e) {
        log_error(e.what());
        return kNumericFailure;
    }
}
