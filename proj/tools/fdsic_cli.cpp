// Command-line front end: parameter sweeps, single-point reports and the
// oracle validation suite.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdsic/sim.hpp"
#include "fdsic/validation.hpp"

namespace {

using namespace fdsic;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::string out_csv;
    std::string json_path;
    bool fast = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "key = value file mirroring SimConfig fields");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--trials", o.trials, "trials per sweep point");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", o.out_csv, "CSV output path");
    cmd->add_option("--json-summary", o.json_path, "JSON summary path");
    cmd->add_flag("--fast", o.fast, "N_c = 32, N_s = 8, 200 trials");
}

sim::SimConfig resolve(const CommonOptions& o) {
    sim::SimConfig cfg;
    if (o.fast) cfg = sim::apply_fast_profile(cfg);
    if (!o.config_path.empty()) cfg = sim::load_config(o.config_path, cfg);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.trials) cfg.n_trials = *o.trials;
    if (o.threads) cfg.threads = *o.threads;
    cfg.validate();
    return cfg;
}

void print_records(const std::vector<sim::SweepRecord>& records) {
    std::printf("%-10s %12s %-8s %10s %10s %14s %7s %8s\n", "variable", "value", "method", "G_emp[dB]", "G_theo[dB]",
                "resid_mean", "trials", "ci[dB]");
    for (const auto& r : records) {
        std::printf("%-10s %12.4g %-8s %10.3f %10.3f %14.6g %7zu %8.3f\n", r.sweep_variable.c_str(), r.value,
                    r.method.c_str(), r.g_empirical_db, r.g_theoretical_db, r.residual_power_mean, r.trials,
                    r.ci_halfwidth_db);
    }
}

void emit(const CommonOptions& o, const sim::SimConfig& cfg, const std::vector<sim::SweepRecord>& records) {
    print_records(records);
    if (!o.out_csv.empty()) sim::emit_csv(o.out_csv, records);
    if (!o.json_path.empty()) sim::emit_json_summary(o.json_path, cfg, records);
}

int run_validate(bool quick) {
    const std::size_t traces = quick ? 20000 : 100000;
    std::vector<validation::OracleResult> results;
    results.push_back(validation::check_gamma(32, 1e-4, traces, 11));
    results.push_back(validation::check_gamma(32, 1e-3, traces, 12));
    results.push_back(validation::check_covariance(8, 2, 1e-3, traces, 13));
    results.push_back(validation::check_qp_equivalence({4, 8, 16}, 100, 14));
    results.push_back(validation::check_model_equivalence(32, 4, 100, 15));
    results.push_back(validation::check_optimality({4, 8, 16}, 100, 16));
    bool ok = true;
    for (const auto& r : results) {
        std::printf("[%s] %s: error %.3e (tol %.1e) -- %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.error,
                    r.tolerance, r.detail.c_str());
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Digital self-interference cancellation simulator for full-duplex OFDM with phase noise"};
    app.require_subcommand(1);

    CommonOptions inr_opts, snr_opts, pn_opts, single_opts;
    std::vector<double> inr_values{20, 25, 30, 35, 40, 45, 50};
    std::vector<double> snr_values{0, 5, 10, 15, 20, 25, 30};
    std::vector<double> pn_values{1e-5, 1e-4, 1e-3, 1e-2};

    auto* inr = app.add_subcommand("sweep-inr", "cancellation ability versus INR");
    add_common(inr, inr_opts);
    inr->add_option("--values", inr_values, "INR points in dB")->delimiter(',');

    auto* snr = app.add_subcommand("sweep-snr", "cancellation ability versus SNR");
    add_common(snr, snr_opts);
    snr->add_option("--values", snr_values, "SNR points in dB")->delimiter(',');

    auto* pn = app.add_subcommand("sweep-pn", "cancellation ability versus relative phase-noise bandwidth");
    add_common(pn, pn_opts);
    pn->add_option("--values", pn_values, "delta_f points")->delimiter(',');

    auto* single = app.add_subcommand("single", "one configuration, full report");
    add_common(single, single_opts);

    bool quick = false;
    auto* validate = app.add_subcommand("validate", "run the oracle suites");
    validate->add_flag("--quick", quick, "fewer Monte Carlo traces");

    CLI11_PARSE(app, argc, argv);

    try {
        auto run_sweep = [&](const CommonOptions& o, sim::SweepVariable v, const std::vector<double>& values) {
            const auto cfg = resolve(o);
            emit(o, cfg, sim::sweep(cfg, v, values));
            return 0;
        };
        if (*inr) return run_sweep(inr_opts, sim::SweepVariable::Inr, inr_values);
        if (*snr) return run_sweep(snr_opts, sim::SweepVariable::Snr, snr_values);
        if (*pn) return run_sweep(pn_opts, sim::SweepVariable::DeltaF, pn_values);
        if (*single) {
            const auto cfg = resolve(single_opts);
            for (const auto& [key, value] : sim::config_entries(cfg)) std::printf("%-20s %s\n", key.c_str(), value.c_str());
            const sim::SimContext ctx(cfg);
            std::printf("%-20s %.6g\n%-20s %.6g\n%-20s %.6g\n\n", "si_power", ctx.powers.si_power, "channel_power",
                        ctx.powers.channel_power, "soi_power", ctx.powers.soi_power);
            const auto records = sim::aggregate(sim::run_trials(ctx), "single", 0.0);
            emit(single_opts, cfg, records);
            return 0;
        }
        if (*validate) return run_validate(quick);
    } catch (const fdsic::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
