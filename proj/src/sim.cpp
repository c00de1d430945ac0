#include "fdsic/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fdsic/estimator.hpp"

namespace fdsic::sim {
namespace {

using Eigen::Index;

constexpr const char* kCsvHeader = "sweep_var,value,method,g_emp_db,g_theo_db,resid_mean,trials,ci_db";

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// 95% half-width from the finite samples; infinite when fewer than two remain.
double ci_halfwidth(const std::vector<double>& samples) {
    std::vector<double> finite;
    for (double x : samples)
        if (std::isfinite(x)) finite.push_back(x);
    if (finite.size() < 2) return std::numeric_limits<double>::infinity();
    const double m = mean(finite);
    double ss = 0.0;
    for (double x : finite) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(finite.size() - 1));
    return 1.96 * sd / std::sqrt(static_cast<double>(finite.size()));
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

SimContext::SimContext(SimConfig cfg) : config(std::move(cfg)) {
    powers = derive_powers(config);
    pdp = make_pdp(config, powers.channel_power);
    dft = ofdm::build_dft_matrix(config.n_subcarriers, config.n_taps);
    pn = impairments::pn_covariance_table(config.phase_noise(), config.oscillator_mode);
}

TrialResult run_trial(const SimContext& ctx, std::uint64_t trial_index) {
    const SimConfig& cfg = ctx.config;
    try {
        Rng rng = trial_rng(cfg.master_seed, trial_index);
        const CVector x = ofdm::gen_bpsk_symbols(cfg.n_subcarriers, cfg.symbol_power, rng);
        const auto channels = impairments::gen_si_channel(cfg.n_tx, cfg.n_taps, ctx.pdp, rng);
        const auto traces = impairments::gen_phase_traces(cfg.n_tx, cfg.oscillator_mode,
                                                          cfg.n_subcarriers + cfg.cp_length, cfg.phase_noise(), rng);
        const auto rx = impairments::synthesize_received(x, channels, traces, ctx.powers.soi_power,
                                                         ctx.powers.noise_power, ctx.dft, rng);

        const double si = ctx.powers.si_power;
        const double floor = static_cast<double>(cfg.n_subcarriers) * ctx.powers.noise_power;

        estimator::EstimatorStatistics stats{x, ctx.pn, ctx.pdp, cfg.n_tx, ctx.powers.noise_power,
                                             ctx.powers.soi_power};
        estimator::CovarianceBundle bundle;
        auto sol = estimator::solve_optimal(stats, ctx.dft, &bundle);
        sol.h_delta_hat = estimator::estimate_h_delta(sol.W, rx.y);

        TrialResult out;
        out.f_star_sum = sol.f_star.sum();

        // The optimal weights act on y directly; XF W y is only their projection onto range(XF).
        const CVector r_opt = cancellation::cancel(rx.y, sol.V * rx.y) - rx.y_soi;
        out.optimal = cancellation::make_report(
            r_opt.squaredNorm(),
            cancellation::residual_power_theoretical(bundle.A, sol.V, ctx.powers.noise_power, ctx.powers.soi_power),
            si, floor);

        const CVector h_ls = estimator::ls_estimator(rx.y, x, ctx.dft);
        const CVector r_ls = cancellation::cancel(rx.y, cancellation::reconstruct_si(x, ctx.dft, h_ls)) - rx.y_soi;
        out.ls = cancellation::make_report(
            r_ls.squaredNorm(),
            cancellation::residual_power_theoretical(bundle.A, estimator::ls_weight_matrix(x, ctx.dft),
                                                     ctx.powers.noise_power, ctx.powers.soi_power),
            si, floor);
        return out;
    } catch (const Error& e) {
        throw Error(e.code(), "trial " + std::to_string(trial_index) + ": " + e.what());
    }
}

TrialResult run_trial(const SimConfig& config, std::uint64_t trial_index) {
    return run_trial(SimContext(config), trial_index);
}

std::vector<TrialResult> run_trials(const SimContext& ctx) {
    const std::size_t n = ctx.config.n_trials;
    std::vector<TrialResult> results(n);
    std::size_t workers = ctx.config.threads != 0 ? ctx.config.threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, n);

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = n;
    std::exception_ptr error;

    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = run_trial(ctx, i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
    return results;
}

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::Inr: return "inr_db";
        case SweepVariable::Snr: return "snr_db";
        case SweepVariable::DeltaF: return "delta_f";
    }
    return "unknown";
}

SweepVariable parse_sweep_variable(const std::string& name) {
    if (name == "inr" || name == "inr_db") return SweepVariable::Inr;
    if (name == "snr" || name == "snr_db") return SweepVariable::Snr;
    if (name == "delta_f" || name == "pn") return SweepVariable::DeltaF;
    throw Error(ErrorCode::InvalidConfig, "unknown sweep variable '" + name + "'");
}

std::vector<SweepRecord> aggregate(const std::vector<TrialResult>& trials, const std::string& variable,
                                   double value) {
    if (trials.size() < 2) throw Error(ErrorCode::InvalidConfig, "aggregation needs at least two trials");
    const double si = trials.front().optimal.si_power;
    const double floor = trials.front().optimal.noise_floor;

    auto record = [&](const std::string& method, auto pick) {
        std::vector<double> emp, theo, g;
        for (const auto& t : trials) {
            const auto& r = pick(t);
            emp.push_back(r.residual_power_empirical);
            theo.push_back(r.residual_power_theoretical);
            g.push_back(r.ability_db);
        }
        SweepRecord rec;
        rec.sweep_variable = variable;
        rec.value = value;
        rec.method = method;
        rec.residual_power_mean = mean(emp);
        rec.g_empirical_db = cancellation::cancellation_ability(si, floor, rec.residual_power_mean).db;
        rec.trials = trials.size();
        rec.ci_halfwidth_db = ci_halfwidth(g);
        if (method == "optimal") {
            std::vector<double> f;
            for (const auto& t : trials) f.push_back(t.f_star_sum);
            rec.g_theoretical_db = cancellation::g_max_theoretical(si, floor, mean(f)).db;
        } else {
            rec.g_theoretical_db = cancellation::cancellation_ability(si, floor, mean(theo)).db;
        }
        return rec;
    };
    return {record("ls", [](const TrialResult& t) -> const auto& { return t.ls; }),
            record("optimal", [](const TrialResult& t) -> const auto& { return t.optimal; })};
}

SimConfig with_value(SimConfig config, SweepVariable variable, double value) {
    switch (variable) {
        case SweepVariable::Inr: config.inr_db = value; break;
        case SweepVariable::Snr: config.snr_db = value; break;
        case SweepVariable::DeltaF: config.delta_f = value; break;
    }
    return config;
}

std::vector<SweepRecord> sweep(const SimConfig& config, SweepVariable variable, const std::vector<double>& values) {
    if (values.empty()) throw Error(ErrorCode::InvalidConfig, "sweep needs at least one value");
    std::vector<SweepRecord> out;
    for (double v : values) {
        const SimContext ctx(with_value(config, variable, v));
        auto recs = aggregate(run_trials(ctx), to_string(variable), v);
        out.insert(out.end(), recs.begin(), recs.end());
    }
    sort_records(out);
    return out;
}

void sort_records(std::vector<SweepRecord>& records) {
    std::stable_sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.method < b.method;
    });
}

std::vector<SweepRecord> filter_methods(const std::vector<SweepRecord>& records,
                                        const std::set<std::string>& methods) {
    std::vector<SweepRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [&](const SweepRecord& r) { return methods.count(r.method) != 0; });
    return out;
}

void write_csv(std::ostream& out, std::vector<SweepRecord> records) {
    sort_records(records);
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.sweep_variable << ',' << format_double(r.value) << ',' << r.method << ','
            << format_double(r.g_empirical_db) << ',' << format_double(r.g_theoretical_db) << ','
            << format_double(r.residual_power_mean) << ',' << r.trials << ',' << format_double(r.ci_halfwidth_db)
            << '\n';
    }
}

std::vector<SweepRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorCode::IoError, "missing or unexpected CSV header");
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 8) throw Error(ErrorCode::IoError, "CSV row with " + std::to_string(f.size()) + " fields");
        try {
            SweepRecord r;
            r.sweep_variable = f[0];
            r.value = std::stod(f[1]);
            r.method = f[2];
            r.g_empirical_db = std::stod(f[3]);
            r.g_theoretical_db = std::stod(f[4]);
            r.residual_power_mean = std::stod(f[5]);
            r.trials = static_cast<std::size_t>(std::stoull(f[6]));
            r.ci_halfwidth_db = std::stod(f[7]);
            out.push_back(r);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::IoError, "malformed CSV row: " + line);
        }
    }
    return out;
}

void emit_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    write_csv(out, records);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::string json_summary(const SimConfig& config, const std::vector<SweepRecord>& records) {
    nlohmann::ordered_json j;
    j["software_version"] = kSoftwareVersion;
    auto& cfg = j["config"];
    for (const auto& [key, value] : config_entries(config)) cfg[key] = value;
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        j["points"].push_back({{"sweep_var", r.sweep_variable},
                               {"value", r.value},
                               {"method", r.method},
                               {"g_emp_db", r.g_empirical_db},
                               {"g_theo_db", r.g_theoretical_db},
                               {"resid_mean", r.residual_power_mean},
                               {"trials", r.trials},
                               {"ci_db", r.ci_halfwidth_db}});
    }
    return j.dump(2);
}

void emit_json_summary(const std::string& path, const SimConfig& config, const std::vector<SweepRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << json_summary(config, records) << '\n';
}

}  // namespace fdsic::sim
