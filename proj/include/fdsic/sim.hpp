#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fdsic/cancellation.hpp"
#include "fdsic/config.hpp"
#include "fdsic/impairments.hpp"
#include "fdsic/ofdm.hpp"

namespace fdsic::sim {

inline constexpr const char* kSoftwareVersion = "0.1.0";

/// Per-scenario quantities shared by every trial.
struct SimContext {
    SimConfig config;
    DerivedPowers powers;
    RVector pdp;
    ofdm::DftMatrix dft;
    impairments::PnCovarianceTable pn;

    explicit SimContext(SimConfig cfg);
};

struct TrialResult {
    cancellation::CancellationReport optimal;
    cancellation::CancellationReport ls;
    double f_star_sum = 0.0;
};

/// One OFDM symbol: draws X, channels, phase traces, SoI and noise from the
/// trial's own stream and runs both estimators on the same realization.
TrialResult run_trial(const SimContext& context, std::uint64_t trial_index);
TrialResult run_trial(const SimConfig& config, std::uint64_t trial_index);

/// Runs n_trials trials (in parallel when threads allow); result i is trial i.
std::vector<TrialResult> run_trials(const SimContext& context);

enum class SweepVariable { Inr, Snr, DeltaF };

std::string to_string(SweepVariable v);
SweepVariable parse_sweep_variable(const std::string& name);

struct SweepRecord {
    std::string sweep_variable;
    double value = 0.0;
    std::string method;  // "ls" | "optimal"
    double g_empirical_db = 0.0;
    double g_theoretical_db = 0.0;
    double residual_power_mean = 0.0;
    std::size_t trials = 0;
    double ci_halfwidth_db = 0.0;  // 95%, normal approximation on per-trial dB samples

    bool operator==(const SweepRecord&) const = default;
};

/// Aggregates one sweep point into an ls and an optimal record.
std::vector<SweepRecord> aggregate(const std::vector<TrialResult>& trials, const std::string& variable,
                                   double value);

SimConfig with_value(SimConfig config, SweepVariable variable, double value);

std::vector<SweepRecord> sweep(const SimConfig& config, SweepVariable variable, const std::vector<double>& values);

/// value ascending, then method ascending.
void sort_records(std::vector<SweepRecord>& records);

std::vector<SweepRecord> filter_methods(const std::vector<SweepRecord>& records, const std::set<std::string>& methods);

void write_csv(std::ostream& out, std::vector<SweepRecord> records);
std::vector<SweepRecord> read_csv(std::istream& in);
void emit_csv(const std::string& path, const std::vector<SweepRecord>& records);

/// Config echo, per-point aggregates and the software version.
std::string json_summary(const SimConfig& config, const std::vector<SweepRecord>& records);
void emit_json_summary(const std::string& path, const SimConfig& config, const std::vector<SweepRecord>& records);

}  // namespace fdsic::sim
