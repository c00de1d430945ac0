#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdsic/common.hpp"
#include "fdsic/impairments.hpp"

namespace fdsic::sim {

enum class PdpShape { Exponential, Uniform };

/// Scenario parameters. Defaults are the 64-antenna, 128-subcarrier setup.
struct SimConfig {
    std::size_t n_tx = 64;
    std::size_t n_subcarriers = 128;
    std::size_t cp_length = 16;
    std::size_t n_taps = 16;
    double subcarrier_spacing = 15e3;  // Hz
    double sample_time = 5e-7;         // s, nominal
    std::string modulation = "bpsk";
    double symbol_power = 1.0;
    double delta_f = 1e-3;
    double inr_db = 40.0;
    double snr_db = 10.0;  // -inf disables the SoI
    std::size_t n_trials = 500;
    std::uint64_t master_seed = 1;
    impairments::OscillatorMode oscillator_mode = impairments::OscillatorMode::PerAntenna;
    impairments::PhaseNoiseScale pn_scale = impairments::PhaseNoiseScale::PerSymbol;
    PdpShape pdp_shape = PdpShape::Exponential;
    double pdp_decay_taps = 4.0;
    std::size_t threads = 0;  // 0: hardware concurrency

    /// Throws invalid-config on hard violations, warns on soft ones
    /// (CP shorter than the channel, inconsistent sample time).
    void validate() const;

    impairments::PhaseNoiseSpec phase_noise() const { return {delta_f, n_subcarriers, pn_scale}; }
};

/// Small-scale profile for quick runs: N_c = 32, N_s = 8, 200 trials.
SimConfig apply_fast_profile(SimConfig config);

struct DerivedPowers {
    double channel_power = 0.0;  // per-antenna sum_l E|h_s(l)|^2
    double noise_power = 1.0;    // reference
    double soi_power = 0.0;
    double si_power = 0.0;       // E_I
};

/// Noise power is the unit reference; channel and SoI powers follow from INR and SNR.
DerivedPowers derive_powers(const SimConfig& config);

RVector make_pdp(const SimConfig& config, double channel_power);

/// key = value lines, '#' starts a comment. Unknown keys are an error.
SimConfig parse_config(std::istream& in, SimConfig base = {});
SimConfig load_config(const std::string& path, SimConfig base = {});
void set_config_value(SimConfig& config, const std::string& key, const std::string& value);

/// Inverse of the parser: every key with its current value.
std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& config);

std::string to_string(impairments::OscillatorMode mode);
std::string to_string(impairments::PhaseNoiseScale scale);
std::string to_string(PdpShape shape);

std::string format_double(double v);

}  // namespace fdsic::sim
