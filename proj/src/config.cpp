#include "fdsic/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace fdsic::sim {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "bad number for " + key + ": '" + value + "'");
    }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
        const auto v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "bad unsigned integer for " + key + ": '" + value + "'");
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_string(impairments::OscillatorMode mode) {
    return mode == impairments::OscillatorMode::Shared ? "shared" : "per_antenna";
}

std::string to_string(impairments::PhaseNoiseScale scale) {
    return scale == impairments::PhaseNoiseScale::PerSample ? "per_sample" : "per_symbol";
}

std::string to_string(PdpShape shape) { return shape == PdpShape::Uniform ? "uniform" : "exponential"; }

void SimConfig::validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
    if (n_tx == 0) fail("n_tx must be positive");
    if (n_subcarriers == 0) fail("n_subcarriers must be positive");
    if (n_taps == 0 || n_taps > n_subcarriers) fail("n_taps must be in [1, n_subcarriers]");
    if (cp_length >= n_subcarriers) fail("cp_length must be shorter than the symbol");
    if (modulation != "bpsk") fail("only bpsk modulation is supported");
    if (!(symbol_power > 0.0)) fail("symbol_power must be positive");
    if (!(delta_f >= 0.0)) fail("delta_f must be >= 0");
    if (std::isnan(inr_db) || std::isinf(inr_db)) fail("inr_db must be finite");
    if (std::isnan(snr_db) || snr_db == std::numeric_limits<double>::infinity()) fail("snr_db must be < inf");
    if (n_trials < 2) fail("n_trials must be >= 2");
    if (!(pdp_decay_taps > 0.0)) fail("pdp_decay_taps must be positive");

    if (n_taps > cp_length + 1) {
        warn("channel longer than the cyclic prefix; the per-subcarrier model ignores the resulting ISI");
    }
    if (subcarrier_spacing > 0.0 && sample_time > 0.0) {
        const double implied = 1.0 / (subcarrier_spacing * static_cast<double>(n_subcarriers));
        if (std::abs(implied - sample_time) > 0.05 * implied) {
            warn("sample_time differs from 1/(subcarrier_spacing * n_subcarriers) by more than 5%");
        }
    }
}

SimConfig apply_fast_profile(SimConfig config) {
    config.n_subcarriers = 32;
    config.n_tx = 8;
    config.n_trials = 200;
    config.sample_time = 1.0 / (config.subcarrier_spacing * 32.0);
    return config;
}

DerivedPowers derive_powers(const SimConfig& config) {
    config.validate();
    DerivedPowers p;
    p.noise_power = 1.0;
    const double nc = static_cast<double>(config.n_subcarriers);
    p.si_power = std::pow(10.0, config.inr_db / 10.0) * nc * p.noise_power;
    p.channel_power = p.si_power / (nc * config.symbol_power * static_cast<double>(config.n_tx));
    p.soi_power = std::pow(10.0, config.snr_db / 10.0) * p.noise_power;
    return p;
}

RVector make_pdp(const SimConfig& config, double channel_power) {
    if (config.pdp_shape == PdpShape::Uniform) return impairments::uniform_pdp(config.n_taps, channel_power);
    return impairments::exponential_pdp(config.n_taps, channel_power, config.pdp_decay_taps);
}

void set_config_value(SimConfig& c, const std::string& key, const std::string& value) {
    auto size = [&](std::size_t& field) { field = static_cast<std::size_t>(parse_unsigned(key, value)); };
    if (key == "n_tx") size(c.n_tx);
    else if (key == "n_subcarriers") size(c.n_subcarriers);
    else if (key == "cp_length") size(c.cp_length);
    else if (key == "n_taps") size(c.n_taps);
    else if (key == "subcarrier_spacing") c.subcarrier_spacing = parse_double(key, value);
    else if (key == "sample_time") c.sample_time = parse_double(key, value);
    else if (key == "modulation") c.modulation = value;
    else if (key == "symbol_power") c.symbol_power = parse_double(key, value);
    else if (key == "delta_f") c.delta_f = parse_double(key, value);
    else if (key == "inr_db") c.inr_db = parse_double(key, value);
    else if (key == "snr_db") c.snr_db = parse_double(key, value);
    else if (key == "n_trials") size(c.n_trials);
    else if (key == "master_seed") c.master_seed = parse_unsigned(key, value);
    else if (key == "threads") size(c.threads);
    else if (key == "pdp_decay_taps") c.pdp_decay_taps = parse_double(key, value);
    else if (key == "oscillator_mode") {
        if (value == "per_antenna") c.oscillator_mode = impairments::OscillatorMode::PerAntenna;
        else if (value == "shared") c.oscillator_mode = impairments::OscillatorMode::Shared;
        else throw Error(ErrorCode::InvalidConfig, "oscillator_mode must be per_antenna or shared");
    } else if (key == "pn_scale") {
        if (value == "per_symbol") c.pn_scale = impairments::PhaseNoiseScale::PerSymbol;
        else if (value == "per_sample") c.pn_scale = impairments::PhaseNoiseScale::PerSample;
        else throw Error(ErrorCode::InvalidConfig, "pn_scale must be per_symbol or per_sample");
    } else if (key == "pdp_shape") {
        if (value == "exponential") c.pdp_shape = PdpShape::Exponential;
        else if (value == "uniform") c.pdp_shape = PdpShape::Uniform;
        else throw Error(ErrorCode::InvalidConfig, "pdp_shape must be exponential or uniform");
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
    }
}

SimConfig parse_config(std::istream& in, SimConfig base) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
        }
        set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

SimConfig load_config(const std::string& path, SimConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
    return parse_config(in, std::move(base));
}

std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& c) {
    return {
        {"n_tx", std::to_string(c.n_tx)},
        {"n_subcarriers", std::to_string(c.n_subcarriers)},
        {"cp_length", std::to_string(c.cp_length)},
        {"n_taps", std::to_string(c.n_taps)},
        {"subcarrier_spacing", format_double(c.subcarrier_spacing)},
        {"sample_time", format_double(c.sample_time)},
        {"modulation", c.modulation},
        {"symbol_power", format_double(c.symbol_power)},
        {"delta_f", format_double(c.delta_f)},
        {"inr_db", format_double(c.inr_db)},
        {"snr_db", format_double(c.snr_db)},
        {"n_trials", std::to_string(c.n_trials)},
        {"master_seed", std::to_string(c.master_seed)},
        {"oscillator_mode", to_string(c.oscillator_mode)},
        {"pn_scale", to_string(c.pn_scale)},
        {"pdp_shape", to_string(c.pdp_shape)},
        {"pdp_decay_taps", format_double(c.pdp_decay_taps)},
        {"threads", std::to_string(c.threads)},
    };
}

}  // namespace fdsic::sim
