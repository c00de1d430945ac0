#pragma once

#include <cstddef>
#include <vector>

#include "fdsic/common.hpp"
#include "fdsic/ofdm.hpp"
#include "fdsic/random.hpp"

namespace fdsic::impairments {

enum class OscillatorMode { PerAntenna, Shared };

/// How 4*pi*df is mapped to a per-sample Wiener increment. PerSymbol treats
/// 4*pi*df as the variance accumulated over one OFDM symbol (N_c samples),
/// i.e. df is relative to the subcarrier spacing; PerSample applies it to
/// every sample.
enum class PhaseNoiseScale { PerSymbol, PerSample };

struct PhaseNoiseSpec {
    double delta_f = 0.0;
    std::size_t n_subcarriers = 1;
    PhaseNoiseScale scale = PhaseNoiseScale::PerSymbol;

    /// Per-sample increment variance of a single oscillator.
    double increment_variance() const;
};

struct PhaseNoiseTrace {
    RVector phases;
    double increment_variance = 0.0;
    double initial_phase = 0.0;
};

struct SiChannelSet {
    CMatrix taps;  // n_tx x L
    RVector pdp;   // per-antenna E|h_s(l)|^2
    std::size_t n_tx = 0;
};

/// delta_m for m = 0..N_c-1, negative offsets wrapped.
struct IciCoefficients {
    CVector delta;
};

/// Gamma[a][b] = E[delta_a conj(delta_b)] for the combined transmit+receive
/// phase of one link.
struct PnCovarianceTable {
    CMatrix gamma;
    RVector lag_correlation;  // E[e^{j(phi(n+d) - phi(n))}], d = 0..N_c-1
    double delta_f = 0.0;
    double combined_increment_variance = 0.0;
    OscillatorMode oscillator_mode = OscillatorMode::PerAntenna;
};

struct PhaseTraces {
    std::vector<PhaseNoiseTrace> tx;  // n_tx entries, or one in shared mode
    PhaseNoiseTrace rx;
};

struct ReceivedSignal {
    CVector y;
    CVector y_soi;
    CVector y_si;
    CVector noise;
};

PhaseNoiseTrace gen_wiener_phase(std::size_t n_samples, const PhaseNoiseSpec& spec, double initial_phase,
                                 Rng& rng);

/// Draws every oscillator of one node for a block of n_samples, each with a
/// uniform initial phase.
PhaseTraces gen_phase_traces(std::size_t n_tx, OscillatorMode mode, std::size_t n_samples,
                             const PhaseNoiseSpec& spec, Rng& rng);

IciCoefficients compute_ici_coefficients(const RVector& combined_phase);

/// Combined phase over the last n_subcarriers samples (the CP-stripped body).
RVector combined_body_phase(const PhaseNoiseTrace& tx, const PhaseNoiseTrace& rx, std::size_t n_subcarriers);

/// One IciCoefficients per transmit antenna.
std::vector<IciCoefficients> link_ici(const PhaseTraces& traces, std::size_t n_tx, std::size_t n_subcarriers);

PnCovarianceTable pn_covariance_table(const PhaseNoiseSpec& spec, OscillatorMode mode);

RVector exponential_pdp(std::size_t n_taps, double total_power, double decay_taps = 4.0);
RVector uniform_pdp(std::size_t n_taps, double total_power);

SiChannelSet gen_si_channel(std::size_t n_tx, std::size_t n_taps, const RVector& pdp, Rng& rng);

CVector gen_cscg(std::size_t n, double power, Rng& rng);
inline CVector gen_awgn(std::size_t n, double power, Rng& rng) { return gen_cscg(n, power, rng); }
inline CVector gen_soi(std::size_t n, double power, Rng& rng) { return gen_cscg(n, power, rng); }

/// SI part only: sum_s Delta_s X F h_s, with [Delta_s z]_k = sum_i delta^s_{k-i} z_i.
CVector synthesize_si(const CVector& symbols, const SiChannelSet& channels, const PhaseTraces& traces,
                      const ofdm::DftMatrix& dft);

/// Full received frequency-domain vector; SoI is drawn before noise.
ReceivedSignal synthesize_received(const CVector& symbols, const SiChannelSet& channels,
                                   const PhaseTraces& traces, double soi_power, double noise_power,
                                   const ofdm::DftMatrix& dft, Rng& rng);

}  // namespace fdsic::impairments
