#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fdsic/common.hpp"
#include "fdsic/impairments.hpp"

// Independent oracles for the analytic pieces: Monte Carlo moments, a direct
// time-domain signal path and dense complex linear algebra.
namespace fdsic::validation {

struct OracleResult {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

/// Time-domain SI path: OFDM modulation with CP, per-antenna FIR, CP removal,
/// rotation by the transmit phase at the receive instant, rotation by the
/// receive phase, demodulation.
CVector time_domain_si(const CVector& symbols, const impairments::SiChannelSet& channels,
                       const impairments::PhaseTraces& traces, std::size_t cp_length);

/// Physical ordering: transmit rotation on every transmitted sample (CP
/// included) before the FIR. Differs from the per-subcarrier model by the
/// phase drift across the channel memory.
CVector time_domain_si_physical(const CVector& symbols, const impairments::SiChannelSet& channels,
                                const impairments::PhaseTraces& traces, std::size_t cp_length);

/// Sample mean of delta delta^H over n_traces simulated oscillator pairs.
CMatrix gamma_monte_carlo(const impairments::PhaseNoiseSpec& spec, std::size_t n_traces, std::uint64_t seed);

/// Sample covariance of the synthesized SI vector for fixed symbols.
CMatrix si_covariance_monte_carlo(const CVector& symbols, const RVector& pdp, std::size_t n_tx,
                                  const impairments::PhaseNoiseSpec& spec, impairments::OscillatorMode mode,
                                  std::size_t n_trials, std::uint64_t seed);

/// Gamma closed form against Monte Carlo, max absolute entry error.
OracleResult check_gamma(std::size_t n_subcarriers, double delta_f, std::size_t n_traces, std::uint64_t seed,
                         double tolerance = 2e-3);

/// assemble_A against the SI sample covariance, error relative to max|A|.
OracleResult check_covariance(std::size_t n_subcarriers, std::size_t n_taps, double delta_f, std::size_t n_trials,
                              std::uint64_t seed, double tolerance = 3e-2);

/// Real-embedded QP solution against B^H C^{-1} on random Hermitian-PD
/// instances at each size; also requires every f_k^* <= 0.
OracleResult check_qp_equivalence(const std::vector<std::size_t>& sizes, std::size_t instances, std::uint64_t seed,
                                  double tolerance = 1e-8);

/// Frequency-domain synthesis against time_domain_si, worst relative error.
OracleResult check_model_equivalence(std::size_t n_subcarriers, std::size_t n_taps, std::size_t realizations,
                                     std::uint64_t seed, double tolerance = 1e-8);

/// On covariance instances built from channel statistics: V* beats 0, I and
/// V_LS, and the closed-form minimum matches the direct evaluation.
OracleResult check_optimality(const std::vector<std::size_t>& sizes, std::size_t instances, std::uint64_t seed,
                              double tolerance = 1e-6);

/// Random Hermitian positive definite matrix with eigenvalues >= floor.
CMatrix random_hpd(std::size_t n, double floor, Rng& rng);
CMatrix random_hermitian(std::size_t n, Rng& rng);

}  // namespace fdsic::validation
