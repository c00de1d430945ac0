#include "fdsic/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fdsic/cancellation.hpp"
#include "fdsic/estimator.hpp"
#include "fdsic/ofdm.hpp"

namespace fdsic::validation {
namespace {

using Eigen::Index;
using impairments::OscillatorMode;
using impairments::PhaseTraces;
using impairments::SiChannelSet;

const impairments::PhaseNoiseTrace& tx_trace(const PhaseTraces& traces, Index s) {
    return traces.tx.size() == 1 ? traces.tx.front() : traces.tx[static_cast<std::size_t>(s)];
}

void require_cp(const SiChannelSet& channels, std::size_t cp_length) {
    if (static_cast<std::size_t>(channels.taps.cols()) > cp_length + 1) {
        throw Error(ErrorCode::InvalidDimension, "time-domain oracle needs n_taps <= cp_length + 1");
    }
}

// FIR output at absolute sample t; samples before the block are zero.
cdouble fir(const CVector& in, const SiChannelSet& channels, Index s, Index t) {
    cdouble acc{0.0, 0.0};
    for (Index l = 0; l < channels.taps.cols() && l <= t; ++l) acc += channels.taps(s, l) * in[t - l];
    return acc;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

}  // namespace

CVector time_domain_si(const CVector& symbols, const SiChannelSet& channels, const PhaseTraces& traces,
                       std::size_t cp_length) {
    require_cp(channels, cp_length);
    const CVector tx = ofdm::modulate(symbols, cp_length);
    const auto cp = static_cast<Index>(cp_length);
    if (traces.rx.phases.size() != tx.size()) throw Error(ErrorCode::DimensionMismatch, "trace length != N_c + N_p");

    CVector rx = CVector::Zero(tx.size());
    for (Index s = 0; s < channels.taps.rows(); ++s) {
        const auto& theta_t = tx_trace(traces, s).phases;
        for (Index t = cp; t < tx.size(); ++t) rx[t] += std::polar(1.0, theta_t[t]) * fir(tx, channels, s, t);
    }
    for (Index t = cp; t < rx.size(); ++t) rx[t] *= std::polar(1.0, traces.rx.phases[t]);
    return ofdm::demodulate(rx, cp_length);
}

CVector time_domain_si_physical(const CVector& symbols, const SiChannelSet& channels, const PhaseTraces& traces,
                                std::size_t cp_length) {
    require_cp(channels, cp_length);
    const CVector tx = ofdm::modulate(symbols, cp_length);
    if (traces.rx.phases.size() != tx.size()) throw Error(ErrorCode::DimensionMismatch, "trace length != N_c + N_p");
    const auto cp = static_cast<Index>(cp_length);

    CVector rx = CVector::Zero(tx.size());
    for (Index s = 0; s < channels.taps.rows(); ++s) {
        const auto& theta_t = tx_trace(traces, s).phases;
        CVector rotated(tx.size());
        for (Index t = 0; t < tx.size(); ++t) rotated[t] = tx[t] * std::polar(1.0, theta_t[t]);
        for (Index t = cp; t < tx.size(); ++t) rx[t] += fir(rotated, channels, s, t);
    }
    for (Index t = cp; t < rx.size(); ++t) rx[t] *= std::polar(1.0, traces.rx.phases[t]);
    return ofdm::demodulate(rx, cp_length);
}

CMatrix gamma_monte_carlo(const impairments::PhaseNoiseSpec& spec, std::size_t n_traces, std::uint64_t seed) {
    const auto n = static_cast<Index>(spec.n_subcarriers);
    Rng rng(seed);
    CMatrix acc = CMatrix::Zero(n, n);
    for (std::size_t t = 0; t < n_traces; ++t) {
        const auto tx = impairments::gen_wiener_phase(spec.n_subcarriers, spec, 2.0 * kPi * rng.uniform(), rng);
        const auto rx = impairments::gen_wiener_phase(spec.n_subcarriers, spec, 2.0 * kPi * rng.uniform(), rng);
        const CVector delta = impairments::compute_ici_coefficients(tx.phases + rx.phases).delta;
        acc.noalias() += delta * delta.adjoint();
    }
    return acc / static_cast<double>(n_traces);
}

CMatrix si_covariance_monte_carlo(const CVector& symbols, const RVector& pdp, std::size_t n_tx,
                                  const impairments::PhaseNoiseSpec& spec, OscillatorMode mode,
                                  std::size_t n_trials, std::uint64_t seed) {
    const auto n = static_cast<Index>(symbols.size());
    const auto dft = ofdm::build_dft_matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(pdp.size()));
    Rng rng(seed);
    CMatrix acc = CMatrix::Zero(n, n);
    for (std::size_t t = 0; t < n_trials; ++t) {
        const auto channels = impairments::gen_si_channel(n_tx, static_cast<std::size_t>(pdp.size()), pdp, rng);
        const auto traces = impairments::gen_phase_traces(n_tx, mode, static_cast<std::size_t>(n), spec, rng);
        const CVector y = impairments::synthesize_si(symbols, channels, traces, dft);
        acc.noalias() += y * y.adjoint();
    }
    return acc / static_cast<double>(n_trials);
}

OracleResult check_gamma(std::size_t n_subcarriers, double delta_f, std::size_t n_traces, std::uint64_t seed,
                         double tolerance) {
    const impairments::PhaseNoiseSpec spec{delta_f, n_subcarriers, impairments::PhaseNoiseScale::PerSymbol};
    const auto table = impairments::pn_covariance_table(spec, OscillatorMode::PerAntenna);
    const CMatrix mc = gamma_monte_carlo(spec, n_traces, seed);
    OracleResult r;
    r.name = "phase-noise covariance vs Monte Carlo (N_c=" + std::to_string(n_subcarriers) + ", df=" + fmt(delta_f) + ")";
    r.error = (table.gamma - mc).cwiseAbs().maxCoeff();
    r.tolerance = tolerance;
    r.passed = r.error <= tolerance;
    r.detail = std::to_string(n_traces) + " traces, max |Gamma - MC| = " + fmt(r.error);
    return r;
}

OracleResult check_covariance(std::size_t n_subcarriers, std::size_t n_taps, double delta_f, std::size_t n_trials,
                              std::uint64_t seed, double tolerance) {
    Rng rng(seed ^ 0x5eedULL);
    const std::size_t n_tx = 4;
    const CVector x = ofdm::gen_bpsk_symbols(n_subcarriers, 1.0, rng);
    const RVector pdp = impairments::exponential_pdp(n_taps, 1.0);
    const impairments::PhaseNoiseSpec spec{delta_f, n_subcarriers, impairments::PhaseNoiseScale::PerSymbol};

    estimator::EstimatorStatistics stats{x, impairments::pn_covariance_table(spec, OscillatorMode::PerAntenna), pdp,
                                         n_tx, 0.0, 0.0};
    const CMatrix a = estimator::assemble_A(stats);
    const CMatrix mc = si_covariance_monte_carlo(x, pdp, n_tx, spec, OscillatorMode::PerAntenna, n_trials, seed);
    OracleResult r;
    r.name = "SI covariance A vs Monte Carlo (N_c=" + std::to_string(n_subcarriers) + ", L=" +
             std::to_string(n_taps) + ", df=" + fmt(delta_f) + ")";
    r.error = (a - mc).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff();
    r.tolerance = tolerance;
    r.passed = r.error <= tolerance;
    r.detail = std::to_string(n_trials) + " trials, max |A - MC| / max|A| = " + fmt(r.error);
    return r;
}

CMatrix random_hermitian(std::size_t n, Rng& rng) {
    CMatrix g(static_cast<Index>(n), static_cast<Index>(n));
    for (auto& v : g.reshaped()) v = rng.cscg(1.0);
    return 0.5 * (g + g.adjoint());
}

CMatrix random_hpd(std::size_t n, double floor, Rng& rng) {
    CMatrix g(static_cast<Index>(n), static_cast<Index>(n));
    for (auto& v : g.reshaped()) v = rng.cscg(1.0);
    const CMatrix c = g * g.adjoint() / static_cast<double>(n) +
                      floor * CMatrix::Identity(static_cast<Index>(n), static_cast<Index>(n));
    return 0.5 * (c + c.adjoint());
}

OracleResult check_qp_equivalence(const std::vector<std::size_t>& sizes, std::size_t instances, std::uint64_t seed,
                                  double tolerance) {
    Rng rng(seed);
    OracleResult r;
    r.name = "real-embedded QP vs complex B^H C^-1";
    r.tolerance = tolerance;
    double worst_f = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (std::size_t n : sizes) {
        for (std::size_t i = 0; i < instances; ++i, ++count) {
            estimator::CovarianceBundle bundle;
            bundle.C = random_hpd(n, 0.05 + rng.uniform(), rng);
            bundle.B = random_hermitian(n, rng);
            bundle.A = bundle.B;
            const auto sol = estimator::optimal_V(bundle);
            // Dense oracle: explicit inverse through full-pivot LU.
            const CMatrix expected = bundle.B.adjoint() * bundle.C.fullPivLu().inverse();
            const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
            r.error = std::max(r.error, (sol.V - expected).cwiseAbs().maxCoeff() / scale);
            worst_f = std::max(worst_f, sol.f_star.maxCoeff());
        }
    }
    r.passed = r.error <= tolerance && worst_f <= 0.0;
    r.detail = std::to_string(count) + " instances, max |V - B^H C^-1| = " + fmt(r.error) + ", max f_k* = " + fmt(worst_f);
    return r;
}

OracleResult check_model_equivalence(std::size_t n_subcarriers, std::size_t n_taps, std::size_t realizations,
                                     std::uint64_t seed, double tolerance) {
    Rng rng(seed);
    const std::size_t cp = std::max<std::size_t>(n_taps - 1, n_subcarriers / 8);
    const auto dft = ofdm::build_dft_matrix(n_subcarriers, n_taps);
    const double delta_fs[] = {1e-4, 1e-3, 1e-2, 1e-1};
    OracleResult r;
    r.name = "frequency-domain synthesis vs time-domain path (N_c=" + std::to_string(n_subcarriers) +
             ", L=" + std::to_string(n_taps) + ")";
    r.tolerance = tolerance;
    for (std::size_t i = 0; i < realizations; ++i) {
        const std::size_t n_tx = 1 + i % 4;
        const auto mode = i % 2 == 0 ? OscillatorMode::PerAntenna : OscillatorMode::Shared;
        const impairments::PhaseNoiseSpec spec{delta_fs[i % 4], n_subcarriers, impairments::PhaseNoiseScale::PerSymbol};
        const CVector x = ofdm::gen_bpsk_symbols(n_subcarriers, 1.0, rng);
        const auto channels = impairments::gen_si_channel(n_tx, n_taps, impairments::exponential_pdp(n_taps, 1.0), rng);
        const auto traces = impairments::gen_phase_traces(n_tx, mode, n_subcarriers + cp, spec, rng);
        const CVector freq = impairments::synthesize_si(x, channels, traces, dft);
        const CVector time = time_domain_si(x, channels, traces, cp);
        r.error = std::max(r.error, (freq - time).norm() / time.norm());
    }
    r.passed = r.error <= tolerance;
    r.detail = std::to_string(realizations) + " realizations, worst relative error " + fmt(r.error);
    return r;
}

OracleResult check_optimality(const std::vector<std::size_t>& sizes, std::size_t instances, std::uint64_t seed,
                              double tolerance) {
    Rng rng(seed);
    OracleResult r;
    r.name = "optimality of V* and closed-form minimum";
    r.tolerance = tolerance;
    std::size_t violations = 0;
    std::size_t count = 0;
    for (std::size_t n : sizes) {
        for (std::size_t i = 0; i < instances; ++i, ++count) {
            const std::size_t taps = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n / 2));
            const double delta_f = std::pow(10.0, -5.0 + 4.0 * rng.uniform());
            const std::size_t n_tx = 1 + i % 4;
            const double sigma_x = 0.5 + rng.uniform();
            const double noise = 0.1 + 2.0 * rng.uniform();
            const double soi = 10.0 * rng.uniform();
            const impairments::PhaseNoiseSpec spec{delta_f, n, impairments::PhaseNoiseScale::PerSymbol};
            const auto dft = ofdm::build_dft_matrix(n, taps);
            const CVector x = ofdm::gen_bpsk_symbols(n, sigma_x, rng);
            estimator::EstimatorStatistics stats{x, impairments::pn_covariance_table(spec, OscillatorMode::PerAntenna),
                                                 impairments::exponential_pdp(taps, 1.0 + 100.0 * rng.uniform()),
                                                 n_tx, noise, soi};
            const CMatrix a = estimator::assemble_A(stats);
            const auto bundle = estimator::assemble_BC(a, noise, soi);
            const auto sol = estimator::optimal_V(bundle);

            const double best = cancellation::residual_power_theoretical(a, sol.V, noise, soi);
            const double closed = static_cast<double>(n) * noise + a.trace().real() + sol.f_star.sum();
            r.error = std::max(r.error, std::abs(best - closed) / std::abs(closed));

            const auto eye = CMatrix::Identity(static_cast<Index>(n), static_cast<Index>(n));
            const CMatrix competitors[] = {CMatrix::Zero(static_cast<Index>(n), static_cast<Index>(n)), eye,
                                           estimator::ls_weight_matrix(x, dft)};
            for (const auto& v : competitors) {
                const double other = cancellation::residual_power_theoretical(a, v, noise, soi);
                if (best > other + 1e-9 * std::abs(other)) ++violations;
            }
        }
    }
    r.passed = r.error <= tolerance && violations == 0;
    r.detail = std::to_string(count) + " instances, closed-form mismatch " + fmt(r.error) + ", " +
               std::to_string(violations) + " optimality violations";
    return r;
}

}  // namespace fdsic::validation
