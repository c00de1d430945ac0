#include "fdsic/impairments.hpp"

#include <cmath>

namespace fdsic::impairments {
namespace {

using Eigen::Index;

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidParameter, std::string(what) + " must be >= 0");
}

CVector circulant_mix(const CVector& delta, const CVector& z) {
    const Index n = z.size();
    CVector out = CVector::Zero(n);
    for (Index k = 0; k < n; ++k) {
        cdouble acc{0.0, 0.0};
        for (Index i = 0; i < n; ++i) acc += delta[static_cast<Index>(wrap(k - i, n))] * z[i];
        out[k] = acc;
    }
    return out;
}

}  // namespace

double PhaseNoiseSpec::increment_variance() const {
    require_nonnegative(delta_f, "delta_f");
    const double per_block = 4.0 * kPi * delta_f;
    if (scale == PhaseNoiseScale::PerSample) return per_block;
    if (n_subcarriers == 0) throw Error(ErrorCode::InvalidParameter, "n_subcarriers must be positive");
    return per_block / static_cast<double>(n_subcarriers);
}

PhaseNoiseTrace gen_wiener_phase(std::size_t n_samples, const PhaseNoiseSpec& spec, double initial_phase,
                                 Rng& rng) {
    if (n_samples == 0) throw Error(ErrorCode::InvalidParameter, "n_samples must be >= 1");
    PhaseNoiseTrace trace;
    trace.increment_variance = spec.increment_variance();
    trace.initial_phase = initial_phase;
    trace.phases.resize(static_cast<Index>(n_samples));
    const double sigma = std::sqrt(trace.increment_variance);
    double phase = initial_phase;
    trace.phases[0] = phase;
    for (Index n = 1; n < trace.phases.size(); ++n) {
        phase += sigma * rng.normal();
        trace.phases[n] = phase;
    }
    return trace;
}

PhaseTraces gen_phase_traces(std::size_t n_tx, OscillatorMode mode, std::size_t n_samples,
                             const PhaseNoiseSpec& spec, Rng& rng) {
    PhaseTraces traces;
    const std::size_t n_osc = mode == OscillatorMode::Shared ? 1 : n_tx;
    traces.tx.reserve(n_osc);
    for (std::size_t s = 0; s < n_osc; ++s) {
        const double start = 2.0 * kPi * rng.uniform();
        traces.tx.push_back(gen_wiener_phase(n_samples, spec, start, rng));
    }
    const double start = 2.0 * kPi * rng.uniform();
    traces.rx = gen_wiener_phase(n_samples, spec, start, rng);
    return traces;
}

IciCoefficients compute_ici_coefficients(const RVector& combined_phase) {
    if (combined_phase.size() == 0) throw Error(ErrorCode::InvalidDimension, "empty phase vector");
    CVector rot(combined_phase.size());
    for (Index n = 0; n < rot.size(); ++n) rot[n] = std::polar(1.0, combined_phase[n]);
    return {ofdm::dft(rot) / static_cast<double>(rot.size())};
}

RVector combined_body_phase(const PhaseNoiseTrace& tx, const PhaseNoiseTrace& rx, std::size_t n_subcarriers) {
    const auto n = static_cast<Index>(n_subcarriers);
    if (tx.phases.size() < n || rx.phases.size() < n) {
        throw Error(ErrorCode::DimensionMismatch, "phase trace shorter than the OFDM symbol");
    }
    return tx.phases.tail(n) + rx.phases.tail(n);
}

std::vector<IciCoefficients> link_ici(const PhaseTraces& traces, std::size_t n_tx, std::size_t n_subcarriers) {
    if (traces.tx.size() != n_tx && traces.tx.size() != 1) {
        throw Error(ErrorCode::DimensionMismatch, "need one transmit trace per antenna or one shared trace");
    }
    std::vector<IciCoefficients> out;
    out.reserve(n_tx);
    if (traces.tx.size() == 1) {
        const auto shared = compute_ici_coefficients(combined_body_phase(traces.tx[0], traces.rx, n_subcarriers));
        out.assign(n_tx, shared);
        return out;
    }
    for (std::size_t s = 0; s < n_tx; ++s)
        out.push_back(compute_ici_coefficients(combined_body_phase(traces.tx[s], traces.rx, n_subcarriers)));
    return out;
}

PnCovarianceTable pn_covariance_table(const PhaseNoiseSpec& spec, OscillatorMode mode) {
    const auto n = static_cast<Index>(spec.n_subcarriers);
    if (n == 0) throw Error(ErrorCode::InvalidParameter, "n_subcarriers must be positive");
    PnCovarianceTable table;
    table.delta_f = spec.delta_f;
    table.oscillator_mode = mode;
    // Transmit and receive oscillators are independent, so increments add.
    table.combined_increment_variance = 2.0 * spec.increment_variance();

    table.lag_correlation.resize(n);
    for (Index d = 0; d < n; ++d)
        table.lag_correlation[d] = std::exp(-0.5 * table.combined_increment_variance * static_cast<double>(d));

    CMatrix toeplitz(n, n);
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) toeplitz(a, b) = table.lag_correlation[std::abs(a - b)];

    const CMatrix full = ofdm::build_dft_matrix(spec.n_subcarriers, spec.n_subcarriers).entries;
    CMatrix gamma = full * toeplitz * full.adjoint() / static_cast<double>(n * n);
    table.gamma = 0.5 * (gamma + gamma.adjoint());
    return table;
}

RVector exponential_pdp(std::size_t n_taps, double total_power, double decay_taps) {
    require_nonnegative(total_power, "total_power");
    if (n_taps == 0) throw Error(ErrorCode::InvalidParameter, "n_taps must be positive");
    RVector pdp(static_cast<Index>(n_taps));
    for (Index l = 0; l < pdp.size(); ++l) pdp[l] = std::exp(-static_cast<double>(l) / decay_taps);
    return pdp * (total_power / pdp.sum());
}

RVector uniform_pdp(std::size_t n_taps, double total_power) {
    require_nonnegative(total_power, "total_power");
    if (n_taps == 0) throw Error(ErrorCode::InvalidParameter, "n_taps must be positive");
    return RVector::Constant(static_cast<Index>(n_taps), total_power / static_cast<double>(n_taps));
}

SiChannelSet gen_si_channel(std::size_t n_tx, std::size_t n_taps, const RVector& pdp, Rng& rng) {
    if (static_cast<std::size_t>(pdp.size()) != n_taps) {
        throw Error(ErrorCode::InvalidParameter, "pdp length must equal n_taps");
    }
    for (double p : pdp) require_nonnegative(p, "pdp entry");
    SiChannelSet set;
    set.n_tx = n_tx;
    set.pdp = pdp;
    set.taps.resize(static_cast<Index>(n_tx), static_cast<Index>(n_taps));
    for (Index s = 0; s < set.taps.rows(); ++s)
        for (Index l = 0; l < set.taps.cols(); ++l) set.taps(s, l) = rng.cscg(pdp[l]);
    return set;
}

CVector gen_cscg(std::size_t n, double power, Rng& rng) {
    require_nonnegative(power, "power");
    CVector v(static_cast<Index>(n));
    for (auto& x : v) x = rng.cscg(power);
    return v;
}

CVector synthesize_si(const CVector& symbols, const SiChannelSet& channels, const PhaseTraces& traces,
                      const ofdm::DftMatrix& dft) {
    const Index n = symbols.size();
    if (static_cast<std::size_t>(n) != dft.n_subcarriers ||
        static_cast<std::size_t>(channels.taps.cols()) != dft.n_taps ||
        static_cast<std::size_t>(channels.taps.rows()) != channels.n_tx) {
        throw Error(ErrorCode::DimensionMismatch, "symbols, channels and DFT matrix disagree");
    }
    const auto ici = link_ici(traces, channels.n_tx, dft.n_subcarriers);

    if (traces.tx.size() == 1) {
        // One oscillator pair for every antenna: mix the summed channel once.
        const CVector h_sum = channels.taps.colwise().sum().transpose();
        const CVector z = symbols.cwiseProduct(dft.entries * h_sum);
        return circulant_mix(ici.front().delta, z);
    }
    CVector y = CVector::Zero(n);
    for (Index s = 0; s < channels.taps.rows(); ++s) {
        const CVector z = symbols.cwiseProduct(dft.entries * channels.taps.row(s).transpose());
        y += circulant_mix(ici[static_cast<std::size_t>(s)].delta, z);
    }
    return y;
}

ReceivedSignal synthesize_received(const CVector& symbols, const SiChannelSet& channels,
                                   const PhaseTraces& traces, double soi_power, double noise_power,
                                   const ofdm::DftMatrix& dft, Rng& rng) {
    ReceivedSignal out;
    out.y_si = synthesize_si(symbols, channels, traces, dft);
    out.y_soi = gen_soi(dft.n_subcarriers, soi_power, rng);
    out.noise = gen_awgn(dft.n_subcarriers, noise_power, rng);
    out.y = out.y_si + out.y_soi + out.noise;
    return out;
}

}  // namespace fdsic::impairments
