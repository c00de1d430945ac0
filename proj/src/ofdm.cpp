#include "fdsic/ofdm.hpp"

#include <cmath>

namespace fdsic::ofdm {
namespace {

// Twiddle e^{sign * j2pi k/n}; the exponent is reduced modulo n first so large
// index products stay exact.
cdouble twiddle(std::size_t k, std::size_t n, double sign) {
    const double angle = sign * 2.0 * kPi * static_cast<double>(k % n) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

CVector transform(const CVector& in, double sign) {
    const auto n = static_cast<std::size_t>(in.size());
    CVector roots(in.size());
    for (std::size_t k = 0; k < n; ++k) roots[static_cast<Eigen::Index>(k)] = twiddle(k, n, sign);
    CVector out = CVector::Zero(in.size());
    for (std::size_t k = 0; k < n; ++k) {
        cdouble acc{0.0, 0.0};
        std::size_t idx = 0;  // k * t mod n
        for (std::size_t t = 0; t < n; ++t) {
            acc += in[static_cast<Eigen::Index>(t)] * roots[static_cast<Eigen::Index>(idx)];
            idx += k;
            if (idx >= n) idx -= n;
        }
        out[static_cast<Eigen::Index>(k)] = acc;
    }
    return out;
}

}  // namespace

DftMatrix build_dft_matrix(std::size_t n_subcarriers, std::size_t n_taps) {
    if (n_subcarriers == 0 || n_taps == 0 || n_taps > n_subcarriers) {
        throw Error(ErrorCode::InvalidDimension, "DFT matrix needs 1 <= n_taps <= n_subcarriers");
    }
    DftMatrix f;
    f.n_subcarriers = n_subcarriers;
    f.n_taps = n_taps;
    f.entries.resize(static_cast<Eigen::Index>(n_subcarriers), static_cast<Eigen::Index>(n_taps));
    for (std::size_t n = 0; n < n_subcarriers; ++n)
        for (std::size_t l = 0; l < n_taps; ++l)
            f.entries(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(l)) =
                twiddle(n * l, n_subcarriers, -1.0);
    return f;
}

CVector gen_bpsk_symbols(std::size_t n_subcarriers, double symbol_power, Rng& rng) {
    if (!(symbol_power > 0.0)) throw Error(ErrorCode::InvalidParameter, "symbol_power must be positive");
    const double amp = std::sqrt(symbol_power);
    CVector x(static_cast<Eigen::Index>(n_subcarriers));
    for (auto& v : x) v = rng.coin() ? amp : -amp;
    return x;
}

CVector dft(const CVector& x) { return transform(x, -1.0); }

CVector idft(const CVector& spectrum) {
    return transform(spectrum, +1.0) / static_cast<double>(spectrum.size());
}

CVector modulate(const CVector& freq_symbols, std::size_t cp_length) {
    const auto n = static_cast<std::size_t>(freq_symbols.size());
    if (n == 0) throw Error(ErrorCode::InvalidDimension, "empty symbol vector");
    if (cp_length >= n) throw Error(ErrorCode::InvalidDimension, "cyclic prefix must be shorter than the symbol");
    const CVector body = idft(freq_symbols);
    const auto cp = static_cast<Eigen::Index>(cp_length);
    CVector out(body.size() + cp);
    out.head(cp) = body.tail(cp);
    out.tail(body.size()) = body;
    return out;
}

CVector demodulate(const CVector& time_samples, std::size_t cp_length) {
    const auto cp = static_cast<Eigen::Index>(cp_length);
    if (time_samples.size() <= cp) {
        throw Error(ErrorCode::InvalidDimension, "time block shorter than cyclic prefix");
    }
    return dft(time_samples.tail(time_samples.size() - cp));
}

OfdmFrame make_frame(const CVector& freq_symbols, double symbol_power, std::size_t cp_length) {
    return {freq_symbols, modulate(freq_symbols, cp_length), symbol_power};
}

}  // namespace fdsic::ofdm
