#pragma once

#include <cstddef>

#include "fdsic/common.hpp"
#include "fdsic/random.hpp"

// OFDM substrate. Transform convention: forward DFT is the unnormalized sum
// sum_n x(n) e^{-j2pi kn/N}; the inverse carries the 1/N factor.
namespace fdsic::ofdm {

/// Partial DFT matrix, [F]_{n,l} = e^{-j2pi nl/N_c}, N_c x L.
struct DftMatrix {
    CMatrix entries;
    std::size_t n_subcarriers = 0;
    std::size_t n_taps = 0;
};

struct OfdmFrame {
    CVector freq_symbols;
    CVector time_samples;  // cyclic prefix first
    double symbol_power = 0.0;
};

DftMatrix build_dft_matrix(std::size_t n_subcarriers, std::size_t n_taps);

/// Equiprobable +-sqrt(symbol_power) on every subcarrier.
CVector gen_bpsk_symbols(std::size_t n_subcarriers, double symbol_power, Rng& rng);

CVector dft(const CVector& x);
CVector idft(const CVector& spectrum);

CVector modulate(const CVector& freq_symbols, std::size_t cp_length);
CVector demodulate(const CVector& time_samples, std::size_t cp_length);

OfdmFrame make_frame(const CVector& freq_symbols, double symbol_power, std::size_t cp_length);

}  // namespace fdsic::ofdm
