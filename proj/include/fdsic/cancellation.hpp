#pragma once

#include <cstddef>

#include "fdsic/common.hpp"
#include "fdsic/ofdm.hpp"

namespace fdsic::cancellation {

struct CancellationReport {
    double residual_power_empirical = 0.0;    // ||r||^2 for one symbol
    double residual_power_theoretical = 0.0;  // closed form at the V actually used
    double si_power = 0.0;                    // E_I
    double noise_floor = 0.0;                 // N_c * noise power
    double ability_db = 0.0;
    bool ability_unbounded = false;           // residual was <= 0
};

/// A ratio in dB; `unbounded` marks a non-positive denominator, in which case
/// `db` is +infinity.
struct Decibels {
    double db = 0.0;
    bool unbounded = false;
};

CVector reconstruct_si(const CVector& symbols, const ofdm::DftMatrix& dft, const CVector& h_delta_hat);

CVector cancel(const CVector& y, const CVector& y_si_hat);

/// N_c s_n + tr{A} + tr{V C V^H} - 2 Re tr{V B}.
double residual_power_theoretical(const CMatrix& A, const CMatrix& V, double noise_power, double soi_power);

/// E_I = N_c s_x sum_s sum_l pdp[l].
double si_power(double symbol_power, const RVector& pdp, std::size_t n_tx, std::size_t n_subcarriers);
double si_power(const CVector& symbols, const RVector& pdp, std::size_t n_tx);

Decibels cancellation_ability(double si_power, double noise_floor, double residual_power);

/// Ability of the optimal estimator from the mean of sum_k f_k^*.
Decibels g_max_theoretical(double si_power, double noise_floor, double mean_f_star_sum);

CancellationReport make_report(double residual_empirical, double residual_theoretical, double si_power,
                               double noise_floor);

}  // namespace fdsic::cancellation
