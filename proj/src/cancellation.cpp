#include "fdsic/cancellation.hpp"

#include <cmath>
#include <limits>

namespace fdsic::cancellation {

CVector reconstruct_si(const CVector& symbols, const ofdm::DftMatrix& dft, const CVector& h_delta_hat) {
    if (static_cast<std::size_t>(symbols.size()) != dft.n_subcarriers ||
        static_cast<std::size_t>(h_delta_hat.size()) != dft.n_taps) {
        throw Error(ErrorCode::DimensionMismatch, "X, F and h_delta disagree");
    }
    return symbols.cwiseProduct(dft.entries * h_delta_hat);
}

CVector cancel(const CVector& y, const CVector& y_si_hat) {
    if (y.size() != y_si_hat.size()) throw Error(ErrorCode::DimensionMismatch, "y and reconstruction differ in length");
    return y - y_si_hat;
}

double residual_power_theoretical(const CMatrix& A, const CMatrix& V, double noise_power, double soi_power) {
    const auto n = A.rows();
    if (A.cols() != n || V.rows() != n || V.cols() != n) throw Error(ErrorCode::DimensionMismatch, "A and V shapes");
    const CMatrix eye = CMatrix::Identity(n, n);
    const CMatrix b = A + noise_power * eye;
    const CMatrix c = b + soi_power * eye;
    const double quad = ((V * c).cwiseProduct(V.conjugate())).sum().real();
    const double cross = (V.cwiseProduct(b.transpose())).sum().real();
    return static_cast<double>(n) * noise_power + A.trace().real() + quad - 2.0 * cross;
}

double si_power(double symbol_power, const RVector& pdp, std::size_t n_tx, std::size_t n_subcarriers) {
    return static_cast<double>(n_subcarriers) * symbol_power * static_cast<double>(n_tx) * pdp.sum();
}

double si_power(const CVector& symbols, const RVector& pdp, std::size_t n_tx) {
    return symbols.squaredNorm() * static_cast<double>(n_tx) * pdp.sum();
}

namespace {

Decibels ratio_db(double num, double den) {
    if (!(den > 0.0)) return {std::numeric_limits<double>::infinity(), true};
    return {10.0 * std::log10(num / den), false};
}

}  // namespace

Decibels cancellation_ability(double si_power, double noise_floor, double residual_power) {
    return ratio_db(si_power + noise_floor, residual_power);
}

Decibels g_max_theoretical(double si_power, double noise_floor, double mean_f_star_sum) {
    return ratio_db(si_power + noise_floor, si_power + noise_floor + mean_f_star_sum);
}

CancellationReport make_report(double residual_empirical, double residual_theoretical, double si_power,
                               double noise_floor) {
    CancellationReport r;
    r.residual_power_empirical = residual_empirical;
    r.residual_power_theoretical = residual_theoretical;
    r.si_power = si_power;
    r.noise_floor = noise_floor;
    const Decibels g = cancellation_ability(si_power, noise_floor, residual_empirical);
    r.ability_db = g.db;
    r.ability_unbounded = g.unbounded;
    return r;
}

}  // namespace fdsic::cancellation
