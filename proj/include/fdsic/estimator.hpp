#pragma once

#include <cstddef>

#include "fdsic/common.hpp"
#include "fdsic/impairments.hpp"
#include "fdsic/ofdm.hpp"

// Weighted linear SI channel estimator: conditional SI covariance, the
// per-subcarrier real quadratic programs and the least-squares baseline.
namespace fdsic::estimator {

/// Everything the optimal estimator needs to know about one OFDM symbol.
struct EstimatorStatistics {
    CVector symbols;                        // X[k], known SI symbols
    impairments::PnCovarianceTable pn;      // phase-noise covariance of one link
    RVector pdp;                            // per-antenna E|h_s(l)|^2
    std::size_t n_tx = 0;
    double noise_power = 0.0;
    double soi_power = 0.0;

    /// Throws on inconsistent sizes, negative powers or a zero symbol.
    void validate() const;
};

struct CovarianceBundle {
    CMatrix A;  // E[y^I (y^I)^H | X]
    CMatrix B;  // A + noise I
    CMatrix C;  // B + soi I
};

struct RealQp {
    RMatrix phi;  // [[Re C, Im C], [-Im C, Re C]]
    RVector b;    // [Re B(:,k); -Im B(:,k)]
};

struct QpSolution {
    RVector v;
    double f = 0.0;  // -b^T Phi^{-1} b
};

struct WeightSolution {
    CMatrix V;              // N_c x N_c weight on the received vector
    CMatrix W;              // L x N_c channel estimator, W = (1/N_c) F^H T V
    RVector f_star;         // optimal value of each subcarrier's QP
    CVector h_delta_hat;    // W y, filled by the caller once y is known
};

/// P(d) = sum_l pdp[l] e^{-j2pi dl/N}, d = 0..n-1.
CVector pdp_spectrum(const RVector& pdp, std::size_t n_subcarriers);

/// Direct evaluation of the Gamma-weighted quadruple sum. O(N_c^4); the
/// reference form.
CMatrix assemble_A(const EstimatorStatistics& stats);

/// Same matrix through the time-domain lag covariance of the FIR output,
/// A = N_s F_N (M o R) F_N^H. O(N_c^3).
CMatrix assemble_A_fast(const EstimatorStatistics& stats);

CovarianceBundle assemble_BC(const CMatrix& A, double noise_power, double soi_power);

RMatrix build_phi(const CMatrix& C);
RVector build_b(const CMatrix& B, std::size_t k);
RealQp build_real_qp(const CMatrix& C, const CMatrix& B, std::size_t k);

/// Cholesky factor of Phi reused for every right-hand side.
class QpSolver {
public:
    explicit QpSolver(const RMatrix& phi);

    QpSolution solve(const RVector& b) const;
    RMatrix solve_all(const RMatrix& rhs) const;

private:
    Eigen::LLT<RMatrix> llt_;
};

QpSolution solve_qp(const RMatrix& phi, const RVector& b);

/// Algorithm 1: one factorization of Phi, N_c back-substitutions, rows of V
/// re-assembled from the real layout. W and h_delta_hat are left empty.
WeightSolution optimal_V(const CovarianceBundle& bundle);

/// The same optimum from the complex normal equations, V = B^H C^{-1}.
CMatrix optimal_V_complex(const CovarianceBundle& bundle);

CMatrix extract_W(const CMatrix& V, const CVector& symbols, const ofdm::DftMatrix& dft);

CVector estimate_h_delta(const CMatrix& W, const CVector& y);

CVector ls_estimator(const CVector& y, const CVector& symbols, const ofdm::DftMatrix& dft);

/// V_LS = X F (F^H X^H X F)^{-1} F^H X^H, the projection the LS fit applies to y.
CMatrix ls_weight_matrix(const CVector& symbols, const ofdm::DftMatrix& dft);

/// Covariance, QP solve and W extraction for one symbol.
WeightSolution solve_optimal(const EstimatorStatistics& stats, const ofdm::DftMatrix& dft,
                             CovarianceBundle* bundle_out = nullptr);

}  // namespace fdsic::estimator
