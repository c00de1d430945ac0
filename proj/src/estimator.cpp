#include "fdsic/estimator.hpp"

#include <cmath>
#include <sstream>

namespace fdsic::estimator {
namespace {

using Eigen::Index;
using RowMajorC = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Scrub floating-point asymmetry; the exact matrix is Hermitian.
CMatrix hermitize(const CMatrix& a) {
    const double skew = max_abs(a - a.adjoint()) / 2.0;
    if (skew > 1e-10 * std::max(1.0, max_abs(a))) {
        std::ostringstream os;
        os << "covariance asymmetry " << skew << " removed by symmetrization";
        warn(os.str());
    }
    return 0.5 * (a + a.adjoint());
}

}  // namespace

void EstimatorStatistics::validate() const {
    const Index n = symbols.size();
    if (n == 0) throw Error(ErrorCode::InvalidDimension, "empty symbol vector");
    if (pn.gamma.rows() != n || pn.gamma.cols() != n || pn.lag_correlation.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "phase-noise table does not match N_c");
    }
    if (pdp.size() == 0 || pdp.size() > n) throw Error(ErrorCode::DimensionMismatch, "pdp length must be in [1, N_c]");
    if (!(noise_power >= 0.0) || !(soi_power >= 0.0) || (pdp.array() < 0.0).any()) {
        throw Error(ErrorCode::InvalidParameter, "powers must be non-negative");
    }
    for (Index k = 0; k < n; ++k)
        if (std::abs(symbols[k]) == 0.0) throw Error(ErrorCode::SingularSymbol, "zero SI symbol");
}

CVector pdp_spectrum(const RVector& pdp, std::size_t n_subcarriers) {
    const auto n = static_cast<Index>(n_subcarriers);
    CVector p = CVector::Zero(n);
    for (Index d = 0; d < n; ++d)
        for (Index l = 0; l < pdp.size(); ++l)
            p[d] += pdp[l] * std::polar(1.0, -2.0 * kPi * static_cast<double>((d * l) % n) / static_cast<double>(n));
    return p;
}

CMatrix assemble_A(const EstimatorStatistics& stats) {
    stats.validate();
    const Index n = stats.symbols.size();
    const CVector p = pdp_spectrum(stats.pdp, static_cast<std::size_t>(n));

    RowMajorC k(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            k(i, j) = stats.symbols[i] * std::conj(stats.symbols[j]) * p[static_cast<Index>(wrap(i - j, n))];
    const RowMajorC gamma = stats.pn.gamma;

    // [A]_{m,n} = N_s sum_{i,j} Gamma[m-i][n-j] X[i] X[j]^* P(i-j)
    CMatrix a(n, n);
    for (Index m = 0; m < n; ++m) {
        for (Index c = 0; c < n; ++c) {
            cdouble acc{0.0, 0.0};
            for (Index i = 0; i < n; ++i) {
                const cdouble* g = gamma.row(static_cast<Index>(wrap(m - i, n))).data();
                const cdouble* kr = k.row(i).data();
                for (Index j = 0; j < n; ++j) acc += g[wrap(c - j, n)] * kr[j];
            }
            a(m, c) = acc;
        }
    }
    return hermitize(a * static_cast<double>(stats.n_tx));
}

CMatrix assemble_A_fast(const EstimatorStatistics& stats) {
    stats.validate();
    const Index n = stats.symbols.size();
    const CVector x = ofdm::idft(stats.symbols);

    // M[n1][n2] = sum_l pdp[l] x(n1-l) x(n2-l)^*, then the phase-noise lag weight.
    CMatrix m(n, n);
    for (Index c = 0; c < n; ++c) {
        for (Index r = 0; r < n; ++r) {
            cdouble acc{0.0, 0.0};
            for (Index l = 0; l < stats.pdp.size(); ++l)
                acc += stats.pdp[l] * x[static_cast<Index>(wrap(r - l, n))] *
                       std::conj(x[static_cast<Index>(wrap(c - l, n))]);
            m(r, c) = acc * stats.pn.lag_correlation[std::abs(r - c)];
        }
    }
    const CMatrix f = ofdm::build_dft_matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n)).entries;
    return hermitize(f * m * f.adjoint() * static_cast<double>(stats.n_tx));
}

CovarianceBundle assemble_BC(const CMatrix& A, double noise_power, double soi_power) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "A must be square");
    if (max_abs(A - A.adjoint()) > 1e-8 * std::max(1.0, max_abs(A))) {
        throw Error(ErrorCode::NonHermitian, "A is not Hermitian");
    }
    const CMatrix eye = CMatrix::Identity(A.rows(), A.cols());
    CovarianceBundle out;
    out.A = A;
    out.B = A + noise_power * eye;
    out.C = out.B + soi_power * eye;
    return out;
}

RMatrix build_phi(const CMatrix& C) {
    const Index n = C.rows();
    RMatrix phi(2 * n, 2 * n);
    phi.topLeftCorner(n, n) = C.real();
    phi.topRightCorner(n, n) = C.imag();
    phi.bottomLeftCorner(n, n) = -C.imag();
    phi.bottomRightCorner(n, n) = C.real();
    return phi;
}

RVector build_b(const CMatrix& B, std::size_t k) {
    const Index n = B.rows();
    const auto col = static_cast<Index>(k);
    if (col >= B.cols()) throw Error(ErrorCode::InvalidDimension, "subcarrier index out of range");
    RVector b(2 * n);
    b.head(n) = B.col(col).real();
    b.tail(n) = -B.col(col).imag();
    return b;
}

RealQp build_real_qp(const CMatrix& C, const CMatrix& B, std::size_t k) {
    if (C.rows() != B.rows() || C.cols() != B.cols()) throw Error(ErrorCode::DimensionMismatch, "C and B differ in shape");
    return {build_phi(C), build_b(B, k)};
}

QpSolver::QpSolver(const RMatrix& phi) : llt_(phi) {
    if (llt_.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "Phi is not positive definite");
}

QpSolution QpSolver::solve(const RVector& b) const {
    QpSolution out;
    out.v = llt_.solve(b);
    out.f = -b.dot(out.v);
    return out;
}

RMatrix QpSolver::solve_all(const RMatrix& rhs) const { return llt_.solve(rhs); }

QpSolution solve_qp(const RMatrix& phi, const RVector& b) {
    if (phi.rows() != phi.cols() || phi.rows() != b.size()) throw Error(ErrorCode::DimensionMismatch, "Phi/b shape");
    return QpSolver(phi).solve(b);
}

WeightSolution optimal_V(const CovarianceBundle& bundle) {
    const Index n = bundle.C.rows();
    const QpSolver solver(build_phi(bundle.C));

    RMatrix rhs(2 * n, n);
    for (Index k = 0; k < n; ++k) rhs.col(k) = build_b(bundle.B, static_cast<std::size_t>(k));
    const RMatrix v = solver.solve_all(rhs);

    WeightSolution out;
    out.V.resize(n, n);
    out.f_star.resize(n);
    for (Index k = 0; k < n; ++k) {
        for (Index c = 0; c < n; ++c) out.V(k, c) = cdouble(v(c, k), v(n + c, k));
        out.f_star[k] = -rhs.col(k).dot(v.col(k));
    }
    return out;
}

CMatrix optimal_V_complex(const CovarianceBundle& bundle) {
    const Eigen::LLT<CMatrix> llt(bundle.C);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "C is not positive definite");
    return llt.solve(bundle.B).adjoint();
}

CMatrix extract_W(const CMatrix& V, const CVector& symbols, const ofdm::DftMatrix& dft) {
    const Index n = symbols.size();
    if (V.rows() != n || static_cast<std::size_t>(n) != dft.n_subcarriers) {
        throw Error(ErrorCode::DimensionMismatch, "V, X and F disagree");
    }
    CVector t(n);
    for (Index k = 0; k < n; ++k) {
        if (std::abs(symbols[k]) == 0.0) throw Error(ErrorCode::SingularSymbol, "zero SI symbol");
        t[k] = std::conj(symbols[k]) / std::norm(symbols[k]);
    }
    return dft.entries.adjoint() * (t.asDiagonal() * V) / static_cast<double>(n);
}

CVector estimate_h_delta(const CMatrix& W, const CVector& y) {
    if (W.cols() != y.size()) throw Error(ErrorCode::DimensionMismatch, "W and y disagree");
    return W * y;
}

namespace {

CMatrix symbol_dft(const CVector& symbols, const ofdm::DftMatrix& dft) {
    if (static_cast<std::size_t>(symbols.size()) != dft.n_subcarriers) {
        throw Error(ErrorCode::DimensionMismatch, "X and F disagree");
    }
    return symbols.asDiagonal() * dft.entries;
}

Eigen::LLT<CMatrix> gram_factor(const CMatrix& xf) {
    Eigen::LLT<CMatrix> llt(xf.adjoint() * xf);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "F^H X^H X F is singular");
    return llt;
}

}  // namespace

CVector ls_estimator(const CVector& y, const CVector& symbols, const ofdm::DftMatrix& dft) {
    const CMatrix xf = symbol_dft(symbols, dft);
    if (y.size() != xf.rows()) throw Error(ErrorCode::DimensionMismatch, "y length");
    return gram_factor(xf).solve(xf.adjoint() * y);
}

CMatrix ls_weight_matrix(const CVector& symbols, const ofdm::DftMatrix& dft) {
    const CMatrix xf = symbol_dft(symbols, dft);
    return xf * gram_factor(xf).solve(xf.adjoint());
}

WeightSolution solve_optimal(const EstimatorStatistics& stats, const ofdm::DftMatrix& dft,
                             CovarianceBundle* bundle_out) {
    CovarianceBundle bundle = assemble_BC(assemble_A_fast(stats), stats.noise_power, stats.soi_power);
    WeightSolution sol = optimal_V(bundle);
    sol.W = extract_W(sol.V, stats.symbols, dft);
    if (bundle_out != nullptr) *bundle_out = std::move(bundle);
    return sol;
}

}  // namespace fdsic::estimator
