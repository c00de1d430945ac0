#include <doctest.h>

#include <cmath>
#include <limits>

#include "fdsic/cancellation.hpp"
#include "fdsic/estimator.hpp"
#include "fdsic/validation.hpp"
#include "test_helpers.hpp"

using namespace fdsic;
using namespace fdsic::cancellation;
using fdsic::test::max_abs_diff;
using impairments::OscillatorMode;
using impairments::PhaseNoiseScale;

TEST_CASE("reconstruct_si: zero, exact LS chain and linearity") {
    Rng rng(1);
    const std::size_t n = 16, l = 4;
    const auto dft = ofdm::build_dft_matrix(n, l);
    const CVector x = ofdm::gen_bpsk_symbols(n, 1.0, rng);
    CHECK(reconstruct_si(x, dft, CVector::Zero(4)).cwiseAbs().maxCoeff() == 0.0);

    const auto ch = impairments::gen_si_channel(3, l, impairments::exponential_pdp(l, 1.0), rng);
    impairments::PhaseTraces still;
    for (int s = 0; s < 3; ++s) still.tx.push_back({RVector::Zero(16), 0.0, 0.0});
    still.rx = {RVector::Zero(16), 0.0, 0.0};
    const auto rx = impairments::synthesize_received(x, ch, still, 0.0, 0.0, dft, rng);
    const CVector y_hat = reconstruct_si(x, dft, estimator::ls_estimator(rx.y, x, dft));
    CHECK(max_abs_diff(y_hat, rx.y) < 1e-12);

    const CVector h1 = test::random_cvector(4, rng), h2 = test::random_cvector(4, rng);
    CHECK(max_abs_diff(reconstruct_si(x, dft, h1 + 2.0 * h2),
                       CVector(reconstruct_si(x, dft, h1) + 2.0 * reconstruct_si(x, dft, h2))) < 1e-12);
    CHECK_THROWS_AS(reconstruct_si(x, dft, CVector::Zero(3)), Error);
}

TEST_CASE("cancel: trivial reconstructions") {
    Rng rng(2);
    const CVector y = test::random_cvector(8, rng);
    CHECK(cancel(y, y).cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs_diff(cancel(y, CVector::Zero(8)), y) == 0.0);
    CHECK_THROWS_AS(cancel(y, CVector::Zero(7)), Error);
}

TEST_CASE("cancel: residual matches (I - V)(y^I + n) - V y^U") {
    Rng rng(3);
    const std::size_t n = 16, l = 4;
    const auto dft = ofdm::build_dft_matrix(n, l);
    const impairments::PhaseNoiseSpec spec{1e-2, n, PhaseNoiseScale::PerSymbol};
    const CVector x = ofdm::gen_bpsk_symbols(n, 1.0, rng);
    const RVector pdp = impairments::exponential_pdp(l, 50.0);
    const auto ch = impairments::gen_si_channel(4, l, pdp, rng);
    const auto traces = impairments::gen_phase_traces(4, OscillatorMode::PerAntenna, n + 4, spec, rng);
    const auto rx = impairments::synthesize_received(x, ch, traces, 2.0, 1.0, dft, rng);

    estimator::EstimatorStatistics stats{x, impairments::pn_covariance_table(spec, OscillatorMode::PerAntenna), pdp, 4,
                                         1.0, 2.0};
    const auto sol = estimator::solve_optimal(stats, dft);
    const CVector h = estimator::estimate_h_delta(sol.W, rx.y);
    const CVector r = cancel(rx.y, reconstruct_si(x, dft, h)) - rx.y_soi;

    const CMatrix v = x.asDiagonal() * dft.entries * sol.W;
    const auto eye = CMatrix::Identity(16, 16);
    const CVector expected = (eye - v) * (rx.y_si + rx.noise) - v * rx.y_soi;
    CHECK(max_abs_diff(r, expected) < 1e-8);
}

TEST_CASE("residual power: zero weights and the closed-form minimum") {
    Rng rng(4);
    const CMatrix a = validation::random_hpd(8, 0.0, rng) * 10.0;
    CHECK(residual_power_theoretical(a, CMatrix::Zero(8, 8), 0.4, 3.0) ==
          doctest::Approx(8 * 0.4 + a.trace().real()));

    const auto bundle = estimator::assemble_BC(a, 0.4, 3.0);
    const auto sol = estimator::optimal_V(bundle);
    const double closed = 8 * 0.4 + a.trace().real() + sol.f_star.sum();
    CHECK(residual_power_theoretical(a, sol.V, 0.4, 3.0) == doctest::Approx(closed).epsilon(1e-6));
}

TEST_CASE("residual power: Monte Carlo over symbols matches the closed form for V* and V_LS") {
    for (std::size_t n : {16u, 32u}) {
        Rng rng(5 + n);
        const std::size_t l = 4, ns = 4;
        const double noise = 1.0, soi = 10.0;
        const auto dft = ofdm::build_dft_matrix(n, l);
        const impairments::PhaseNoiseSpec spec{1e-2, n, PhaseNoiseScale::PerSymbol};
        const RVector pdp = impairments::exponential_pdp(l, 1e3 * static_cast<double>(n) / (n * ns));
        const CVector x = ofdm::gen_bpsk_symbols(n, 1.0, rng);
        estimator::EstimatorStatistics stats{x, impairments::pn_covariance_table(spec, OscillatorMode::PerAntenna), pdp,
                                             ns, noise, soi};
        estimator::CovarianceBundle bundle;
        const auto sol = estimator::solve_optimal(stats, dft, &bundle);
        const CMatrix v_ls = estimator::ls_weight_matrix(x, dft);

        double acc_opt = 0.0, acc_ls = 0.0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            const auto ch = impairments::gen_si_channel(ns, l, pdp, rng);
            const auto traces = impairments::gen_phase_traces(ns, OscillatorMode::PerAntenna, n, spec, rng);
            const auto rx = impairments::synthesize_received(x, ch, traces, soi, noise, dft, rng);
            acc_opt += (cancel(rx.y, sol.V * rx.y) - rx.y_soi).squaredNorm();
            acc_ls += (cancel(rx.y, v_ls * rx.y) - rx.y_soi).squaredNorm();
        }
        const double theo_opt = residual_power_theoretical(bundle.A, sol.V, noise, soi);
        const double theo_ls = residual_power_theoretical(bundle.A, v_ls, noise, soi);
        CHECK(acc_opt / draws == doctest::Approx(theo_opt).epsilon(0.03));
        CHECK(acc_ls / draws == doctest::Approx(theo_ls).epsilon(0.03));

        const double ei = si_power(1.0, pdp, ns, n);
        const double floor = n * noise;
        CHECK(std::abs(cancellation_ability(ei, floor, acc_opt / draws).db -
                       cancellation_ability(ei, floor, theo_opt).db) < 0.5);
        CHECK(theo_opt <= theo_ls);
    }
}

TEST_CASE("si power: arithmetic") {
    CHECK(si_power(1.0, RVector::Zero(4), 64, 128) == 0.0);
    RVector pdp = RVector::Constant(16, 1e-2 / 16.0);
    CHECK(si_power(1.0, pdp, 64, 128) == doctest::Approx(81.92));
    Rng rng(6);
    const CVector x = ofdm::gen_bpsk_symbols(128, 1.0, rng);
    CHECK(si_power(x, pdp, 64) == doctest::Approx(81.92));
}

TEST_CASE("ability and G_max: arithmetic and guards") {
    CHECK(cancellation_ability(99.0, 1.0, 100.0).db == doctest::Approx(0.0));
    CHECK(cancellation_ability(99.0, 1.0, 1.0).db == doctest::Approx(20.0));
    const auto guarded = cancellation_ability(10.0, 1.0, 0.0);
    CHECK(guarded.unbounded);
    CHECK(guarded.db == std::numeric_limits<double>::infinity());

    CHECK(g_max_theoretical(90.0, 10.0, 0.0).db == doctest::Approx(0.0));
    CHECK(g_max_theoretical(90.0, 10.0, -90.0).db == doctest::Approx(10.0));
    CHECK(g_max_theoretical(90.0, 10.0, -100.0).unbounded);

    const auto report = make_report(1.0, 1.1, 99.0, 1.0);
    CHECK(report.ability_db == doctest::Approx(20.0));
    CHECK_FALSE(report.ability_unbounded);
}

TEST_CASE("optimal weights beat zero, identity and LS weights") {
    const auto r = validation::check_optimality({4, 8, 16}, 30, 7);
    INFO(r.detail);
    CHECK(r.passed);
}
