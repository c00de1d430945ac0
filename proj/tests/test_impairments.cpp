#include <doctest.h>

#include <cmath>

#include "fdsic/cancellation.hpp"
#include "fdsic/impairments.hpp"
#include "fdsic/validation.hpp"
#include "test_helpers.hpp"

using namespace fdsic;
using namespace fdsic::impairments;
using fdsic::test::max_abs_diff;

namespace {

PhaseNoiseSpec spec_for(double delta_f, std::size_t n, PhaseNoiseScale scale = PhaseNoiseScale::PerSymbol) {
    return {delta_f, n, scale};
}

}  // namespace

TEST_CASE("wiener: zero bandwidth is a constant trace") {
    Rng rng(1);
    const auto trace = gen_wiener_phase(100, spec_for(0.0, 128), 0.7, rng);
    CHECK(trace.increment_variance == 0.0);
    for (double p : trace.phases) CHECK(p == 0.7);
}

TEST_CASE("wiener: increment variance conventions") {
    // 4 pi df per sample when applied literally to every sample.
    CHECK(spec_for(1e-3, 128, PhaseNoiseScale::PerSample).increment_variance() ==
          doctest::Approx(4.0 * kPi * 1e-3));
    CHECK(spec_for(1e-3, 128, PhaseNoiseScale::PerSample).increment_variance() == doctest::Approx(0.012566).epsilon(1e-4));
    // Default: 4 pi df accrues over one OFDM symbol of N_c samples.
    CHECK(spec_for(1e-3, 128).increment_variance() == doctest::Approx(4.0 * kPi * 1e-3 / 128.0));
    Rng rng(1);
    CHECK_THROWS_AS(gen_wiener_phase(8, spec_for(-1e-3, 8), 0.0, rng), Error);
    CHECK_THROWS_AS(gen_wiener_phase(0, spec_for(1e-3, 8), 0.0, rng), Error);
}

TEST_CASE("wiener: phase variance grows linearly with lag") {
    Rng rng(2024);
    for (auto scale : {PhaseNoiseScale::PerSymbol, PhaseNoiseScale::PerSample}) {
        const auto spec = spec_for(1e-3, 128, scale);
        const int draws = 10000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < draws; ++i) {
            const auto t = gen_wiener_phase(128, spec, 0.0, rng);
            const double d = t.phases[64] - t.phases[0];
            sum += d;
            sum2 += d * d;
        }
        const double mean = sum / draws;
        const double var = sum2 / draws - mean * mean;
        CHECK(var == doctest::Approx(64.0 * spec.increment_variance()).epsilon(0.05));
    }
}

TEST_CASE("ici coefficients: constant phase and Parseval") {
    const auto zero = compute_ici_coefficients(RVector::Zero(16));
    CHECK(std::abs(zero.delta[0] - cdouble(1.0)) < 1e-14);
    CHECK(zero.delta.tail(15).cwiseAbs().maxCoeff() < 1e-14);

    const auto rotated = compute_ici_coefficients(RVector::Constant(16, 0.4));
    CHECK(std::abs(rotated.delta[0] - std::polar(1.0, 0.4)) < 1e-14);
    CHECK(rotated.delta.tail(15).cwiseAbs().maxCoeff() < 1e-14);

    Rng rng(3);
    RVector phi(64);
    for (auto& p : phi) p = 3.0 * rng.normal();
    CHECK(compute_ici_coefficients(phi).delta.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(compute_ici_coefficients(RVector()), Error);
}

TEST_CASE("phase-noise covariance: zero bandwidth is a unit spike") {
    const auto table = pn_covariance_table(spec_for(0.0, 16), OscillatorMode::PerAntenna);
    CHECK(std::abs(table.gamma(0, 0) - cdouble(1.0)) < 1e-12);
    CMatrix rest = table.gamma;
    rest(0, 0) = 0.0;
    CHECK(rest.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phase-noise covariance: Hermitian with unit trace") {
    for (double df : {0.0, 1e-5, 1e-3, 1e-2}) {
        const auto table = pn_covariance_table(spec_for(df, 32), OscillatorMode::PerAntenna);
        CHECK(max_abs_diff(table.gamma, table.gamma.adjoint()) < 1e-14);
        CHECK(std::abs(table.gamma.trace() - cdouble(1.0)) < 1e-10);
        CHECK(table.combined_increment_variance == doctest::Approx(2.0 * 4.0 * kPi * df / 32.0));
    }
    CHECK_THROWS_AS(pn_covariance_table(spec_for(-1.0, 8), OscillatorMode::Shared), Error);
}

TEST_CASE("phase-noise covariance: closed form equals the literal double sum") {
    const std::size_t n = 12;
    const auto table = pn_covariance_table(spec_for(5e-2, n), OscillatorMode::PerAntenna);
    const double sc = table.combined_increment_variance;
    for (long a = 0; a < static_cast<long>(n); ++a) {
        for (long b = 0; b < static_cast<long>(n); ++b) {
            cdouble g{0.0, 0.0};
            for (long n1 = 0; n1 < static_cast<long>(n); ++n1)
                for (long n2 = 0; n2 < static_cast<long>(n); ++n2)
                    g += std::exp(-0.5 * sc * std::abs(n1 - n2)) * test::dft_kernel(a, n1, n) *
                         std::conj(test::dft_kernel(b, n2, n));
            g /= static_cast<double>(n * n);
            CHECK(std::abs(table.gamma(a, b) - g) < 1e-12);
        }
    }
}

TEST_CASE("phase-noise covariance: Monte Carlo oracle at N_c = 32") {
    for (double df : {1e-3, 1e-1}) {
        const auto r = validation::check_gamma(32, df, 100000, 77);
        INFO(r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("si channel: shapes, zero taps and moments") {
    Rng rng(4);
    RVector pdp(2);
    pdp << 1.0, 0.0;
    const auto two = gen_si_channel(3, 2, pdp, rng);
    CHECK(two.taps.col(1).cwiseAbs().maxCoeff() == 0.0);

    const RVector expo = exponential_pdp(16, 2.5);
    CHECK(expo.sum() == doctest::Approx(2.5));
    CHECK(expo[1] / expo[0] == doctest::Approx(std::exp(-0.25)));
    const auto big = gen_si_channel(64, 16, expo, rng);
    CHECK(big.taps.rows() == 64);
    CHECK(big.taps.cols() == 16);

    RVector acc = RVector::Zero(16);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) acc += gen_si_channel(1, 16, expo, rng).taps.row(0).cwiseAbs2().transpose();
    for (int l = 0; l < 16; ++l) CHECK(acc[l] / draws == doctest::Approx(expo[l]).epsilon(0.05));

    RVector bad(2);
    bad << 1.0, -0.1;
    CHECK_THROWS_AS(gen_si_channel(1, 2, bad, rng), Error);
    CHECK_THROWS_AS(gen_si_channel(1, 3, pdp, rng), Error);
}

TEST_CASE("cscg: zero power, variance and circular symmetry") {
    Rng rng(5);
    CHECK(gen_awgn(16, 0.0, rng).cwiseAbs().maxCoeff() == 0.0);
    const CVector v = gen_soi(100000, 2.0, rng);
    CHECK(v.cwiseAbs2().mean() == doctest::Approx(2.0).epsilon(0.03));
    CHECK(v.real().squaredNorm() / 1e5 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(v.imag().squaredNorm() / 1e5 == doctest::Approx(1.0).epsilon(0.03));
    CHECK_THROWS_AS(gen_cscg(4, -1.0, rng), Error);
}

TEST_CASE("synthesis: no impairments reduces to X F sum_s h_s") {
    Rng rng(6);
    const std::size_t n = 32, l = 4, ns = 5;
    const auto dft = ofdm::build_dft_matrix(n, l);
    const CVector x = ofdm::gen_bpsk_symbols(n, 1.0, rng);
    const auto ch = gen_si_channel(ns, l, exponential_pdp(l, 1.0), rng);
    const auto traces = gen_phase_traces(ns, OscillatorMode::PerAntenna, n + 8, spec_for(0.0, n), rng);
    const auto rx = synthesize_received(x, ch, traces, 0.0, 0.0, dft, rng);
    // Zero bandwidth still leaves a common rotation from the initial phases.
    CVector expected = CVector::Zero(n);
    for (std::size_t s = 0; s < ns; ++s) {
        const double cpe = traces.tx[s].initial_phase + traces.rx.initial_phase;
        expected += std::polar(1.0, cpe) * x.cwiseProduct(dft.entries * ch.taps.row(static_cast<Eigen::Index>(s)).transpose());
    }
    CHECK(max_abs_diff(rx.y, expected) < 1e-12);
    CHECK(max_abs_diff(rx.y, rx.y_si) == 0.0);

    PhaseTraces flat = traces;
    for (auto& t : flat.tx) t.phases.setZero();
    flat.rx.phases.setZero();
    const CVector h_sum = ch.taps.colwise().sum().transpose();
    CHECK(max_abs_diff(synthesize_si(x, ch, flat, dft), CVector(x.cwiseProduct(dft.entries * h_sum))) < 1e-12);
}

TEST_CASE("synthesis: decomposition and dimension checks") {
    Rng rng(7);
    const std::size_t n = 16, l = 3;
    const auto dft = ofdm::build_dft_matrix(n, l);
    const CVector x = ofdm::gen_bpsk_symbols(n, 1.0, rng);
    const auto ch = gen_si_channel(2, l, exponential_pdp(l, 1.0), rng);
    const auto traces = gen_phase_traces(2, OscillatorMode::PerAntenna, n, spec_for(1e-2, n), rng);
    const auto rx = synthesize_received(x, ch, traces, 3.0, 0.5, dft, rng);
    CHECK(max_abs_diff(rx.y, CVector(rx.y_si + rx.y_soi + rx.noise)) < 1e-15);

    const auto wrong = ofdm::build_dft_matrix(n, l + 1);
    CHECK_THROWS_AS(synthesize_si(x, ch, traces, wrong), Error);
    PhaseTraces three = traces;
    three.tx.push_back(traces.tx.front());
    CHECK_THROWS_AS(synthesize_si(x, ch, three, dft), Error);
}

TEST_CASE("synthesis: mean SI energy equals E_I") {
    Rng rng(8);
    const std::size_t n = 32, l = 4, ns = 4;
    const auto dft = ofdm::build_dft_matrix(n, l);
    const RVector pdp = exponential_pdp(l, 0.7);
    const auto spec = spec_for(1e-2, n);
    double acc = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const CVector x = ofdm::gen_bpsk_symbols(n, 1.0, rng);
        const auto ch = gen_si_channel(ns, l, pdp, rng);
        const auto traces = gen_phase_traces(ns, OscillatorMode::PerAntenna, n + 8, spec, rng);
        acc += synthesize_si(x, ch, traces, dft).squaredNorm();
    }
    CHECK(acc / draws == doctest::Approx(cancellation::si_power(1.0, pdp, ns, n)).epsilon(0.03));
}

TEST_CASE("synthesis: equals the time-domain path") {
    const auto r = validation::check_model_equivalence(32, 4, 100, 99);
    INFO(r.detail);
    CHECK(r.error < 1e-8);
}

TEST_CASE("synthesis: physical ordering differs only through phase drift over the channel memory") {
    Rng rng(10);
    const std::size_t n = 32, l = 4, cp = 8;
    const auto dft = ofdm::build_dft_matrix(n, l);
    const CVector x = ofdm::gen_bpsk_symbols(n, 1.0, rng);
    const auto ch = gen_si_channel(2, l, exponential_pdp(l, 1.0), rng);

    const auto still = gen_phase_traces(2, OscillatorMode::PerAntenna, n + cp, spec_for(0.0, n), rng);
    const CVector ref = synthesize_si(x, ch, still, dft);
    CHECK((validation::time_domain_si_physical(x, ch, still, cp) - ref).norm() / ref.norm() < 1e-12);

    const auto noisy = gen_phase_traces(2, OscillatorMode::PerAntenna, n + cp, spec_for(1e-3, n), rng);
    const CVector model = synthesize_si(x, ch, noisy, dft);
    const double gap = (validation::time_domain_si_physical(x, ch, noisy, cp) - model).norm() / model.norm();
    CHECK(gap < 0.05);
}

TEST_CASE("oscillator modes: shared links share delta, per-antenna links do not") {
    Rng rng(11);
    const std::size_t n = 16, ns = 4;
    const auto spec = spec_for(1e-2, n);
    const auto shared = link_ici(gen_phase_traces(ns, OscillatorMode::Shared, n, spec, rng), ns, n);
    const auto separate = link_ici(gen_phase_traces(ns, OscillatorMode::PerAntenna, n, spec, rng), ns, n);
    REQUIRE(shared.size() == ns);
    REQUIRE(separate.size() == ns);
    for (std::size_t s = 1; s < ns; ++s) {
        CHECK(max_abs_diff(shared[s].delta, shared[0].delta) == 0.0);
        CHECK(max_abs_diff(separate[s].delta, separate[0].delta) > 1e-6);
    }
}
