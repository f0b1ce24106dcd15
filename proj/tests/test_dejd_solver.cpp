#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "capalarm/dejd_solver.hpp"
#include "capalarm/errors.hpp"

#include <cmath>

using namespace capalarm;

namespace {
const DejdParams kFig2{-1.0, 1.0, 1.0, 0.5, 1.0, 2.0};
constexpr double kQ = 0.05;
constexpr double kGamma = 0.04;
} // namespace

TEST_CASE("weights and stopping-value coefficients") {
    const DejdSolution s(kFig2, kQ, kGamma);
    const double xi1 = s.roots().xi1, xi2 = s.roots().xi2;
    CHECK(s.l1() + s.l2() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.l1() > 0.0);
    CHECK(s.l2() > 0.0);
    // G(0+) = 0 and the slope identity
    CHECK(s.C1() + s.C2() == doctest::Approx(kGamma / kQ).epsilon(1e-12));
    CHECK(s.C1() * xi1 + s.C2() * xi2 == doctest::Approx(kGamma / kQ * xi1 * xi2 / kFig2.eta_minus).epsilon(1e-12));
    CHECK(std::abs(s.stopping_value(1e-12)) < 1e-10);
    CHECK(s.stopping_value(0.0) == 1.0);
}

TEST_CASE("frozen fig2 values") {
    const DejdSolution s(kFig2, kQ, kGamma);
    CHECK(s.A_star() == doctest::Approx(2.0603037288393929787).epsilon(1e-9));
    CHECK(s.smooth_fit_condition());
    CHECK(s.value(3.0) == doctest::Approx(0.082213097036474209004).epsilon(1e-9));
    CHECK(s.stopping_value(1.0) == doctest::Approx(0.035937347376458513766).epsilon(1e-9));
    CHECK(s.stopping_value(1.0) == doctest::Approx(kGamma * s.passage().discounted_clock(1.0, 0.0)).epsilon(1e-14));
    CHECK(s.violation_risk(1.5, 0.5) == doctest::Approx(0.10599477558270804819).epsilon(1e-9));
    CHECK(s.passage().discounted_clock(1.5, 0.5) == doctest::Approx(0.89843368441146284415).epsilon(1e-9));
    CHECK(optimal_threshold(kFig2, kQ, kGamma) == s.A_star());
}

TEST_CASE("smooth fit at A*") {
    const DejdSolution s(kFig2, kQ, kGamma);
    const double a = s.A_star();
    CHECK(std::abs(s.delta_slope_at_threshold(a)) < 1e-10);
    CHECK(s.value(a + 1e-9) == doctest::Approx(s.stopping_value(a)).epsilon(1e-8));
    const double h = 1e-5;
    const double right = (s.value(a + 2 * h) - s.value(a + h)) / h;
    const double left = (s.stopping_value(a - h) - s.stopping_value(a - 2 * h)) / h;
    CHECK(std::abs(right - left) < 1e-4);
    for (double x : {2.1, 2.5, 3.0, 5.0, 8.0}) {
        CHECK(s.delta_at_optimum(x) == doctest::Approx(s.value(x) - s.stopping_value(x)).epsilon(1e-9));
        CHECK(s.threshold_value(x, a) == doctest::Approx(s.value(x)).epsilon(1e-10));
    }
}

TEST_CASE("second derivative of delta at A*+") {
    const DejdSolution s(kFig2, kQ, kGamma);
    const double a = s.A_star(), h = 1e-4;
    auto d = [&](double x) { return s.value(x) - s.stopping_value(x); };
    const double second = (d(a + 3 * h) - 2 * d(a + 2 * h) + d(a + h)) / (h * h);
    const double expected = -kGamma / kQ * s.roots().xi1 * s.roots().xi2;
    CHECK(std::abs(second - expected) / std::abs(expected) <= 1e-3);
}

TEST_CASE("sign pattern around A*") {
    const DejdSolution s(kFig2, kQ, kGamma);
    const double a = s.A_star();
    // slope of delta_A at A+ is positive below A* and negative above
    for (double A : {0.5, 1.0, 1.5, 2.0}) CHECK(s.delta_slope_at_threshold(A) > 0.0);
    for (double A : {2.1, 2.5, 3.0, 4.0}) CHECK(s.delta_slope_at_threshold(A) < 0.0);
    // phi_A(x) at fixed x decreases in A up to A*, then increases
    const double x = 6.0, h = 1e-4;
    auto dphi = [&](double A) { return (s.threshold_value(x, A + h) - s.threshold_value(x, A - h)) / (2 * h); };
    for (double A : {0.5, 1.0, 1.5, 2.0}) CHECK(dphi(A) < 0.0);
    for (double A : {2.1, 2.5, 3.0, 4.0}) CHECK(dphi(A) > 0.0);
    for (double A : {0.5, 1.0, 3.0, 5.0}) CHECK(s.threshold_value(x, A) >= s.value(x));
    CHECK(a > 0.0);
}

TEST_CASE("value is dominated by G and lies in [0, 1]") {
    const DejdSolution s(kFig2, kQ, kGamma);
    for (double x = -1.0; x <= 20.0; x += 0.05) {
        const double v = s.value(x), g = s.stopping_value(x);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= g + 1e-14);
    }
}

TEST_CASE("comparative statics and q -> 0") {
    const double a = optimal_threshold(kFig2, kQ, kGamma);
    CHECK(optimal_threshold(kFig2, kQ, 2 * kGamma) < a);
    const DejdSolution zero(kFig2, 0.0, kGamma);
    CHECK(zero.regime() == DejdRegime::ZeroQ);
    CHECK(zero.A_star() == doctest::Approx(2.0483116281646447846).epsilon(1e-9));
    CHECK(optimal_threshold(kFig2, 1e-7, kGamma) == doctest::Approx(zero.A_star()).epsilon(1e-5));
    // value at q = 0 is continuous at A* and dominated by G
    CHECK(zero.value(zero.A_star() + 1e-9) == doctest::Approx(zero.stopping_value(zero.A_star())).epsilon(1e-7));
    for (double x = 0.1; x < 10.0; x += 0.1) CHECK(zero.value(x) <= zero.stopping_value(x) + 1e-12);
}

TEST_CASE("degenerate inputs") {
    DejdParams up = kFig2;
    up.mu = 1.0;
    CHECK_THROWS_AS(DejdSolution(up, 0.0, kGamma), InfiniteRegretError);
    CHECK_THROWS_AS(DejdSolution(kFig2, kQ, 0.0), DomainError);

    const DejdSolution big(kFig2, kQ, 10.0);
    CHECK(big.A_star() == 0.0);
    CHECK_FALSE(big.smooth_fit_condition());
    CHECK_FALSE(big.diagnostics().empty());
    CHECK(big.value(1.0) == doctest::Approx(big.passage().overshoot_risk(1.0)));
    CHECK(big.violation_risk(1.0, 0.0) == big.passage().overshoot_risk(1.0));
    CHECK(big.violation_risk(1.0, 2.0) == 0.0);

    DejdParams no_down = kFig2;
    no_down.p = 0.0;
    const DejdSolution p0(no_down, kQ, kGamma);
    CHECK_FALSE(p0.diagnostics().empty());
}

TEST_CASE("regret of a threshold rule") {
    const DejdSolution s(kFig2, kQ, kGamma);
    const double x = 3.0, A = 1.0;
    CHECK(s.regret(x, A) ==
          doctest::Approx(s.passage().discounted_clock(x, 0.0) - s.passage().discounted_clock(x, A)).epsilon(1e-14));
    CHECK(s.threshold_value(x, A) ==
          doctest::Approx(s.violation_risk(x, A) + kGamma * s.regret(x, A)).epsilon(1e-10));
    CHECK(s.regret(x, 5.0) == s.passage().discounted_clock(x, 0.0));
}

TEST_CASE("boundary limits of the passage functionals") {
    const DejdSolution s(kFig2, kQ, kGamma);
    const auto& p = s.passage();
    CHECK(std::abs(p.violation_risk(0.5 + 1e-10, 0.5)) < 1e-9);
    // far tail decays at the slow root
    const double xi1 = find_xi(kFig2, kQ).xi1;
    CHECK(p.violation_risk(61.0, 0.5) / p.violation_risk(60.0, 0.5) == doctest::Approx(std::exp(-xi1)).epsilon(1e-6));
    CHECK(p.violation_risk(2000.0, 0.5) < 1e-15);
    CHECK(std::abs(p.discounted_clock(0.5 + 1e-10, 0.5)) < 1e-9);
    CHECK(p.discounted_clock(2000.0, 0.5) == doctest::Approx(1.0 / kQ).epsilon(1e-9));
    CHECK(s.stopping_value(2000.0) == doctest::Approx(kGamma / kQ).epsilon(1e-9));
    CHECK(s.value(-1.0) == 1.0);
    CHECK(s.value(0.5 * s.A_star()) == s.stopping_value(0.5 * s.A_star()));
    for (double A : {0.5, 1.0, 3.0}) CHECK(std::abs(s.delta(A + 1e-9, A)) < 1e-8);
}

TEST_CASE("boundary equality of the existence condition gives A* = 0") {
    const auto r = find_xi(kFig2, kQ);
    const double eta = kFig2.eta_minus;
    const double gamma_edge = kQ * (eta - r.xi1) * (r.xi2 - eta) / (r.xi1 * r.xi2);
    CHECK(optimal_threshold(kFig2, kQ, gamma_edge * (1 + 1e-12)) == 0.0);
    CHECK(optimal_threshold(kFig2, kQ, gamma_edge * (1 - 1e-6)) > 0.0);
    CHECK(optimal_threshold(kFig2, kQ, gamma_edge * (1 - 1e-6)) < 1e-5);
}

TEST_CASE("A*(q) approaches A*(0)") {
    const double a0 = optimal_threshold(kFig2, 0.0, kGamma);
    double prev_gap = INFINITY;
    for (double q : {1e-2, 1e-3, 1e-4}) {
        const double gap = std::abs(optimal_threshold(kFig2, q, kGamma) - a0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4);
}
