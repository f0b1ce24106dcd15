#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "capalarm/dejd_solver.hpp"
#include "capalarm/errors.hpp"
#include "capalarm/snlp_solver.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace capalarm;

namespace {

const ExpJumpCPP kFig4a{0.3, 0.0, 0.5, 1.0};
const ExpJumpCPP kFig4b{0.175, 0.5, 0.5, 1.0};
const TemperedStable kTs15{0.05, 0.05, 2.0, 1.5};
const TemperedStable kTs08{0.05, 0.075, 2.0, 0.8};
const VarianceGamma kVg{0.05, 0.075, 2.0};
const CostSpec kFlat{0.05, 0.04, Constant1{}};

CostSpec exp_cost(double rho) { return {0.05, 0.04, ExpUtility{rho}}; }

} // namespace

TEST_CASE("fig4a closed form") {
    const SnlpSolution s(kFig4a, kFlat);
    CHECK(s.big_phi(1e-12) == doctest::Approx(0.21).epsilon(1e-10));
    for (double A : {0.5, 1.0, 2.0, 3.0}) CHECK(s.big_phi(A) == doctest::Approx(0.25 * std::exp(-A) - 0.04).epsilon(1e-10));
    CHECK(std::abs(s.A_star() - std::log(6.25)) <= 1e-9);
    CHECK(s.variation() == Variation::Bounded);
    CHECK(SnlpSolution(kFig4b, kFlat).variation() == Variation::Unbounded);
    CHECK(std::abs(SnlpSolution(kFig4b, kFlat).A_star() - std::log(6.25)) <= 1e-9);
}

TEST_CASE("Phi is decreasing") {
    for (const SpectralNegModel m : {SpectralNegModel{kFig4b}, SpectralNegModel{kTs15}, SpectralNegModel{kVg}}) {
        const ScaleContext ctx(m, 0.05);
        double prev = big_phi(ctx, exp_cost(1.0), 1e-6);
        for (double A = 0.02; A < 3.0; A += 0.02) {
            const double v = big_phi(ctx, exp_cost(1.0), A);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("tempered stable and variance gamma thresholds") {
    struct Case {
        SpectralNegModel model;
        double rho;
        double a_star;
    };
    const double inf = INFINITY;
    const Case cases[] = {
        {kTs15, 1.0, 0.1333775748433631644}, {kTs15, 2.0, 0.11347530958357561124}, {kTs15, inf, 0.094316686979712563727},
        {kTs08, 1.0, 0.12219797917971084443}, {kTs08, 2.0, 0.092459175085733117096}, {kTs08, inf, 0.062416562481820382398},
        {kVg, 1.0, 0.029078465868915398124}, {kVg, 2.0, 0.0}, {kVg, inf, 0.0},
    };
    for (const auto& c : cases) {
        CAPTURE(model_name(c.model));
        CAPTURE(c.rho);
        const double a = SnlpSolution(c.model, exp_cost(c.rho)).A_star();
        CHECK(a == doctest::Approx(c.a_star).epsilon(1e-7));
    }
    const SnlpSolution ts_flat(kTs15, kFlat);
    CHECK(ts_flat.A_star() == doctest::Approx(0.094316686979712563727).epsilon(1e-7));
    CHECK(SnlpSolution(kTs15, exp_cost(1e6)).A_star() == doctest::Approx(ts_flat.A_star()).epsilon(1e-5));
    CHECK(SnlpSolution(kTs15, CostSpec{0.05, 0.08, ExpUtility{1.0}}).A_star() < 0.1333775748433631644);
}

TEST_CASE("agreement with the dejd solver when p = 1") {
    const DejdParams d{0.175, 0.5, 0.5, 1.0, 1.0, 1.0};
    const DejdSolution ds(d, 0.05, 0.04);
    const SnlpSolution ss(kFig4b, kFlat);
    CHECK(std::abs(ds.A_star() - ss.A_star()) <= 1e-9);
    for (int k = 1; k <= 40; ++k) {
        const double x = 0.1 * k;
        CHECK(std::abs(ds.value(x) - ss.value(x)) <= 1e-8);
        CHECK(std::abs(ds.stopping_value(x) - ss.stopping_value(x)) <= 1e-8);
    }
    for (double A : {0.3, 1.0, 2.0}) {
        for (double x : {A + 0.1, A + 1.0, A + 3.0}) {
            CHECK(std::abs(ds.violation_risk(x, A) - ss.violation_risk(x, A)) <= 1e-8);
            CHECK(std::abs(ds.regret(x, A) - ss.regret(x, A)) <= 1e-6);
            CHECK(std::abs(ds.passage().discounted_clock(x, A) -
                           regret_integral(ss.context(), kFlat, x, A)) <= 1e-6);
        }
    }
}

TEST_CASE("resolvent integrates to the regret integral") {
    for (const SpectralNegModel m : {SpectralNegModel{kFig4a}, SpectralNegModel{kFig4b}, SpectralNegModel{kTs15}}) {
        CAPTURE(model_name(m));
        const ScaleContext ctx(m, 0.05);
        const CostSpec cost = exp_cost(1.0);
        const double x = 1.2, A = 0.4;
        CHECK(resolvent_density(ctx, x, A, 0.3) == 0.0);
        for (double y = A; y < 5.0; y += 0.25) CHECK(resolvent_density(ctx, x, A, y) >= 0.0);
        auto f = [&](double y) { return resolvent_density(ctx, x, A, y) * penalty_value(cost.h, y); };
        const double integral = oracle::gauss_legendre(f, A, x, 40) + oracle::gauss_legendre(f, x, 60.0, 400);
        CHECK(integral == doctest::Approx(regret_integral(ctx, cost, x, A)).epsilon(1e-5));
    }
}

TEST_CASE("violation risk") {
    const SnlpSolution s(kTs08, exp_cost(1.0));
    CHECK(s.violation_risk(50.0, s.A_star()) <= 1e-6);
    CHECK(s.violation_risk(0.05, 0.1) == 0.0);
    const double near = s.violation_risk(0.5, 0.1), far = s.violation_risk(2.0, 0.1);
    CHECK(near > far);
    CHECK(far > 0.0);
}

TEST_CASE("fit diagnostics") {
    const auto a = SnlpSolution(kFig4a, kFlat).fit_diagnostics();
    CHECK(a.available);
    CHECK(a.continuity_gap <= 1e-6);
    CHECK(std::abs(a.w0_times_phi) <= 1e-9);
    const auto b = SnlpSolution(kFig4b, kFlat).fit_diagnostics();
    CHECK(b.available);
    CHECK(b.variation == Variation::Unbounded);
    CHECK(b.derivative_gap <= 1e-4);
    CHECK(b.continuity_gap <= 1e-6);
}

TEST_CASE("value function") {
    for (const SpectralNegModel m : {SpectralNegModel{kFig4a}, SpectralNegModel{kTs15}, SpectralNegModel{kTs08}}) {
        CAPTURE(model_name(m));
        const SnlpSolution s(m, exp_cost(1.0));
        CHECK(s.value(1e-9) < 1.0);
        CHECK(s.value(-0.1) == 1.0);
        for (double x = 0.04; x < 4.0; x += 0.04) {
            const double v = s.value(x);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v <= s.stopping_value(x) + 1e-9);
        }
        for (double x : {s.A_star() + 0.1, s.A_star() + 0.7, s.A_star() + 2.0})
            CHECK(s.value(x) == doctest::Approx(s.value_simplified(x)).epsilon(1e-8));
        const double x = s.A_star() + 0.5;
        CHECK(s.threshold_value(x, s.A_star()) == doctest::Approx(s.value(x)).epsilon(1e-9));
        CHECK(s.threshold_value(x, 0.5 * s.A_star()) >= s.value(x) - 1e-12);
    }
}

TEST_CASE("custom penalties and degenerate inputs") {
    CostSpec custom{0.05, 0.04, CustomPenalty{[](double) { return 1.0; }, {}}};
    CHECK(SnlpSolution(kFig4a, custom).A_star() == doctest::Approx(std::log(6.25)).epsilon(1e-8));
    CostSpec explode{0.05, 0.04, CustomPenalty{[](double y) { return std::exp(2.0 * y); }, {}}};
    CHECK_THROWS_AS(SnlpSolution(kFig4a, explode), InfiniteRegretError);
    CHECK_THROWS_AS(SnlpSolution(kFig4a, CostSpec{0.0, 0.04, Constant1{}}), DomainError);
    const SnlpSolution big(kFig4a, CostSpec{0.05, 1.0, Constant1{}});
    CHECK(big.A_star() == 0.0);
    CHECK_FALSE(big.diagnostics().empty());
}

TEST_CASE("Phi limits and the threshold against a grid scan") {
    const ScaleContext a(kFig4a, 0.05);
    CHECK(big_phi(a, kFlat, 60.0) == doctest::Approx(-0.04 * penalty_transform(a, Constant1{}, 60.0)).epsilon(1e-12));
    const ScaleContext ts(kTs15, 0.05);
    CHECK(big_phi(ts, kFlat, 1e-6) > 10.0 * big_phi(ts, kFlat, 1e-2));
    const double root = optimal_threshold_sn(ts, exp_cost(1.0));
    const double scan = oracle::grid_argmin_abs([&](double A) { return big_phi(ts, exp_cost(1.0), A); }, 0.05, 0.3, 1e-4);
    CHECK(std::abs(root - scan) <= 1e-4);
    // gamma = lambda zeta / (eta + zeta) is the edge for fig4a
    CHECK(SnlpSolution(kFig4a, CostSpec{0.05, 0.25, Constant1{}}).A_star() == 0.0);
}

TEST_CASE("regret integral vanishes at the threshold for unbounded variation") {
    const ScaleContext ts(kTs15, 0.05);
    // W(e) ~ e^{alpha - 1}, so the integral vanishes like sqrt(e) for alpha = 1.5
    const double r6 = regret_integral(ts, kFlat, 0.5 + 1e-6, 0.5);
    const double r8 = regret_integral(ts, kFlat, 0.5 + 1e-8, 0.5);
    CHECK(r8 < r6);
    CHECK(r8 / r6 == doctest::Approx(0.1).epsilon(0.02));
    CHECK(regret_integral(ts, kFlat, 0.5 + 1e-14, 0.5) < 1e-5);
    const SnlpSolution s(kFig4b, kFlat);
    CHECK(s.value(0.5 * s.A_star()) == doctest::Approx(s.stopping_value(0.5 * s.A_star())).epsilon(1e-12));
}
