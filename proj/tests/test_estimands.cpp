#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "collider/estimands.hpp"

using namespace collider;

namespace {

ScmParams random_params(std::mt19937_64& gen, double nu = 0.0) {
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    ScmParams p;
    p.alpha_a = coef(gen);
    p.alpha_u = coef(gen);
    p.alpha_au = coef(gen);
    p.beta_a = coef(gen);
    p.beta_u = coef(gen);
    p.beta_m = coef(gen);
    p.beta_am = coef(gen);
    p.beta_au = coef(gen);
    p.beta_um = coef(gen);
    p.beta_aum = coef(gen);
    p.nu = nu;
    return p;
}

// A -> M -> Y with no confounder and no direct effect of A.
ScmParams simple_mediation(double alpha_a, double beta_m) {
    ScmParams p;
    p.alpha_a = alpha_a;
    p.beta_m = beta_m;
    return p;
}

ScmParams fig3_params() {
    ScmParams p;
    p.alpha_a = 2.0;
    p.alpha_u = 2.0;
    p.alpha_au = 1.0;
    p.beta_a = 2.0;
    p.beta_u = 3.0;
    p.beta_m = 1.0;
    p.beta_am = -2.0;
    p.beta_au = 1.0;
    p.beta_um = 2.0;
    p.beta_aum = 1.0;
    return p;
}

}  // namespace

TEST_CASE("odds_ratio basics") {
    CHECK(odds_ratio({0.5, 0.5}) == 1.0);
    CHECK(odds_ratio({0.75, 0.25}) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(odds_ratio({0.25, 0.75}) == doctest::Approx(1.0 / 9).epsilon(1e-14));
    CHECK_THROWS_AS(odds_ratio({0.0, 0.5}), UndefinedOddsError);
    CHECK_THROWS_AS(odds_ratio({0.5, 1.0}), UndefinedOddsError);
    CHECK(!odds_ratio_if_defined({1.0, 0.5}).has_value());
    CHECK(odds_ratio_if_defined({0.4, 0.6}).has_value());
}

TEST_CASE("all-zero parameters: every estimand null, every OR one") {
    const auto rep = report(ScmModel::build(ScmParams{}));
    for (const auto* entry :
         {&rep.as, &rep.sp, &rep.ce, &rep.cde, &rep.cde_m1, &rep.cde_a1m1}) {
        CHECK(entry->delta == 0.0);
        REQUIRE(entry->odds_ratio.has_value());
        CHECK(*entry->odds_ratio == 1.0);
    }
    CHECK(rep.total_effect == 0.0);
    CHECK(rep.p_m1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rep.p_y1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rep.source == Source::Exact);
}

TEST_CASE("simple mediation model: association vanishes, total effect does not") {
    for (double alpha_a : {2.0 * std::log(3.0), 2.0, -1.5}) {
        for (double beta_m : {2.0 * std::log(3.0), 1.0, -2.0}) {
            const auto model = ScmModel::build(simple_mediation(alpha_a, beta_m));
            CHECK(delta_as(model) == 0.0);
            CHECK(delta_sp(model) == 0.0);
            CHECK(delta_cde(model) == 0.0);
            CHECK(delta_cde_m1(model) == 0.0);
            CHECK(delta_cde_a1m1(model) == 0.0);
            const double te = total_effect(model);
            const double ce = delta_ce(model);
            CHECK(std::fabs(te) > 1e-3);
            CHECK(std::fabs(ce) > 1e-3);
            CHECK(std::signbit(ce) == std::signbit(te));
        }
    }
}

TEST_CASE("simple mediation worked case: delta_ce = 1/4") {
    const double two_ln3 = 2.0 * std::log(3.0);
    const auto model = ScmModel::build(simple_mediation(two_ln3, two_ln3));
    // p_M(0) = p_Y(m=0) = 1/4, p_M(1) = p_Y(m=1) = 3/4, so the coupling
    // formula collapses to (p_M(1)-p_M(0))(p_Y(1)-p_Y(0))/(p_M(0)+p_M(1)).
    CHECK(std::fabs(delta_ce(model) - 0.25) <= 1e-12);
    CHECK(delta_as(model) == 0.0);
    CHECK(delta_cde(model) == 0.0);
    CHECK(std::fabs(total_effect(model) - 0.25) <= 1e-12);
}

TEST_CASE("simple mediation with no A->M arrow: total effect vanishes") {
    const auto model = ScmModel::build(simple_mediation(0.0, 1.5));
    CHECK(total_effect(model) == 0.0);
    CHECK(delta_ce(model) == 0.0);
}

TEST_CASE("total effect matches the observational contrast in the simple model") {
    // With no confounder the empty set satisfies the back-door criterion,
    // so P(Y^{A=a}=1) = P(Y=1 | A=a) read off the joint table.
    const auto model = ScmModel::build(simple_mediation(1.3, -0.7));
    double py_given_a[2];
    for (int a = 0; a < 2; ++a) {
        double pa = 0.0, pay = 0.0;
        for (int u = 0; u < 2; ++u)
            for (int m = 0; m < 2; ++m)
                for (int y = 0; y < 2; ++y) {
                    pa += model.joint.cell(a, u, m, y);
                    if (y == 1) pay += model.joint.cell(a, u, m, y);
                }
        py_given_a[a] = pay / pa;
    }
    CHECK(std::fabs(total_effect(model) - (py_given_a[1] - py_given_a[0])) <= 1e-12);
}

TEST_CASE("figure-2-top: all causal odds ratios exactly one") {
    ScmParams p;
    p.alpha_a = 1.0;
    p.alpha_u = 1.0;
    p.beta_u = 1.0;
    const auto rep = report(ScmModel::build(p));
    CHECK(std::fabs(*rep.ce.odds_ratio - 1.0) <= 1e-12);
    CHECK(std::fabs(*rep.sp.odds_ratio - 1.0) <= 1e-12);
    CHECK(std::fabs(*rep.cde.odds_ratio - 1.0) <= 1e-12);
    CHECK(std::fabs(*rep.cde_a1m1.odds_ratio - 1.0) <= 1e-12);
    CHECK(std::fabs(*rep.as.odds_ratio - 1.0) > 1e-6);
}

TEST_CASE("figure-3 base report matches frozen values") {
    // frozen from an independent reimplementation of the closed forms;
    // cross-checked against the Monte Carlo sampler in the acceptance run
    const auto rep = report(ScmModel::build(fig3_params()));
    CHECK(rep.as.delta == doctest::Approx(-0.07828220936433417).epsilon(1e-12));
    CHECK(rep.sp.delta == doctest::Approx(0.041700471195074584).epsilon(1e-12));
    CHECK(rep.ce.delta == doctest::Approx(0.18899706231156654).epsilon(1e-12));
    CHECK(rep.cde.delta == doctest::Approx(0.02891910732907743).epsilon(1e-12));
    CHECK(rep.cde_a1m1.delta == doctest::Approx(0.039458123029168624).epsilon(1e-12));
    CHECK(rep.total_effect == doctest::Approx(0.23112029964531433).epsilon(1e-12));
    CHECK(*rep.as.odds_ratio == doctest::Approx(0.6628924120979724).epsilon(1e-12));
    CHECK(*rep.sp.odds_ratio == doctest::Approx(1.2284355414667454).epsilon(1e-12));
    CHECK(*rep.ce.odds_ratio == doctest::Approx(2.3132413992026386).epsilon(1e-12));
    CHECK(*rep.cde.odds_ratio == doctest::Approx(1.1229503564083376).epsilon(1e-12));
    CHECK(*rep.cde_a1m1.odds_ratio == doctest::Approx(1.2000863502041133).epsilon(1e-12));
    CHECK(rep.p_m1 == doctest::Approx(0.4777274532383764).epsilon(1e-12));
    CHECK(rep.p_y1 == doctest::Approx(0.45320446604071796).epsilon(1e-12));
    // the paradox pattern
    CHECK(rep.as.delta < 0.0);
    CHECK(rep.cde.delta > 0.0);
    CHECK(rep.cde_a1m1.delta > 0.0);
    CHECK(rep.ce.delta > 0.0);
}

TEST_CASE("collapse identities on random parameter vectors") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 200; ++trial) {
        ScmParams p = random_params(gen, trial % 2 == 0 ? 0.0 : 1.0);
        const auto model = ScmModel::build(p);
        // delta_sp and delta_cde_m1 are termwise the same formula here
        CHECK(std::fabs(delta_sp(model) - delta_cde_m1(model)) <= 1e-12);

        // no A terms in the Y mechanism: all conditional CDEs vanish
        ScmParams q = p;
        q.beta_a = q.beta_am = q.beta_au = q.beta_aum = 0.0;
        const auto mq = ScmModel::build(q);
        CHECK(delta_sp(mq) == 0.0);
        CHECK(delta_cde(mq) == 0.0);
        CHECK(delta_cde_m1(mq) == 0.0);
        CHECK(delta_cde_a1m1(mq) == 0.0);

        // U independent of (A, M): every U-weighting coincides
        ScmParams r = p;
        r.alpha_u = r.alpha_au = 0.0;
        const auto mr = ScmModel::build(r);
        const double cde = delta_cde(mr);
        CHECK(std::fabs(delta_cde_m1(mr) - cde) <= 1e-12);
        CHECK(std::fabs(delta_cde_a1m1(mr) - cde) <= 1e-12);
        CHECK(std::fabs(delta_sp(mr) - cde) <= 1e-12);
    }
}

TEST_CASE("weighting ladder: shared contrast, different U-distributions") {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 100; ++trial) {
        const ScmParams p = random_params(gen);
        const auto model = ScmModel::build(p);
        const double c[2] = {model.tables.py(1, 1, 0) - model.tables.py(0, 1, 0),
                             model.tables.py(1, 1, 1) - model.tables.py(0, 1, 1)};
        const auto w_m1 = condition_u(model.joint, std::nullopt, 1);
        const auto w_a1m1 = condition_u(model.joint, 1, 1);
        const double w_marg[2] = {1 - p.p_u, p.p_u};
        CHECK(std::fabs(delta_sp(model) - (c[0] * w_m1[0] + c[1] * w_m1[1])) <= 1e-12);
        CHECK(std::fabs(delta_cde(model) - (c[0] * w_marg[0] + c[1] * w_marg[1])) <= 1e-12);
        CHECK(std::fabs(delta_cde_a1m1(model) - (c[0] * w_a1m1[0] + c[1] * w_a1m1[1])) <=
              1e-12);
    }
}

TEST_CASE("null propagation: A affects nothing") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 50; ++trial) {
        ScmParams p = random_params(gen);
        p.alpha_a = p.alpha_au = 0.0;
        p.beta_a = p.beta_am = p.beta_au = p.beta_aum = 0.0;
        const auto model = ScmModel::build(p);
        CHECK(std::fabs(delta_as(model)) <= 1e-12);
        CHECK(std::fabs(delta_sp(model)) <= 1e-12);
        CHECK(std::fabs(delta_ce(model)) <= 1e-12);
        CHECK(std::fabs(delta_cde(model)) <= 1e-12);
        CHECK(std::fabs(delta_cde_m1(model)) <= 1e-12);
        CHECK(std::fabs(delta_cde_a1m1(model)) <= 1e-12);
        CHECK(std::fabs(total_effect(model)) <= 1e-12);
    }
}

TEST_CASE("sign agreement between additive and odds-ratio scales") {
    std::mt19937_64 gen(37);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rep = report(ScmModel::build(random_params(gen)));
        for (const auto* entry :
             {&rep.as, &rep.sp, &rep.ce, &rep.cde, &rep.cde_m1, &rep.cde_a1m1}) {
            REQUIRE(entry->odds_ratio.has_value());
            if (entry->delta > 1e-12) {
                CHECK(*entry->odds_ratio > 1.0);
            } else if (entry->delta < -1e-12) {
                CHECK(*entry->odds_ratio < 1.0);
            } else {
                CHECK(std::fabs(*entry->odds_ratio - 1.0) <= 1e-9);
            }
            CHECK(entry->risks.risk1 >= 0.0);
            CHECK(entry->risks.risk1 <= 1.0);
            CHECK(std::fabs(entry->delta - entry->risks.delta()) <= 1e-15);
        }
    }
}

TEST_CASE("report names the offending estimand on degenerate conditioning") {
    // hand-built model with P(A=0) = 0, reachable only by bypassing
    // parameter validation
    ScmModel model;
    model.params = ScmParams{};
    model.tables = build_mechanisms(model.params);
    model.joint = joint_factual(model.tables, 1.0, 0.5);
    try {
        (void)report(model);
        FAIL("expected DegenerateEventError");
    } catch (const DegenerateEventError& e) {
        CHECK(std::string(e.what()).find("delta_as") != std::string::npos);
    }
}
