#include "collider/estimands.hpp"

#include <algorithm>
#include <cmath>

namespace collider {

double odds_ratio(const RiskPair& pair) {
    auto opt = odds_ratio_if_defined(pair);
    if (!opt) {
        throw UndefinedOddsError("odds_ratio: undefined for boundary risks (risk1=" +
                                 std::to_string(pair.risk1) +
                                 ", risk0=" + std::to_string(pair.risk0) + ")");
    }
    return *opt;
}

std::optional<double> odds_ratio_if_defined(const RiskPair& pair) {
    if (!(pair.risk1 > 0.0 && pair.risk1 < 1.0 && pair.risk0 > 0.0 && pair.risk0 < 1.0)) {
        return std::nullopt;
    }
    return (pair.risk1 / (1.0 - pair.risk1)) / (pair.risk0 / (1.0 - pair.risk0));
}

namespace {

// Contrast arm Σ_u p_Y(a,1,u) w(u).
double weighted_risk(const ScmModel& model, int a, const std::array<double, 2>& w) {
    return model.tables.py(a, 1, 0) * w[0] + model.tables.py(a, 1, 1) * w[1];
}

double prob_m1(const ScmModel& model) {
    double total = 0.0;
    for (int ia = 0; ia < 2; ++ia) {
        const double pa = ia ? model.params.p_a : 1.0 - model.params.p_a;
        for (int iu = 0; iu < 2; ++iu) {
            const double pu = iu ? model.params.p_u : 1.0 - model.params.p_u;
            total += pa * pu * model.tables.pm(ia, iu);
        }
    }
    return total;
}

}  // namespace

RiskPair risk_as(const ScmModel& model) {
    const auto w1 = condition_u(model.joint, 1, 1);
    const auto w0 = condition_u(model.joint, 0, 1);
    return {weighted_risk(model, 1, w1), weighted_risk(model, 0, w0)};
}

RiskPair risk_sp(const ScmModel& model) {
    const auto w = condition_u(model.joint, std::nullopt, 1);
    return {weighted_risk(model, 1, w), weighted_risk(model, 0, w)};
}

RiskPair risk_ce(const ScmModel& model) {
    const double pm1 = prob_m1(model);
    if (pm1 <= 0.0) {
        throw DegenerateEventError("risk_ce: P(M=1) is zero");
    }
    RiskPair pair;
    for (int a = 0; a < 2; ++a) {
        // Factual M=1 means eps_M <= p_M(i_A, i_U); the counterfactual
        // mediator M^{A=a} shares eps_M, so Y^{A=a} sees M^{A=a}=1 on
        // exactly the first min(p_M(i_A,i_U), p_M(a,i_U)) of that mass.
        double total = 0.0;
        for (int ia = 0; ia < 2; ++ia) {
            const double pa = ia ? model.params.p_a : 1.0 - model.params.p_a;
            for (int iu = 0; iu < 2; ++iu) {
                const double pu = iu ? model.params.p_u : 1.0 - model.params.p_u;
                const double pm_fact = model.tables.pm(ia, iu);
                const double pm_do = model.tables.pm(a, iu);
                const double both = std::min(pm_fact, pm_do);
                total += pa * pu *
                         (model.tables.py(a, 1, iu) * both +
                          model.tables.py(a, 0, iu) * (pm_fact - both));
            }
        }
        const double risk = total / pm1;
        (a ? pair.risk1 : pair.risk0) = risk;
    }
    return pair;
}

RiskPair risk_cde(const ScmModel& model) {
    const std::array<double, 2> w{1.0 - model.params.p_u, model.params.p_u};
    return {weighted_risk(model, 1, w), weighted_risk(model, 0, w)};
}

RiskPair risk_cde_m1(const ScmModel& model) {
    // Y^{a,1} depends on (eps_Y, U) only and eps_Y is independent of
    // (A, M, U), so conditioning on M=1 just reweights U.
    return risk_sp(model);
}

RiskPair risk_cde_a1m1(const ScmModel& model) {
    const auto w = condition_u(model.joint, 1, 1);
    return {weighted_risk(model, 1, w), weighted_risk(model, 0, w)};
}

double delta_as(const ScmModel& model) { return risk_as(model).delta(); }
double delta_sp(const ScmModel& model) { return risk_sp(model).delta(); }
double delta_ce(const ScmModel& model) { return risk_ce(model).delta(); }
double delta_cde(const ScmModel& model) { return risk_cde(model).delta(); }
double delta_cde_m1(const ScmModel& model) { return risk_cde_m1(model).delta(); }
double delta_cde_a1m1(const ScmModel& model) { return risk_cde_a1m1(model).delta(); }

double total_effect(const ScmModel& model) {
    double risk[2] = {0.0, 0.0};
    for (int a = 0; a < 2; ++a) {
        for (int u = 0; u < 2; ++u) {
            const double pu = u ? model.params.p_u : 1.0 - model.params.p_u;
            const double pm = model.tables.pm(a, u);
            risk[a] += pu * (pm * model.tables.py(a, 1, u) +
                             (1.0 - pm) * model.tables.py(a, 0, u));
        }
    }
    return risk[1] - risk[0];
}

namespace {

EstimandReport::Entry make_entry(const RiskPair& pair) {
    return {pair, pair.delta(), odds_ratio_if_defined(pair)};
}

}  // namespace

EstimandReport report(const ScmModel& model) {
    EstimandReport rep;
    try {
        rep.as = make_entry(risk_as(model));
    } catch (const DegenerateEventError& e) {
        throw DegenerateEventError(std::string("delta_as: ") + e.what());
    }
    try {
        rep.sp = make_entry(risk_sp(model));
    } catch (const DegenerateEventError& e) {
        throw DegenerateEventError(std::string("delta_sp: ") + e.what());
    }
    try {
        rep.ce = make_entry(risk_ce(model));
    } catch (const DegenerateEventError& e) {
        throw DegenerateEventError(std::string("delta_ce: ") + e.what());
    }
    rep.cde = make_entry(risk_cde(model));
    try {
        rep.cde_m1 = make_entry(risk_cde_m1(model));
    } catch (const DegenerateEventError& e) {
        throw DegenerateEventError(std::string("delta_cde_m1: ") + e.what());
    }
    try {
        rep.cde_a1m1 = make_entry(risk_cde_a1m1(model));
    } catch (const DegenerateEventError& e) {
        throw DegenerateEventError(std::string("delta_cde_a1m1: ") + e.what());
    }
    rep.total_effect = total_effect(model);
    rep.p_m1 = model.joint.p_m1();
    rep.p_y1 = model.joint.p_y1();
    rep.source = Source::Exact;
    return rep;
}

}  // namespace collider
