#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "collider/scm.hpp"

namespace collider {

// Odds ratio requested for a risk on the boundary of [0,1].
class UndefinedOddsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A contrast of two risks; risk1 is the a=1 arm, risk0 the a=0 arm.
struct RiskPair {
    double risk1 = 0.0;
    double risk0 = 0.0;

    double delta() const { return risk1 - risk0; }
};

/// [risk1/(1-risk1)] / [risk0/(1-risk0)]. Throws UndefinedOddsError
/// when either risk touches 0 or 1.
double odds_ratio(const RiskPair& pair);

/// Same value, but nullopt instead of a throw on boundary risks.
std::optional<double> odds_ratio_if_defined(const RiskPair& pair);

// The six estimand contrasts. Each is a U-weighted contrast of
// P(Y=1 | A=a, M=1, U=u) except risk_ce, which couples the factual and
// counterfactual mediators through the shared uniform disturbance.
RiskPair risk_as(const ScmModel& model);        // weights P(U=u | A=a, M=1), per arm
RiskPair risk_sp(const ScmModel& model);        // weights P(U=u | M=1)
RiskPair risk_ce(const ScmModel& model);        // P(Y^{A=a}=1 | M=1), coupling formula
RiskPair risk_cde(const ScmModel& model);       // weights P(U=u)
RiskPair risk_cde_m1(const ScmModel& model);    // weights P(U=u | M=1)
RiskPair risk_cde_a1m1(const ScmModel& model);  // weights P(U=u | A=1, M=1)

double delta_as(const ScmModel& model);
double delta_sp(const ScmModel& model);
double delta_ce(const ScmModel& model);
double delta_cde(const ScmModel& model);
double delta_cde_m1(const ScmModel& model);
double delta_cde_a1m1(const ScmModel& model);

/// P(Y^{A=1}=1) - P(Y^{A=0}=1) by the g-formula over U and M.
double total_effect(const ScmModel& model);

enum class Source { Exact, MonteCarlo };

struct EstimandReport {
    struct Entry {
        RiskPair risks;
        double delta = 0.0;
        std::optional<double> odds_ratio;  // nullopt when a risk is on the boundary
    };

    Entry as;
    Entry sp;
    Entry ce;
    Entry cde;
    Entry cde_m1;
    Entry cde_a1m1;

    double total_effect = 0.0;
    double p_m1 = 0.0;
    double p_y1 = 0.0;

    Source source = Source::Exact;
    std::uint64_t mc_n = 0;
    std::uint64_t mc_seed = 0;
    // Standard errors keyed by estimand name; Monte Carlo reports only.
    std::map<std::string, double> se;
};

/// All estimands from the closed forms; source = Exact.
EstimandReport report(const ScmModel& model);

}  // namespace collider
