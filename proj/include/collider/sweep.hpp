#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collider/estimands.hpp"
#include "collider/scm.hpp"

namespace collider {

// The ten non-intercept coefficients a sweep may vary.
enum class SweepParam {
    AlphaA,
    AlphaU,
    AlphaAU,
    BetaA,
    BetaU,
    BetaM,
    BetaAM,
    BetaAU,
    BetaUM,
    BetaAUM,
};

const char* sweep_param_name(SweepParam p);

/// Accepts names like "alpha_a", "alpha-A", "beta_aum".
/// Throws std::invalid_argument on unknown names.
SweepParam parse_sweep_param(std::string_view name);

double get_param(const ScmParams& params, SweepParam p);
void set_param(ScmParams& params, SweepParam p, double value);

struct SweepSpec {
    ScmParams base;
    SweepParam vary = SweepParam::AlphaA;
    double from = -3.0;
    double to = 3.0;
    int steps = 61;

    void validate() const;  // throws std::invalid_argument
};

struct SweepRow {
    double param_value = 0.0;
    std::optional<EstimandReport> report;
    std::string error;  // non-empty when the grid point is degenerate
};

// Base configurations used by the figure presets.
ScmParams fig2_base(int beta_m);  // beta_m in {0, 1}
ScmParams fig3_base();

/// Sweep over one of {alpha_a, alpha_u, beta_u, alpha_au} with the
/// remaining Y-interactions zeroed and beta_m in {0, 1}.
SweepSpec preset_fig2(int beta_m, SweepParam vary);

/// Sweep over one of {alpha_au, beta_m, beta_au, beta_aum} around the
/// interaction-heavy base. The published caption reads
/// "alpha_A = alpha_U = 2 = beta_A = beta_UM = 2"; it is taken as
/// alpha_a = alpha_u = beta_a = beta_um = 2, matching the prose.
SweepSpec preset_fig3(SweepParam vary);

/// One exact report per grid point on the closed [from, to] grid with
/// param_value = from + k*(to-from)/(steps-1).
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

}  // namespace collider
