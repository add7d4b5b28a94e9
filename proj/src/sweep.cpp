#include "collider/sweep.hpp"

#include <algorithm>
#include <cctype>

namespace collider {

const char* sweep_param_name(SweepParam p) {
    switch (p) {
        case SweepParam::AlphaA: return "alpha_a";
        case SweepParam::AlphaU: return "alpha_u";
        case SweepParam::AlphaAU: return "alpha_au";
        case SweepParam::BetaA: return "beta_a";
        case SweepParam::BetaU: return "beta_u";
        case SweepParam::BetaM: return "beta_m";
        case SweepParam::BetaAM: return "beta_am";
        case SweepParam::BetaAU: return "beta_au";
        case SweepParam::BetaUM: return "beta_um";
        case SweepParam::BetaAUM: return "beta_aum";
    }
    return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
    std::string key;
    key.reserve(name.size());
    for (char ch : name) {
        key.push_back(ch == '-' ? '_' : static_cast<char>(std::tolower(
                                            static_cast<unsigned char>(ch))));
    }
    static const std::pair<const char*, SweepParam> table[] = {
        {"alpha_a", SweepParam::AlphaA},   {"alpha_u", SweepParam::AlphaU},
        {"alpha_au", SweepParam::AlphaAU}, {"beta_a", SweepParam::BetaA},
        {"beta_u", SweepParam::BetaU},     {"beta_m", SweepParam::BetaM},
        {"beta_am", SweepParam::BetaAM},   {"beta_au", SweepParam::BetaAU},
        {"beta_um", SweepParam::BetaUM},   {"beta_aum", SweepParam::BetaAUM},
    };
    for (const auto& [n, p] : table) {
        if (key == n) return p;
    }
    throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "'");
}

double get_param(const ScmParams& params, SweepParam p) {
    switch (p) {
        case SweepParam::AlphaA: return params.alpha_a;
        case SweepParam::AlphaU: return params.alpha_u;
        case SweepParam::AlphaAU: return params.alpha_au;
        case SweepParam::BetaA: return params.beta_a;
        case SweepParam::BetaU: return params.beta_u;
        case SweepParam::BetaM: return params.beta_m;
        case SweepParam::BetaAM: return params.beta_am;
        case SweepParam::BetaAU: return params.beta_au;
        case SweepParam::BetaUM: return params.beta_um;
        case SweepParam::BetaAUM: return params.beta_aum;
    }
    throw std::invalid_argument("get_param: bad parameter");
}

void set_param(ScmParams& params, SweepParam p, double value) {
    switch (p) {
        case SweepParam::AlphaA: params.alpha_a = value; return;
        case SweepParam::AlphaU: params.alpha_u = value; return;
        case SweepParam::AlphaAU: params.alpha_au = value; return;
        case SweepParam::BetaA: params.beta_a = value; return;
        case SweepParam::BetaU: params.beta_u = value; return;
        case SweepParam::BetaM: params.beta_m = value; return;
        case SweepParam::BetaAM: params.beta_am = value; return;
        case SweepParam::BetaAU: params.beta_au = value; return;
        case SweepParam::BetaUM: params.beta_um = value; return;
        case SweepParam::BetaAUM: params.beta_aum = value; return;
    }
    throw std::invalid_argument("set_param: bad parameter");
}

void SweepSpec::validate() const {
    base.validate();
    if (!(from < to)) {
        throw std::invalid_argument("SweepSpec: from must be < to");
    }
    if (steps < 2) {
        throw std::invalid_argument("SweepSpec: steps must be >= 2");
    }
}

ScmParams fig2_base(int beta_m) {
    if (beta_m != 0 && beta_m != 1) {
        throw std::invalid_argument("fig2_base: beta_m must be 0 or 1");
    }
    ScmParams base;
    base.alpha_a = 1.0;
    base.alpha_u = 1.0;
    base.alpha_au = 0.0;
    base.beta_u = 1.0;
    base.beta_m = beta_m;
    return base;
}

ScmParams fig3_base() {
    ScmParams base;
    base.alpha_a = 2.0;
    base.alpha_u = 2.0;
    base.beta_a = 2.0;
    base.beta_um = 2.0;
    base.beta_u = 3.0;
    base.beta_am = -2.0;
    base.alpha_au = 1.0;
    base.beta_m = 1.0;
    base.beta_au = 1.0;
    base.beta_aum = 1.0;
    return base;
}

SweepSpec preset_fig2(int beta_m, SweepParam vary) {
    if (vary != SweepParam::AlphaA && vary != SweepParam::AlphaU &&
        vary != SweepParam::BetaU && vary != SweepParam::AlphaAU) {
        throw std::invalid_argument(std::string("preset_fig2: '") + sweep_param_name(vary) +
                                    "' is not a figure-2 sweep axis");
    }
    SweepSpec spec;
    spec.base = fig2_base(beta_m);
    spec.vary = vary;
    return spec;
}

SweepSpec preset_fig3(SweepParam vary) {
    if (vary != SweepParam::AlphaAU && vary != SweepParam::BetaM &&
        vary != SweepParam::BetaAU && vary != SweepParam::BetaAUM) {
        throw std::invalid_argument(std::string("preset_fig3: '") + sweep_param_name(vary) +
                                    "' is not a figure-3 sweep axis");
    }
    SweepSpec spec;
    spec.base = fig3_base();
    spec.vary = vary;
    return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.steps));
    for (int k = 0; k < spec.steps; ++k) {
        SweepRow row;
        row.param_value = spec.from + k * (spec.to - spec.from) / (spec.steps - 1);
        ScmParams params = spec.base;
        set_param(params, spec.vary, row.param_value);
        try {
            row.report = report(ScmModel::build(params));
        } catch (const DegenerateEventError& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace collider
