#include "collider/scm.hpp"

#include <cmath>

namespace collider {

double expit(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("expit: non-finite input");
    }
    // Evaluate through the negative branch so large |x| never overflows.
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void ScmParams::validate() const {
    auto check_finite = [](double v, const char* name) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string("ScmParams: ") + name + " is not finite");
        }
    };
    check_finite(p_a, "p_a");
    check_finite(p_u, "p_u");
    if (!(p_a > 0.0 && p_a < 1.0)) {
        throw std::invalid_argument("ScmParams: p_a must lie in (0,1)");
    }
    if (!(p_u > 0.0 && p_u < 1.0)) {
        throw std::invalid_argument("ScmParams: p_u must lie in (0,1)");
    }
    check_finite(alpha_a, "alpha_a");
    check_finite(alpha_u, "alpha_u");
    check_finite(alpha_au, "alpha_au");
    check_finite(beta_a, "beta_a");
    check_finite(beta_u, "beta_u");
    check_finite(beta_m, "beta_m");
    check_finite(beta_am, "beta_am");
    check_finite(beta_au, "beta_au");
    check_finite(beta_um, "beta_um");
    check_finite(beta_aum, "beta_aum");
    check_finite(nu, "nu");
    if (nu < 0.0) {
        throw std::invalid_argument("ScmParams: nu must be >= 0");
    }
    if (intercept_mode == InterceptMode::Explicit) {
        check_finite(alpha_0, "alpha_0");
        check_finite(beta_0, "beta_0");
    }
}

std::pair<double, double> resolve_intercepts(const ScmParams& p) {
    const double alpha_0 = -0.5 * (p.alpha_a + p.alpha_u + 0.5 * p.alpha_au);
    const double beta_0 =
        -0.5 * (p.beta_a + p.beta_m + p.beta_u + 0.5 * (p.beta_am + p.beta_au + p.beta_um) +
                0.25 * p.beta_aum - p.nu);
    return {alpha_0, beta_0};
}

MechanismTables build_mechanisms(const ScmParams& p) {
    p.validate();
    MechanismTables t;
    if (p.intercept_mode == InterceptMode::Centered) {
        auto [a0, b0] = resolve_intercepts(p);
        t.alpha_0 = a0;
        t.beta_0 = b0;
    } else {
        t.alpha_0 = p.alpha_0;
        t.beta_0 = p.beta_0;
    }
    for (int a = 0; a < 2; ++a) {
        for (int u = 0; u < 2; ++u) {
            t.p_m[static_cast<std::size_t>(a * 2 + u)] =
                expit(t.alpha_0 + p.alpha_a * a + p.alpha_u * u + p.alpha_au * a * u);
            for (int m = 0; m < 2; ++m) {
                t.p_y[static_cast<std::size_t>((a * 2 + m) * 2 + u)] =
                    expit(t.beta_0 + p.beta_a * a + p.beta_u * u + p.beta_m * m +
                          p.beta_au * a * u + p.beta_am * a * m + p.beta_um * u * m +
                          p.beta_aum * a * u * m);
            }
        }
    }
    return t;
}

double JointTable::p_m1() const {
    double total = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int u = 0; u < 2; ++u)
            for (int y = 0; y < 2; ++y) total += cell(a, u, 1, y);
    return total;
}

double JointTable::p_y1() const {
    double total = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int u = 0; u < 2; ++u)
            for (int m = 0; m < 2; ++m) total += cell(a, u, m, 1);
    return total;
}

JointTable joint_factual(const MechanismTables& tables, double p_a, double p_u) {
    JointTable joint;
    for (int a = 0; a < 2; ++a) {
        const double pa = a ? p_a : 1.0 - p_a;
        for (int u = 0; u < 2; ++u) {
            const double pu = u ? p_u : 1.0 - p_u;
            const double pm = tables.pm(a, u);
            for (int m = 0; m < 2; ++m) {
                const double pm_term = m ? pm : 1.0 - pm;
                const double py = tables.py(a, m, u);
                for (int y = 0; y < 2; ++y) {
                    joint.at(a, u, m, y) = pa * pu * pm_term * (y ? py : 1.0 - py);
                }
            }
        }
    }
    return joint;
}

std::array<double, 2> condition_u(const JointTable& joint,
                                  std::optional<int> a,
                                  std::optional<int> m) {
    std::array<double, 2> mass{0.0, 0.0};
    for (int aa = 0; aa < 2; ++aa) {
        if (a && *a != aa) continue;
        for (int u = 0; u < 2; ++u) {
            for (int mm = 0; mm < 2; ++mm) {
                if (m && *m != mm) continue;
                for (int y = 0; y < 2; ++y) {
                    mass[static_cast<std::size_t>(u)] += joint.cell(aa, u, mm, y);
                }
            }
        }
    }
    const double total = mass[0] + mass[1];
    if (total <= 0.0) {
        std::string event;
        if (a) event += "A=" + std::to_string(*a);
        if (m) event += (event.empty() ? "" : ", ") + std::string("M=") + std::to_string(*m);
        throw DegenerateEventError("condition_u: conditioning event {" + event +
                                   "} has probability zero");
    }
    return {mass[0] / total, mass[1] / total};
}

ScmModel ScmModel::build(const ScmParams& params) {
    params.validate();
    ScmModel model;
    model.params = params;
    model.tables = build_mechanisms(params);
    model.joint = joint_factual(model.tables, params.p_a, params.p_u);
    return model;
}

}  // namespace collider
