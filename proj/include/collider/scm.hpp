#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace collider {

// Conditioning event with probability zero, or a Monte Carlo subset too
// small to estimate from. Maps to exit code 3 in the CLI.
class DegenerateEventError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Logistic sigmoid 1/(1+exp(-x)). Rejects non-finite input.
double expit(double x);

enum class InterceptMode { Centered, Explicit };

// Parameters of the binary four-variable generative model:
//   A ~ B(p_a), U ~ B(p_u) independent,
//   M | A,U ~ B(expit(alpha_0 + alpha_a*A + alpha_u*U + alpha_au*A*U)),
//   Y | A,M,U ~ B(expit(beta_0 + beta_a*A + beta_u*U + beta_m*M
//                        + beta_au*A*U + beta_am*A*M + beta_um*U*M
//                        + beta_aum*A*U*M)).
// In Centered mode the intercepts are derived so that the linear
// predictors vanish at the covariate midpoint (up to the nu shift).
struct ScmParams {
    double p_a = 0.5;
    double p_u = 0.5;

    double alpha_a = 0.0;
    double alpha_u = 0.0;
    double alpha_au = 0.0;

    double beta_a = 0.0;
    double beta_u = 0.0;
    double beta_m = 0.0;
    double beta_am = 0.0;
    double beta_au = 0.0;
    double beta_um = 0.0;
    double beta_aum = 0.0;

    double nu = 0.0;

    InterceptMode intercept_mode = InterceptMode::Centered;
    double alpha_0 = 0.0;  // used only in Explicit mode
    double beta_0 = 0.0;   // used only in Explicit mode

    // Throws std::invalid_argument on out-of-range or non-finite values.
    void validate() const;

    bool operator==(const ScmParams&) const = default;
};

/// Centered intercepts: alpha_0 = -(alpha_a + alpha_u + alpha_au/2)/2,
/// beta_0 = -(beta_a + beta_m + beta_u + (beta_am + beta_au + beta_um)/2
///            + beta_aum/4 - nu)/2.
std::pair<double, double> resolve_intercepts(const ScmParams& params);

// Evaluated mechanism probabilities over all binary input combinations.
struct MechanismTables {
    double alpha_0 = 0.0;
    double beta_0 = 0.0;
    std::array<double, 4> p_m{};  // index [a][u]
    std::array<double, 8> p_y{};  // index [a][m][u]

    double pm(int a, int u) const { return p_m[static_cast<std::size_t>(a * 2 + u)]; }
    double py(int a, int m, int u) const {
        return p_y[static_cast<std::size_t>((a * 2 + m) * 2 + u)];
    }
};

MechanismTables build_mechanisms(const ScmParams& params);

// Exact 16-cell factual joint distribution of (A, U, M, Y).
struct JointTable {
    std::array<double, 16> cells{};  // index [a][u][m][y]

    double cell(int a, int u, int m, int y) const {
        return cells[static_cast<std::size_t>(((a * 2 + u) * 2 + m) * 2 + y)];
    }
    double& at(int a, int u, int m, int y) {
        return cells[static_cast<std::size_t>(((a * 2 + u) * 2 + m) * 2 + y)];
    }

    double p_m1() const;
    double p_y1() const;
};

JointTable joint_factual(const MechanismTables& tables, double p_a, double p_u);

/// P(U=u | A=a?, M=m?) for u in {0,1}. Either condition may be absent.
/// Throws DegenerateEventError when the conditioning event has
/// probability zero.
std::array<double, 2> condition_u(const JointTable& joint,
                                  std::optional<int> a,
                                  std::optional<int> m);

// Validated parameter vector together with its derived tables.
struct ScmModel {
    ScmParams params;
    MechanismTables tables;
    JointTable joint;

    static ScmModel build(const ScmParams& params);
};

}  // namespace collider
