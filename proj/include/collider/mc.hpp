#pragma once

#include <array>
#include <cstdint>

#include "collider/estimands.hpp"
#include "collider/scm.hpp"

namespace collider {

// Splittable deterministic generator (splitmix64 finalizer). Each
// sampling batch gets its own stream derived from (seed, batch index),
// so parallel and serial runs accumulate identical counts.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

private:
    std::uint64_t state_;
};

// One draw of the four disturbances with every factual and
// counterfactual variable materialized from the shared uniforms.
struct WorldSample {
    double eps_a = 0.0, eps_u = 0.0, eps_m = 0.0, eps_y = 0.0;
    int a = 0, u = 0, m = 0, y = 0;
    std::array<int, 2> m_do{};                  // M^{A=a'}
    std::array<int, 2> y_do_a{};                // Y^{A=a'}
    std::array<std::array<int, 2>, 2> y_do_am{};  // [a'][m'] -> Y^{a',m'}
};

WorldSample sample_world(const ScmModel& model, SplitMix64& rng);

struct McEstimate {
    double value = 0.0;
    double se = 0.0;
    std::uint64_t n_effective = 0;
};

/// Empirical EstimandReport with standard errors; deterministic given
/// (model, n, seed) regardless of thread count. Requires n >= 10^4.
/// Throws DegenerateEventError when a conditioning subset holds fewer
/// than 100 samples.
EstimandReport estimate_report(const ScmModel& model, std::uint64_t n, std::uint64_t seed);

// Empirical view of the random sets {M=1}, {M^{A=0}=1}, {M^{A=1}=1}.
struct EventSetDivergence {
    double p_m_factual = 0.0;
    double p_m_do0 = 0.0;
    double p_m_do1 = 0.0;
    double overlap_factual_do0 = 0.0;  // P(M=1 and M^{A=0}=1)
    double overlap_factual_do1 = 0.0;  // P(M=1 and M^{A=1}=1)
    double overlap_do0_do1 = 0.0;      // P(M^{A=0}=1 and M^{A=1}=1)
    std::uint64_t n = 0;
};

EventSetDivergence event_set_divergence(const ScmModel& model, std::uint64_t n,
                                        std::uint64_t seed);

}  // namespace collider
