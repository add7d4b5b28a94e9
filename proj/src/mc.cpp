#include "collider/mc.hpp"

#include <cmath>
#include <future>
#include <thread>
#include <vector>

namespace collider {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kBatchSize = 1u << 16;
constexpr std::uint64_t kMinSubset = 100;

}  // namespace

SplitMix64 SplitMix64::substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
}

WorldSample sample_world(const ScmModel& model, SplitMix64& rng) {
    WorldSample s;
    s.eps_a = rng.uniform();
    s.eps_u = rng.uniform();
    s.eps_m = rng.uniform();
    s.eps_y = rng.uniform();
    s.a = s.eps_a <= model.params.p_a ? 1 : 0;
    s.u = s.eps_u <= model.params.p_u ? 1 : 0;
    for (int ad = 0; ad < 2; ++ad) {
        s.m_do[static_cast<std::size_t>(ad)] =
            s.eps_m <= model.tables.pm(ad, s.u) ? 1 : 0;
        for (int md = 0; md < 2; ++md) {
            s.y_do_am[static_cast<std::size_t>(ad)][static_cast<std::size_t>(md)] =
                s.eps_y <= model.tables.py(ad, md, s.u) ? 1 : 0;
        }
    }
    s.m = s.m_do[static_cast<std::size_t>(s.a)];
    for (int ad = 0; ad < 2; ++ad) {
        s.y_do_a[static_cast<std::size_t>(ad)] =
            s.y_do_am[static_cast<std::size_t>(ad)]
                     [static_cast<std::size_t>(s.m_do[static_cast<std::size_t>(ad)])];
    }
    s.y = s.y_do_a[static_cast<std::size_t>(s.a)];
    return s;
}

namespace {

// Integer tallies; summing them is associative, so any batch schedule
// yields the same totals.
struct Counts {
    std::uint64_t n = 0;
    std::uint64_t m1 = 0, y1 = 0;
    std::uint64_t cnt[2][2][2] = {};   // [a][m][u]
    std::uint64_t ysum[2][2][2] = {};  // factual Y sums per (a,m,u)

    // Paired counterfactual sums; *_q counts samples where the two arms
    // disagree (|d| = d^2 for d in {-1,0,1}).
    std::uint64_t cde1 = 0, cde0 = 0, cde_q = 0;          // Y^{a,1}, all samples
    std::uint64_t te1 = 0, te0 = 0, te_q = 0;             // Y^{A=a}, all samples
    std::uint64_t n_m1 = 0;
    std::uint64_t ce1 = 0, ce0 = 0, ce_q = 0;             // Y^{A=a} | M=1
    std::uint64_t cm1_1 = 0, cm1_0 = 0, cm1_q = 0;        // Y^{a,1} | M=1
    std::uint64_t n_a1m1 = 0;
    std::uint64_t a1m1_1 = 0, a1m1_0 = 0, a1m1_q = 0;     // Y^{a,1} | A=1, M=1

    Counts& operator+=(const Counts& o) {
        n += o.n;
        m1 += o.m1;
        y1 += o.y1;
        for (int a = 0; a < 2; ++a)
            for (int m = 0; m < 2; ++m)
                for (int u = 0; u < 2; ++u) {
                    cnt[a][m][u] += o.cnt[a][m][u];
                    ysum[a][m][u] += o.ysum[a][m][u];
                }
        cde1 += o.cde1; cde0 += o.cde0; cde_q += o.cde_q;
        te1 += o.te1; te0 += o.te0; te_q += o.te_q;
        n_m1 += o.n_m1;
        ce1 += o.ce1; ce0 += o.ce0; ce_q += o.ce_q;
        cm1_1 += o.cm1_1; cm1_0 += o.cm1_0; cm1_q += o.cm1_q;
        n_a1m1 += o.n_a1m1;
        a1m1_1 += o.a1m1_1; a1m1_0 += o.a1m1_0; a1m1_q += o.a1m1_q;
        return *this;
    }
};

void accumulate(Counts& c, const WorldSample& s) {
    ++c.n;
    c.m1 += static_cast<std::uint64_t>(s.m);
    c.y1 += static_cast<std::uint64_t>(s.y);
    ++c.cnt[s.a][s.m][s.u];
    c.ysum[s.a][s.m][s.u] += static_cast<std::uint64_t>(s.y);

    const int y11 = s.y_do_am[1][1];
    const int y01 = s.y_do_am[0][1];
    c.cde1 += static_cast<std::uint64_t>(y11);
    c.cde0 += static_cast<std::uint64_t>(y01);
    c.cde_q += static_cast<std::uint64_t>(y11 != y01);

    c.te1 += static_cast<std::uint64_t>(s.y_do_a[1]);
    c.te0 += static_cast<std::uint64_t>(s.y_do_a[0]);
    c.te_q += static_cast<std::uint64_t>(s.y_do_a[1] != s.y_do_a[0]);

    if (s.m == 1) {
        ++c.n_m1;
        c.ce1 += static_cast<std::uint64_t>(s.y_do_a[1]);
        c.ce0 += static_cast<std::uint64_t>(s.y_do_a[0]);
        c.ce_q += static_cast<std::uint64_t>(s.y_do_a[1] != s.y_do_a[0]);
        c.cm1_1 += static_cast<std::uint64_t>(y11);
        c.cm1_0 += static_cast<std::uint64_t>(y01);
        c.cm1_q += static_cast<std::uint64_t>(y11 != y01);
        if (s.a == 1) {
            ++c.n_a1m1;
            c.a1m1_1 += static_cast<std::uint64_t>(y11);
            c.a1m1_0 += static_cast<std::uint64_t>(y01);
            c.a1m1_q += static_cast<std::uint64_t>(y11 != y01);
        }
    }
}

template <typename Tally, typename PerSample>
Tally run_batches(const ScmModel& model, std::uint64_t n, std::uint64_t seed,
                  PerSample per_sample) {
    const std::uint64_t n_batches = (n + kBatchSize - 1) / kBatchSize;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::uint64_t n_workers = std::min<std::uint64_t>(hw, n_batches);

    auto worker = [&](std::uint64_t first) {
        Tally tally{};
        for (std::uint64_t b = first; b < n_batches; b += n_workers) {
            SplitMix64 rng = SplitMix64::substream(seed, b);
            const std::uint64_t batch_n =
                std::min<std::uint64_t>(kBatchSize, n - b * kBatchSize);
            for (std::uint64_t i = 0; i < batch_n; ++i) {
                per_sample(tally, sample_world(model, rng));
            }
        }
        return tally;
    };

    if (n_workers == 1) return worker(0);

    std::vector<std::future<Tally>> futures;
    futures.reserve(n_workers);
    for (std::uint64_t w = 0; w < n_workers; ++w) {
        futures.push_back(std::async(std::launch::async, worker, w));
    }
    Tally total{};
    for (auto& f : futures) {
        Tally part = f.get();
        total += part;
    }
    return total;
}

// Variance of a proportion with add-half smoothing so an all-0 or all-1
// subset still reports a positive standard error.
double prop_var(std::uint64_t successes, std::uint64_t n) {
    const double p = (static_cast<double>(successes) + 0.5) / (static_cast<double>(n) + 1.0);
    return p * (1.0 - p) / static_cast<double>(n);
}

// Paired-difference estimate: per-sample d in {-1,0,1}, q = #(d != 0).
McEstimate paired_estimate(std::uint64_t s1, std::uint64_t s0, std::uint64_t q,
                           std::uint64_t n) {
    McEstimate est;
    est.n_effective = n;
    const double nn = static_cast<double>(n);
    est.value = (static_cast<double>(s1) - static_cast<double>(s0)) / nn;
    const double qq = (static_cast<double>(q) + 0.5) / (nn + 1.0);
    const double var = std::max(qq - est.value * est.value, 0.0);
    est.se = std::sqrt(var / nn);
    return est;
}

void require_subset(std::uint64_t count, const char* name) {
    if (count < kMinSubset) {
        throw DegenerateEventError(std::string("estimate_report: conditioning subset ") +
                                   name + " holds only " + std::to_string(count) +
                                   " samples (minimum 100)");
    }
}

}  // namespace

EstimandReport estimate_report(const ScmModel& model, std::uint64_t n, std::uint64_t seed) {
    if (n < 10000) {
        throw std::invalid_argument("estimate_report: n must be at least 10^4");
    }
    const Counts c = run_batches<Counts>(model, n, seed, accumulate);

    const std::uint64_t n_a0m1 = c.cnt[0][1][0] + c.cnt[0][1][1];
    const std::uint64_t n_a1m1_f = c.cnt[1][1][0] + c.cnt[1][1][1];
    require_subset(c.n_m1, "{M=1}");
    require_subset(n_a0m1, "{A=0, M=1}");
    require_subset(n_a1m1_f, "{A=1, M=1}");
    for (int a = 0; a < 2; ++a) {
        for (int u = 0; u < 2; ++u) {
            const char* names[2][2] = {{"{A=0, M=1, U=0}", "{A=0, M=1, U=1}"},
                                       {"{A=1, M=1, U=0}", "{A=1, M=1, U=1}"}};
            require_subset(c.cnt[a][1][u], names[a][u]);
        }
    }

    EstimandReport rep;
    rep.source = Source::MonteCarlo;
    rep.mc_n = n;
    rep.mc_seed = seed;

    const double nn = static_cast<double>(c.n);
    rep.p_m1 = static_cast<double>(c.m1) / nn;
    rep.p_y1 = static_cast<double>(c.y1) / nn;
    rep.se["p_m1"] = std::sqrt(prop_var(c.m1, c.n));
    rep.se["p_y1"] = std::sqrt(prop_var(c.y1, c.n));

    // Delta_AS from the two disjoint factual arms.
    {
        const std::uint64_t y1s = c.ysum[1][1][0] + c.ysum[1][1][1];
        const std::uint64_t y0s = c.ysum[0][1][0] + c.ysum[0][1][1];
        RiskPair risks{static_cast<double>(y1s) / static_cast<double>(n_a1m1_f),
                       static_cast<double>(y0s) / static_cast<double>(n_a0m1)};
        rep.as = {risks, risks.delta(), odds_ratio_if_defined(risks)};
        rep.se["delta_as"] = std::sqrt(prop_var(y1s, n_a1m1_f) + prop_var(y0s, n_a0m1));
    }

    // Delta_Sp from the factual strata, marginalized over the empirical
    // U-distribution among {M=1}. SE by the delta method including the
    // weight-estimation term.
    {
        const double w1 =
            static_cast<double>(c.cnt[0][1][1] + c.cnt[1][1][1]) / static_cast<double>(c.n_m1);
        const double w[2] = {1.0 - w1, w1};
        double arm[2];
        double contrast[2];
        double var = 0.0;
        for (int u = 0; u < 2; ++u) {
            const double p1 = static_cast<double>(c.ysum[1][1][u]) /
                              static_cast<double>(c.cnt[1][1][u]);
            const double p0 = static_cast<double>(c.ysum[0][1][u]) /
                              static_cast<double>(c.cnt[0][1][u]);
            contrast[u] = p1 - p0;
            var += w[u] * w[u] *
                   (prop_var(c.ysum[1][1][u], c.cnt[1][1][u]) +
                    prop_var(c.ysum[0][1][u], c.cnt[0][1][u]));
        }
        arm[1] = (static_cast<double>(c.ysum[1][1][0]) / static_cast<double>(c.cnt[1][1][0])) * w[0] +
                 (static_cast<double>(c.ysum[1][1][1]) / static_cast<double>(c.cnt[1][1][1])) * w[1];
        arm[0] = (static_cast<double>(c.ysum[0][1][0]) / static_cast<double>(c.cnt[0][1][0])) * w[0] +
                 (static_cast<double>(c.ysum[0][1][1]) / static_cast<double>(c.cnt[0][1][1])) * w[1];
        const double dc = contrast[1] - contrast[0];
        var += dc * dc * w[0] * w[1] / static_cast<double>(c.n_m1);
        RiskPair risks{arm[1], arm[0]};
        rep.sp = {risks, risks.delta(), odds_ratio_if_defined(risks)};
        rep.se["delta_sp"] = std::sqrt(var);
    }

    auto fill_paired = [](EstimandReport::Entry& entry, std::uint64_t s1, std::uint64_t s0,
                          std::uint64_t q, std::uint64_t nsub) {
        RiskPair risks{static_cast<double>(s1) / static_cast<double>(nsub),
                       static_cast<double>(s0) / static_cast<double>(nsub)};
        entry = {risks, risks.delta(), odds_ratio_if_defined(risks)};
        return paired_estimate(s1, s0, q, nsub);
    };

    rep.se["delta_ce"] = fill_paired(rep.ce, c.ce1, c.ce0, c.ce_q, c.n_m1).se;
    rep.se["delta_cde"] = fill_paired(rep.cde, c.cde1, c.cde0, c.cde_q, c.n).se;
    rep.se["delta_cde_m1"] = fill_paired(rep.cde_m1, c.cm1_1, c.cm1_0, c.cm1_q, c.n_m1).se;
    require_subset(c.n_a1m1, "{A=1, M=1}");
    rep.se["delta_cde_a1m1"] =
        fill_paired(rep.cde_a1m1, c.a1m1_1, c.a1m1_0, c.a1m1_q, c.n_a1m1).se;

    const McEstimate te = paired_estimate(c.te1, c.te0, c.te_q, c.n);
    rep.total_effect = te.value;
    rep.se["total_effect"] = te.se;

    return rep;
}

namespace {

struct DivergenceCounts {
    std::uint64_t n = 0;
    std::uint64_t m_factual = 0, m_do0 = 0, m_do1 = 0;
    std::uint64_t both_f0 = 0, both_f1 = 0, both_01 = 0;

    DivergenceCounts& operator+=(const DivergenceCounts& o) {
        n += o.n;
        m_factual += o.m_factual;
        m_do0 += o.m_do0;
        m_do1 += o.m_do1;
        both_f0 += o.both_f0;
        both_f1 += o.both_f1;
        both_01 += o.both_01;
        return *this;
    }
};

}  // namespace

EventSetDivergence event_set_divergence(const ScmModel& model, std::uint64_t n,
                                        std::uint64_t seed) {
    if (n < 10000) {
        throw std::invalid_argument("event_set_divergence: n must be at least 10^4");
    }
    const DivergenceCounts c = run_batches<DivergenceCounts>(
        model, n, seed, [](DivergenceCounts& t, const WorldSample& s) {
            ++t.n;
            t.m_factual += static_cast<std::uint64_t>(s.m);
            t.m_do0 += static_cast<std::uint64_t>(s.m_do[0]);
            t.m_do1 += static_cast<std::uint64_t>(s.m_do[1]);
            t.both_f0 += static_cast<std::uint64_t>(s.m & s.m_do[0]);
            t.both_f1 += static_cast<std::uint64_t>(s.m & s.m_do[1]);
            t.both_01 += static_cast<std::uint64_t>(s.m_do[0] & s.m_do[1]);
        });
    const double nn = static_cast<double>(c.n);
    EventSetDivergence d;
    d.n = c.n;
    d.p_m_factual = static_cast<double>(c.m_factual) / nn;
    d.p_m_do0 = static_cast<double>(c.m_do0) / nn;
    d.p_m_do1 = static_cast<double>(c.m_do1) / nn;
    d.overlap_factual_do0 = static_cast<double>(c.both_f0) / nn;
    d.overlap_factual_do1 = static_cast<double>(c.both_f1) / nn;
    d.overlap_do0_do1 = static_cast<double>(c.both_01) / nn;
    return d;
}

}  // namespace collider
