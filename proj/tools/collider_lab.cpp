#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "collider/estimands.hpp"
#include "collider/io.hpp"
#include "collider/mc.hpp"
#include "collider/scm.hpp"
#include "collider/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

struct ParamFlags {
    std::optional<double> p_a, p_u;
    std::optional<double> alpha_a, alpha_u, alpha_au;
    std::optional<double> beta_a, beta_u, beta_m, beta_am, beta_au, beta_um, beta_aum;
    std::optional<double> nu;
    std::optional<double> alpha_0, beta_0;
    std::string config_path;
    std::string preset;
};

void add_param_options(CLI::App* cmd, ParamFlags& f, bool with_preset,
                       const std::string& preset_desc) {
    cmd->add_option("--p-a", f.p_a, "prevalence of A=1 (default 0.5)");
    cmd->add_option("--p-u", f.p_u, "prevalence of U=1 (default 0.5)");
    cmd->add_option("--alpha-a", f.alpha_a, "M-mechanism coefficient of A");
    cmd->add_option("--alpha-u", f.alpha_u, "M-mechanism coefficient of U");
    cmd->add_option("--alpha-au", f.alpha_au, "M-mechanism coefficient of A*U");
    cmd->add_option("--beta-a", f.beta_a, "Y-mechanism coefficient of A");
    cmd->add_option("--beta-u", f.beta_u, "Y-mechanism coefficient of U");
    cmd->add_option("--beta-m", f.beta_m, "Y-mechanism coefficient of M");
    cmd->add_option("--beta-am", f.beta_am, "Y-mechanism coefficient of A*M");
    cmd->add_option("--beta-au", f.beta_au, "Y-mechanism coefficient of A*U");
    cmd->add_option("--beta-um", f.beta_um, "Y-mechanism coefficient of U*M");
    cmd->add_option("--beta-aum", f.beta_aum, "Y-mechanism coefficient of A*U*M");
    cmd->add_option("--nu", f.nu, "prevalence-shift parameter (>= 0)");
    cmd->add_option("--alpha-0", f.alpha_0, "explicit M-intercept (disables centering)");
    cmd->add_option("--beta-0", f.beta_0, "explicit Y-intercept (disables centering)");
    cmd->add_option("--config", f.config_path, "key = value config file; flags override");
    if (with_preset) {
        cmd->add_option("--preset", f.preset, preset_desc);
    }
}

collider::ConfigValues resolve_config(const ParamFlags& f,
                                      const collider::ScmParams& preset_base) {
    collider::ConfigValues config;
    config.params = preset_base;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            throw std::invalid_argument("cannot open config file '" + f.config_path + "'");
        }
        collider::ConfigValues file = collider::read_config(in);
        config.params = file.params;
        config.n = file.n;
        config.seed = file.seed;
        config.tol_se = file.tol_se;
    }
    collider::ScmParams& p = config.params;
    if (f.p_a) p.p_a = *f.p_a;
    if (f.p_u) p.p_u = *f.p_u;
    if (f.alpha_a) p.alpha_a = *f.alpha_a;
    if (f.alpha_u) p.alpha_u = *f.alpha_u;
    if (f.alpha_au) p.alpha_au = *f.alpha_au;
    if (f.beta_a) p.beta_a = *f.beta_a;
    if (f.beta_u) p.beta_u = *f.beta_u;
    if (f.beta_m) p.beta_m = *f.beta_m;
    if (f.beta_am) p.beta_am = *f.beta_am;
    if (f.beta_au) p.beta_au = *f.beta_au;
    if (f.beta_um) p.beta_um = *f.beta_um;
    if (f.beta_aum) p.beta_aum = *f.beta_aum;
    if (f.nu) p.nu = *f.nu;
    if (f.alpha_0 || f.beta_0) {
        if (!(f.alpha_0 && f.beta_0) &&
            p.intercept_mode != collider::InterceptMode::Explicit) {
            throw std::invalid_argument("--alpha-0 and --beta-0 must be given together");
        }
        p.intercept_mode = collider::InterceptMode::Explicit;
        if (f.alpha_0) p.alpha_0 = *f.alpha_0;
        if (f.beta_0) p.beta_0 = *f.beta_0;
    }
    return config;
}

collider::ScmParams compute_preset_base(const std::string& preset) {
    if (preset.empty()) return collider::ScmParams{};
    if (preset == "fig2-top") return collider::fig2_base(0);
    if (preset == "fig2-bottom") return collider::fig2_base(1);
    if (preset == "fig3-base") return collider::fig3_base();
    throw std::invalid_argument("unknown preset '" + preset +
                                "' (expected fig2-top, fig2-bottom or fig3-base)");
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("COLLIDER_LAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("COLLIDER_LAB_SEED is not an integer");
        }
    }
    return 42;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open output file '" + path + "'");
    }
    return out;
}

int cmd_compute(const ParamFlags& flags, const std::string& out_path,
                const std::string& save_config_path) {
    const auto config = resolve_config(flags, compute_preset_base(flags.preset));
    const auto model = collider::ScmModel::build(config.params);
    const auto rep = collider::report(model);
    if (!save_config_path.empty()) {
        auto out = open_output(save_config_path);
        collider::write_config(out, config);
    }
    if (out_path.empty()) {
        collider::write_report_text(std::cout, rep);
    } else {
        auto out = open_output(out_path);
        collider::write_report_text(out, rep);
    }
    return kExitOk;
}

int cmd_sweep(const ParamFlags& flags, const std::string& vary_name,
              std::optional<double> from, std::optional<double> to,
              std::optional<int> steps, const std::string& out_path,
              const std::string& svg_path) {
    if (vary_name.empty()) {
        throw std::invalid_argument("sweep requires --vary");
    }
    const collider::SweepParam vary = collider::parse_sweep_param(vary_name);

    collider::SweepSpec spec;
    if (flags.preset == "fig2-top") {
        spec = collider::preset_fig2(0, vary);
    } else if (flags.preset == "fig2-bottom") {
        spec = collider::preset_fig2(1, vary);
    } else if (flags.preset == "fig3") {
        spec = collider::preset_fig3(vary);
    } else if (!flags.preset.empty()) {
        throw std::invalid_argument("unknown sweep preset '" + flags.preset +
                                    "' (expected fig2-top, fig2-bottom or fig3)");
    } else {
        spec.vary = vary;
    }
    spec.base = resolve_config(flags, spec.base).params;
    if (from) spec.from = *from;
    if (to) spec.to = *to;
    if (steps) spec.steps = *steps;
    spec.validate();

    const auto rows = collider::run_sweep(spec);
    const std::string param_name = collider::sweep_param_name(spec.vary);
    if (out_path.empty()) {
        collider::write_sweep_csv(std::cout, param_name, rows);
    } else {
        auto out = open_output(out_path);
        collider::write_sweep_csv(out, param_name, rows);
    }
    if (!svg_path.empty()) {
        std::ostringstream csv;
        collider::write_sweep_csv(csv, param_name, rows);
        std::istringstream in(csv.str());
        const auto parsed = collider::parse_sweep_csv(in);
        auto out = open_output(svg_path);
        collider::write_sweep_svg(out, parsed);
    }
    return kExitOk;
}

int cmd_mc_check(const ParamFlags& flags, std::optional<std::uint64_t> n_flag,
                 std::optional<std::uint64_t> seed_flag, std::optional<double> tol_flag) {
    const auto config = resolve_config(flags, compute_preset_base(flags.preset));
    const std::uint64_t n = n_flag.value_or(config.n.value_or(1000000));
    const std::uint64_t seed = seed_flag.value_or(config.seed.value_or(default_seed()));
    const double tol_se = tol_flag.value_or(config.tol_se.value_or(4.0));
    if (n < 10000) {
        throw std::invalid_argument("mc-check requires n >= 10000");
    }
    if (!(tol_se > 0.0)) {
        throw std::invalid_argument("mc-check requires a positive --tol-se");
    }

    const auto model = collider::ScmModel::build(config.params);
    const auto exact = collider::report(model);
    const auto mc = collider::estimate_report(model, n, seed);

    struct Row {
        const char* name;
        double exact_value;
        double mc_value;
    };
    const Row rows[] = {
        {"delta_as", exact.as.delta, mc.as.delta},
        {"delta_sp", exact.sp.delta, mc.sp.delta},
        {"delta_ce", exact.ce.delta, mc.ce.delta},
        {"delta_cde", exact.cde.delta, mc.cde.delta},
        {"delta_cde_m1", exact.cde_m1.delta, mc.cde_m1.delta},
        {"delta_cde_a1m1", exact.cde_a1m1.delta, mc.cde_a1m1.delta},
        {"total_effect", exact.total_effect, mc.total_effect},
        {"p_m1", exact.p_m1, mc.p_m1},
        {"p_y1", exact.p_y1, mc.p_y1},
    };

    std::cout << "n=" << n << " seed=" << seed << " tolerance=" << tol_se << " SE\n";
    std::printf("%-16s %14s %14s %12s %8s\n", "estimand", "exact", "monte-carlo", "se",
                "|z|");
    bool ok = true;
    for (const auto& row : rows) {
        const double se = mc.se.at(row.name);
        const double z = se > 0.0 ? std::fabs(row.mc_value - row.exact_value) / se
                                  : (row.mc_value == row.exact_value ? 0.0 : HUGE_VAL);
        const bool pass = z <= tol_se;
        ok = ok && pass;
        std::printf("%-16s %14.7f %14.7f %12.3e %8.2f %s\n", row.name, row.exact_value,
                    row.mc_value, se, z, pass ? "" : "FAIL");
    }
    std::cout << (ok ? "mc-check: all estimands within tolerance\n"
                     : "mc-check: tolerance exceeded\n");
    return ok ? kExitOk : kExitTolerance;
}

int cmd_plot(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) {
        throw std::invalid_argument("cannot open input CSV '" + in_path + "'");
    }
    const auto data = collider::parse_sweep_csv(in);
    auto out = open_output(out_path);
    collider::write_sweep_svg(out, data);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte Carlo calculator for collider-bias estimands"};
    app.require_subcommand(1);

    ParamFlags compute_flags, sweep_flags, mc_flags;

    auto* compute = app.add_subcommand("compute", "exact estimand report");
    add_param_options(compute, compute_flags, true, "fig2-top, fig2-bottom or fig3-base");
    std::string compute_out, save_config;
    compute->add_option("--out", compute_out, "write the report to a file");
    compute->add_option("--save-config", save_config, "write the resolved config file");

    auto* sweep = app.add_subcommand("sweep", "one-parameter sweep, CSV output");
    add_param_options(sweep, sweep_flags, true, "fig2-top, fig2-bottom or fig3");
    std::string vary_name, sweep_out, svg_out;
    std::optional<double> from, to;
    std::optional<int> steps;
    sweep->add_option("--vary", vary_name, "parameter to sweep (e.g. alpha_a)");
    sweep->add_option("--from", from, "grid start (default -3)");
    sweep->add_option("--to", to, "grid end (default 3)");
    sweep->add_option("--steps", steps, "grid points (default 61)");
    sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");
    sweep->add_option("--svg", svg_out, "also write an SVG chart of the OR curves");

    auto* mc = app.add_subcommand("mc-check", "exact vs Monte Carlo comparison");
    add_param_options(mc, mc_flags, true, "fig2-top, fig2-bottom or fig3-base");
    std::optional<std::uint64_t> n_flag, seed_flag;
    std::optional<double> tol_flag;
    mc->add_option("--n", n_flag, "sample count (default 10^6, minimum 10^4)");
    mc->add_option("--seed", seed_flag, "RNG seed (default $COLLIDER_LAB_SEED or 42)");
    mc->add_option("--tol-se", tol_flag, "tolerance in standard errors (default 4)");

    auto* plot = app.add_subcommand("plot", "render a sweep CSV as an SVG chart");
    std::string plot_in, plot_out;
    plot->add_option("--in", plot_in, "sweep CSV path")->required();
    plot->add_option("--out", plot_out, "SVG output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (compute->parsed()) return cmd_compute(compute_flags, compute_out, save_config);
        if (sweep->parsed())
            return cmd_sweep(sweep_flags, vary_name, from, to, steps, sweep_out, svg_out);
        if (mc->parsed()) return cmd_mc_check(mc_flags, n_flag, seed_flag, tol_flag);
        if (plot->parsed()) return cmd_plot(plot_in, plot_out);
    } catch (const collider::DegenerateEventError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const collider::UndefinedOddsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
