#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "collider/estimands.hpp"
#include "collider/scm.hpp"
#include "collider/sweep.hpp"

namespace collider {

/// Shortest decimal that round-trips the double exactly (17 significant
/// digits).
std::string format_double(double v);

// --- sweep CSV ------------------------------------------------------

// Fixed column order; undefined odds ratios and error rows serialize as
// the literal NA.
extern const char* const kSweepCsvHeader;

void write_sweep_csv(std::ostream& out, const std::string& param_name,
                     const std::vector<SweepRow>& rows);

struct SweepCsv {
    std::string param;
    std::vector<double> values;
    // Column name -> per-row value; nullopt for NA cells.
    std::map<std::string, std::vector<std::optional<double>>> columns;
};

/// Parses a CSV produced by write_sweep_csv. Throws std::invalid_argument
/// on schema mismatch.
SweepCsv parse_sweep_csv(std::istream& in);

// --- config files ---------------------------------------------------

// Flat "key = value" text; '#' starts a comment. Keys are the ScmParams
// fields (p_a, p_u, alpha_a, ..., beta_aum, nu, optionally alpha_0 and
// beta_0 together) plus the Monte Carlo settings n, seed and tol_se.
struct ConfigValues {
    ScmParams params;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_se;

    bool operator==(const ConfigValues&) const = default;
};

ConfigValues read_config(std::istream& in);
void write_config(std::ostream& out, const ConfigValues& config);

/// Sets one parameter by config key name. Throws std::invalid_argument
/// on unknown keys or unparsable values.
void apply_config_entry(ConfigValues& config, const std::string& key,
                        const std::string& value);

// --- human-readable report ------------------------------------------

void write_report_text(std::ostream& out, const EstimandReport& report);

// --- SVG line chart ---------------------------------------------------

/// Minimal static chart of the odds-ratio curves on a log scale, with a
/// reference line at OR = 1. NA cells break the polyline.
void write_sweep_svg(std::ostream& out, const SweepCsv& data);

}  // namespace collider
