#include "collider/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace collider {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* const kSweepCsvHeader =
    "param,value,delta_as,delta_sp,delta_ce,delta_cde,delta_cde_m1,delta_cde_a1m1,"
    "or_as,or_sp,or_ce,or_cde,or_cde_m1,or_cde_a1m1,p_m1,p_y1";

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
}

double parse_double(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + " '" + s + "'");
    }
    if (pos != s.size()) {
        throw std::invalid_argument(std::string("cannot parse ") + what + " '" + s + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + " '" + s + "'");
    }
    if (pos != s.size()) {
        throw std::invalid_argument(std::string("cannot parse ") + what + " '" + s + "'");
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const char* const kDataColumns[] = {
    "delta_as", "delta_sp", "delta_ce",  "delta_cde", "delta_cde_m1", "delta_cde_a1m1",
    "or_as",    "or_sp",    "or_ce",     "or_cde",    "or_cde_m1",    "or_cde_a1m1",
    "p_m1",     "p_y1",
};

}  // namespace

void write_sweep_csv(std::ostream& out, const std::string& param_name,
                     const std::vector<SweepRow>& rows) {
    out << kSweepCsvHeader << '\n';
    for (const auto& row : rows) {
        out << param_name << ',' << format_double(row.param_value);
        if (row.report) {
            const EstimandReport& r = *row.report;
            const std::optional<double> values[] = {
                r.as.delta,      r.sp.delta,      r.ce.delta,
                r.cde.delta,     r.cde_m1.delta,  r.cde_a1m1.delta,
                r.as.odds_ratio, r.sp.odds_ratio, r.ce.odds_ratio,
                r.cde.odds_ratio, r.cde_m1.odds_ratio, r.cde_a1m1.odds_ratio,
                r.p_m1,          r.p_y1,
            };
            for (const auto& v : values) out << ',' << cell(v);
        } else {
            for (int i = 0; i < 14; ++i) out << ",NA";
        }
        out << '\n';
    }
}

SweepCsv parse_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("parse_sweep_csv: empty input");
    }
    if (trim(line) != kSweepCsvHeader) {
        throw std::invalid_argument("parse_sweep_csv: unexpected header '" + line + "'");
    }
    SweepCsv data;
    for (const char* col : kDataColumns) data.columns[col] = {};
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 16) {
            throw std::invalid_argument("parse_sweep_csv: expected 16 fields, got " +
                                        std::to_string(fields.size()));
        }
        if (data.param.empty()) {
            data.param = fields[0];
        } else if (data.param != fields[0]) {
            throw std::invalid_argument("parse_sweep_csv: mixed param names");
        }
        data.values.push_back(parse_double(fields[1], "value"));
        for (std::size_t i = 0; i < 14; ++i) {
            const std::string& f = fields[i + 2];
            data.columns[kDataColumns[i]].push_back(
                f == "NA" ? std::optional<double>{} : parse_double(f, kDataColumns[i]));
        }
    }
    return data;
}

ConfigValues read_config(std::istream& in) {
    ConfigValues config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        }
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

void apply_config_entry(ConfigValues& config, const std::string& key,
                        const std::string& value) {
    ScmParams& p = config.params;
    if (key == "p_a") p.p_a = parse_double(value, key.c_str());
    else if (key == "p_u") p.p_u = parse_double(value, key.c_str());
    else if (key == "alpha_a") p.alpha_a = parse_double(value, key.c_str());
    else if (key == "alpha_u") p.alpha_u = parse_double(value, key.c_str());
    else if (key == "alpha_au") p.alpha_au = parse_double(value, key.c_str());
    else if (key == "beta_a") p.beta_a = parse_double(value, key.c_str());
    else if (key == "beta_u") p.beta_u = parse_double(value, key.c_str());
    else if (key == "beta_m") p.beta_m = parse_double(value, key.c_str());
    else if (key == "beta_am") p.beta_am = parse_double(value, key.c_str());
    else if (key == "beta_au") p.beta_au = parse_double(value, key.c_str());
    else if (key == "beta_um") p.beta_um = parse_double(value, key.c_str());
    else if (key == "beta_aum") p.beta_aum = parse_double(value, key.c_str());
    else if (key == "nu") p.nu = parse_double(value, key.c_str());
    else if (key == "alpha_0") {
        p.alpha_0 = parse_double(value, key.c_str());
        p.intercept_mode = InterceptMode::Explicit;
    } else if (key == "beta_0") {
        p.beta_0 = parse_double(value, key.c_str());
        p.intercept_mode = InterceptMode::Explicit;
    } else if (key == "n") {
        config.n = parse_u64(value, key.c_str());
    } else if (key == "seed") {
        config.seed = parse_u64(value, key.c_str());
    } else if (key == "tol_se") {
        config.tol_se = parse_double(value, key.c_str());
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

void write_config(std::ostream& out, const ConfigValues& config) {
    const ScmParams& p = config.params;
    out << "p_a = " << format_double(p.p_a) << '\n';
    out << "p_u = " << format_double(p.p_u) << '\n';
    out << "alpha_a = " << format_double(p.alpha_a) << '\n';
    out << "alpha_u = " << format_double(p.alpha_u) << '\n';
    out << "alpha_au = " << format_double(p.alpha_au) << '\n';
    out << "beta_a = " << format_double(p.beta_a) << '\n';
    out << "beta_u = " << format_double(p.beta_u) << '\n';
    out << "beta_m = " << format_double(p.beta_m) << '\n';
    out << "beta_am = " << format_double(p.beta_am) << '\n';
    out << "beta_au = " << format_double(p.beta_au) << '\n';
    out << "beta_um = " << format_double(p.beta_um) << '\n';
    out << "beta_aum = " << format_double(p.beta_aum) << '\n';
    out << "nu = " << format_double(p.nu) << '\n';
    if (p.intercept_mode == InterceptMode::Explicit) {
        out << "alpha_0 = " << format_double(p.alpha_0) << '\n';
        out << "beta_0 = " << format_double(p.beta_0) << '\n';
    }
    if (config.n) out << "n = " << *config.n << '\n';
    if (config.seed) out << "seed = " << *config.seed << '\n';
    if (config.tol_se) out << "tol_se = " << format_double(*config.tol_se) << '\n';
}

void write_report_text(std::ostream& out, const EstimandReport& report) {
    const bool mc = report.source == Source::MonteCarlo;
    if (mc) {
        out << "source: Monte Carlo (n=" << report.mc_n << ", seed=" << report.mc_seed
            << ")\n";
    } else {
        out << "source: exact\n";
    }
    out << "P(M=1) = " << format_double(report.p_m1) << '\n';
    out << "P(Y=1) = " << format_double(report.p_y1) << '\n';
    out << "total_effect = " << format_double(report.total_effect) << '\n';

    struct Line {
        const char* name;
        const EstimandReport::Entry* entry;
        const char* se_key;
    };
    const Line lines[] = {
        {"delta_as", &report.as, "delta_as"},
        {"delta_sp", &report.sp, "delta_sp"},
        {"delta_ce", &report.ce, "delta_ce"},
        {"delta_cde", &report.cde, "delta_cde"},
        {"delta_cde_m1", &report.cde_m1, "delta_cde_m1"},
        {"delta_cde_a1m1", &report.cde_a1m1, "delta_cde_a1m1"},
    };
    for (const auto& line : lines) {
        out << line.name << " = " << format_double(line.entry->delta);
        out << "  (risk1=" << format_double(line.entry->risks.risk1)
            << ", risk0=" << format_double(line.entry->risks.risk0) << ")";
        out << "  OR="
            << (line.entry->odds_ratio ? format_double(*line.entry->odds_ratio)
                                       : std::string("undefined"));
        if (mc) {
            auto it = report.se.find(line.se_key);
            if (it != report.se.end()) out << "  se=" << format_double(it->second);
        }
        out << '\n';
    }
}

namespace {

struct Curve {
    const char* name;
    const char* color;
};

constexpr Curve kCurves[] = {
    {"or_as", "#d62728"},     {"or_sp", "#9467bd"},      {"or_ce", "#1f77b4"},
    {"or_cde", "#2ca02c"},    {"or_cde_m1", "#8c564b"},  {"or_cde_a1m1", "#ff7f0e"},
};

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_sweep_svg(std::ostream& out, const SweepCsv& data) {
    const double width = 720, height = 460;
    const double left = 70, right = 210, top = 30, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = 0, xmax = 1, ymin = -0.1, ymax = 0.1;
    bool have_x = false, have_y = false;
    for (double v : data.values) {
        if (!have_x) { xmin = xmax = v; have_x = true; }
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    for (const auto& curve : kCurves) {
        auto it = data.columns.find(curve.name);
        if (it == data.columns.end()) continue;
        for (const auto& v : it->second) {
            if (!v || !(*v > 0.0)) continue;
            const double ly = std::log(*v);
            if (!have_y) { ymin = ymax = ly; have_y = true; }
            ymin = std::min(ymin, ly);
            ymax = std::max(ymax, ly);
        }
    }
    ymin = std::min(ymin, -0.05);
    ymax = std::max(ymax, 0.05);
    if (xmax <= xmin) xmax = xmin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * plot_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    // frame
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
    // reference line at OR = 1
    out << "<line x1=\"" << left << "\" y1=\"" << fmt2(sy(0.0)) << "\" x2=\""
        << left + plot_w << "\" y2=\"" << fmt2(sy(0.0))
        << "\" stroke=\"#999\" stroke-dasharray=\"5,4\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << fmt2(sy(0.0) + 4)
        << "\" text-anchor=\"end\" font-size=\"12\">1</text>\n";

    // x ticks
    for (double tx : {xmin, 0.5 * (xmin + xmax), xmax}) {
        out << "<line x1=\"" << fmt2(sx(tx)) << "\" y1=\"" << top + plot_h << "\" x2=\""
            << fmt2(sx(tx)) << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << fmt2(sx(tx)) << "\" y=\"" << top + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt2(tx) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << data.param << "</text>\n";
    // y ticks (odds-ratio values at log extremes)
    for (double ly : {ymin, ymax}) {
        out << "<text x=\"" << left - 8 << "\" y=\"" << fmt2(sy(ly) + 4)
            << "\" text-anchor=\"end\" font-size=\"12\">" << fmt2(std::exp(ly))
            << "</text>\n";
    }
    out << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" font-size=\"13\" transform=\"rotate(-90 18 " << top + plot_h / 2
        << ")\" text-anchor=\"middle\">odds ratio (log scale)</text>\n";

    int legend_row = 0;
    for (const auto& curve : kCurves) {
        auto it = data.columns.find(curve.name);
        if (it == data.columns.end()) continue;
        // NA cells break the polyline into segments
        std::string points;
        auto flush = [&]() {
            if (!points.empty()) {
                out << "<polyline fill=\"none\" stroke=\"" << curve.color
                    << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < data.values.size() && i < it->second.size(); ++i) {
            const auto& v = it->second[i];
            if (!v || !(*v > 0.0)) {
                flush();
                continue;
            }
            points += fmt2(sx(data.values[i])) + "," + fmt2(sy(std::log(*v))) + " ";
        }
        flush();
        const double ly = top + 16 + 18 * legend_row;
        out << "<line x1=\"" << width - right + 16 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << width - right + 44 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << curve.color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << width - right + 50 << "\" y=\"" << ly
            << "\" font-size=\"12\">" << curve.name << "</text>\n";
        ++legend_row;
    }
    out << "</svg>\n";
}

}  // namespace collider
