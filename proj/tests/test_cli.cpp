#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "collider_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const fs::path out_path = work_dir() / "last_output.txt";
    std::string cmd = env_prefix + " \"" + std::string(CLI_BIN) + "\" " + args + " > \"" +
                      out_path.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
#ifdef _WIN32
    r.exit_code = status;
#else
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

}  // namespace

TEST_CASE("compute: defaults succeed and print a report") {
    const auto r = run("compute");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("source: exact") != std::string::npos);
    CHECK(r.output.find("delta_as = 0") != std::string::npos);
    CHECK(r.output.find("delta_ce = 0") != std::string::npos);
    CHECK(r.output.find("P(Y=1) = 0.5") != std::string::npos);
}

TEST_CASE("compute: validation failures exit with code 2") {
    CHECK(run("compute --p-a 1.0").exit_code == 2);
    CHECK(run("compute --nu -1").exit_code == 2);
    CHECK(run("compute --preset nope").exit_code == 2);
    CHECK(run("compute --alpha-0 1").exit_code == 2);  // needs --beta-0 too
    CHECK(run("bogus-subcommand").exit_code == 2);
    CHECK(run("").exit_code == 2);  // a subcommand is required
    CHECK(run("--help").exit_code == 0);
}

TEST_CASE("compute: degenerate conditioning events exit with code 3") {
    // a saturated mediator mechanism empties {A=1, M=1}
    const auto r = run("compute --alpha-a -2000");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("compute: presets and --out") {
    const fs::path out = work_dir() / "fig3.txt";
    const auto r = run("compute --preset fig3-base --out \"" + out.string() + "\"");
    CHECK(r.exit_code == 0);
    const std::string text = slurp(out);
    CHECK(text.find("source: exact") != std::string::npos);
    CHECK(text.find("delta_ce = 0.18899706231156654") != std::string::npos);
    CHECK(text.find("OR=0.66289241209797") != std::string::npos);
}

TEST_CASE("compute: --save-config round trip with a flag override") {
    const fs::path cfg = work_dir() / "model.cfg";
    const fs::path rep1 = work_dir() / "rep1.txt";
    const fs::path rep2 = work_dir() / "rep2.txt";
    auto r = run("compute --preset fig3-base --beta-m 2.5 --save-config \"" +
                 cfg.string() + "\" --out \"" + rep1.string() + "\"");
    REQUIRE(r.exit_code == 0);
    const std::string cfg_text = slurp(cfg);
    CHECK(cfg_text.find("beta_m = 2.5") != std::string::npos);
    CHECK(cfg_text.find("beta_u = 3") != std::string::npos);

    r = run("compute --config \"" + cfg.string() + "\" --out \"" + rep2.string() + "\"");
    REQUIRE(r.exit_code == 0);
    CHECK(slurp(rep1) == slurp(rep2));
}

TEST_CASE("sweep: preset CSV output has a header plus 61 rows") {
    const fs::path csv = work_dir() / "fig3_beta_au.csv";
    const auto r = run("sweep --preset fig3 --vary beta_au --out \"" + csv.string() + "\"");
    CHECK(r.exit_code == 0);
    const std::string text = slurp(csv);
    CHECK(count_lines(text) == 62);
    CHECK(text.rfind("param,value,delta_as", 0) == 0);
    CHECK(text.find("beta_au,-3,") != std::string::npos);
    CHECK(text.find("beta_au,3,") != std::string::npos);
}

TEST_CASE("sweep: usage errors exit with code 2") {
    CHECK(run("sweep --preset fig3").exit_code == 2);  // --vary missing
    CHECK(run("sweep --preset fig2-top --vary beta_am").exit_code == 2);
    CHECK(run("sweep --preset fig3 --vary beta_u").exit_code == 2);
    CHECK(run("sweep --vary not_a_param").exit_code == 2);
    CHECK(run("sweep --vary alpha_a --steps 1").exit_code == 2);
    CHECK(run("sweep --vary alpha_a --from 2 --to -2").exit_code == 2);
}

TEST_CASE("sweep: --svg writes a chart alongside the CSV") {
    const fs::path csv = work_dir() / "fig2.csv";
    const fs::path svg = work_dir() / "fig2.svg";
    const auto r = run("sweep --preset fig2-bottom --vary alpha_a --out \"" +
                       csv.string() + "\" --svg \"" + svg.string() + "\"");
    CHECK(r.exit_code == 0);
    const std::string text = slurp(svg);
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("or_ce") != std::string::npos);
}

TEST_CASE("plot: renders an existing CSV") {
    const fs::path csv = work_dir() / "plot_in.csv";
    const fs::path svg = work_dir() / "plot_out.svg";
    REQUIRE(run("sweep --preset fig3 --vary beta_aum --steps 11 --out \"" + csv.string() +
                "\"").exit_code == 0);
    const auto r = run("plot --in \"" + csv.string() + "\" --out \"" + svg.string() + "\"");
    CHECK(r.exit_code == 0);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
    CHECK(run("plot --in \"" + csv.string() + "\"").exit_code == 2);  // --out required
    CHECK(run("plot --in /no/such/file.csv --out \"" + svg.string() + "\"").exit_code == 2);
}

TEST_CASE("mc-check: null model agrees with the exact calculator") {
    const auto r = run("mc-check --n 100000 --seed 1234");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n=100000 seed=1234") != std::string::npos);
    CHECK(r.output.find("all estimands within tolerance") != std::string::npos);
    CHECK(r.output.find("delta_ce") != std::string::npos);
}

TEST_CASE("mc-check: argument validation") {
    CHECK(run("mc-check --n 1000").exit_code == 2);
    CHECK(run("mc-check --n 100000 --tol-se 0").exit_code == 2);
}

TEST_CASE("mc-check: COLLIDER_LAB_SEED sets the default seed") {
    const auto r = run("mc-check --n 10000", "COLLIDER_LAB_SEED=7");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("seed=7") != std::string::npos);
    const auto bad = run("mc-check --n 10000", "COLLIDER_LAB_SEED=abc");
    CHECK(bad.exit_code == 2);
}
