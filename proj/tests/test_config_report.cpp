#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "capssc/config.hpp"
#include "capssc/report.hpp"

using namespace capssc;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), (std::streamsize)text.size());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct path_guard {
    std::string path;
    ~path_guard() { std::remove(path.c_str()); }
};

size_t count_of(const std::string& hay, const std::string& needle) {
    size_t n = 0;
    for (size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("defaults validate and derive the documented horizon") {
    run_config cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.sigma == 1.0);
    CHECK(cfg.grid_spacing() == 2.0 / 511.0);

    // log(1 / (8h)) / (a * eps) with h = 2/511
    const double expected = std::log(511.0 / 16.0) / 0.5;
    CHECK(cfg.horizon() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(cfg.horizon() == doctest::Approx(6.927562).epsilon(1e-6));

    // an explicit horizon wins over the derived one
    cfg.t_horizon = 1.25;
    CHECK(cfg.horizon() == 1.25);
}

TEST_CASE("profile and solver views pass the fields through") {
    run_config cfg;
    cfg.eta = 0.02;
    cfg.a_exponent = 3.0;
    cfg.blend_width = 1e-3;
    cfg.solver_radial = 96;
    cfg.solver_angular = 128;

    profile_spec p = cfg.profile();
    CHECK(p.eta == 0.02);
    CHECK(p.a_exponent == 3.0);
    CHECK(p.blend_width == 1e-3);
    CHECK(p.band_top_width == cfg.band_top_width);
    CHECK(p.boundary_gap == cfg.boundary_gap);
    CHECK(p.collar_width == cfg.collar_width);

    disk_spec d = cfg.solver();
    CHECK(d.radius == 2.0);
    CHECK(d.n_radial == 96);
    CHECK(d.n_angular == 128);
}

TEST_CASE("validate rejects out-of-range settings") {
    auto expect_reject = [](void (*tweak)(run_config&), const char* phrase) {
        run_config cfg;
        tweak(cfg);
        try {
            cfg.validate();
            FAIL_CHECK("expected a validation error mentioning " << phrase);
        } catch (const std::invalid_argument& ex) {
            CHECK(std::string(ex.what()).find(phrase) != std::string::npos);
        }
    };

    expect_reject([](run_config& c) { c.epsilon = 0.0; }, "run.epsilon");
    expect_reject([](run_config& c) { c.epsilon = 1.0; }, "run.epsilon");
    expect_reject([](run_config& c) { c.eta = 1.5; }, "run.eta");
    expect_reject([](run_config& c) { c.a_exponent = 1.0; }, "run.a");
    expect_reject([](run_config& c) { c.sigma = 2.0; },
                  "fixed to 1 by the unit-scaling convention");
    expect_reject([](run_config& c) { c.t_horizon = -0.1; }, "run.t_horizon");
    expect_reject([](run_config& c) { c.cfl = 0.0; }, "run.cfl");
    expect_reject([](run_config& c) { c.cfl = 1.1; }, "run.cfl");
    expect_reject([](run_config& c) { c.fixed_dt = -1.0; }, "run.fixed_dt");
    expect_reject([](run_config& c) { c.checkpoint_interval = -1; },
                  "run.checkpoint_interval");
    expect_reject([](run_config& c) { c.n_side = 8; }, "grid.n_side");
    expect_reject([](run_config& c) { c.solver_radial = 4; },
                  "solver resolution");
    expect_reject([](run_config& c) { c.solver_angular = 129; },
                  "must be even");
    expect_reject([](run_config& c) { c.geometry_trials = 0; },
                  "suite sizes");
}

TEST_CASE("load_config reads sections, comments, and overrides defaults") {
    const std::string path = temp_path("capssc_cfg_ok.ini");
    path_guard guard{path};
    spit(path,
         "# full-line comment\n"
         "\n"
         "[run]\n"
         "epsilon = 0.25   # inline comment\n"
         "eta = 0.05       ; alternate comment marker\n"
         "a = 3\n"
         "output_dir = scratch/run7\n"
         "seed = 99\n"
         "\n"
         "[grid]\n"
         "n_side = 129\n"
         "\n"
         "[suites]\n"
         "bs_points = 17\n");

    run_config cfg = load_config(path);
    CHECK(cfg.epsilon == 0.25);
    CHECK(cfg.eta == 0.05);
    CHECK(cfg.a_exponent == 3.0);
    CHECK(cfg.output_dir == "scratch/run7");
    CHECK(cfg.seed == 99);
    CHECK(cfg.n_side == 129);
    CHECK(cfg.bs_points == 17);

    // untouched keys keep their defaults
    CHECK(cfg.cfl == 0.5);
    CHECK(cfg.solver_radial == 768);
    CHECK(cfg.geometry_trials == 1000);
}

TEST_CASE("load_config reports the file and line of each problem") {
    const std::string path = temp_path("capssc_cfg_bad.ini");
    path_guard guard{path};

    auto expect_error = [&](const std::string& text, const char* phrase,
                            const char* location) {
        spit(path, text);
        try {
            load_config(path);
            FAIL_CHECK("expected a parse error mentioning " << phrase);
        } catch (const std::exception& ex) {
            const std::string what = ex.what();
            CHECK(what.find(phrase) != std::string::npos);
            if (location) CHECK(what.find(location) != std::string::npos);
        }
    };

    expect_error("epsilon = 0.2\n", "key outside any [section]", ":1:");
    expect_error("[run]\nepsilon = 0.2\n[grid\n", "malformed section header",
                 ":3:");
    expect_error("[run]\n\n\njust words\n", "expected key = value", ":4:");
    expect_error("[run]\nbogus = 1\n", "unknown key run.bogus", ":2:");
    expect_error("[grid]\nepsilon = 0.2\n", "unknown key grid.epsilon", ":2:");
    expect_error("[run]\nepsilon = abc\n", "bad numeric value for run.epsilon",
                 nullptr);
    expect_error("[run]\nepsilon = 0.2x\n", "bad numeric value", nullptr);
    expect_error("[grid]\nn_side = 12.5\n", "bad integer value for grid.n_side",
                 nullptr);

    try {
        load_config(temp_path("capssc_cfg_missing.ini"));
        FAIL_CHECK("expected an open error");
    } catch (const std::runtime_error& ex) {
        CHECK(std::string(ex.what()).find("cannot open config file") !=
              std::string::npos);
    }
}

TEST_CASE("apply_override handles qualified and bare keys") {
    run_config cfg;

    apply_override(cfg, "run.epsilon=0.2");
    CHECK(cfg.epsilon == 0.2);

    apply_override(cfg, " grid.n_side = 257 ");
    CHECK(cfg.n_side == 257);

    // bare keys work because every key name is unique across sections
    apply_override(cfg, "eta=0.03");
    CHECK(cfg.eta == 0.03);
    apply_override(cfg, "solver_angular=256");
    CHECK(cfg.solver_angular == 256);
    apply_override(cfg, "blend_width=2e-3");
    CHECK(cfg.blend_width == 2e-3);
    apply_override(cfg, "harmonic_fields=9");
    CHECK(cfg.harmonic_fields == 9);
    apply_override(cfg, "output_dir=elsewhere");
    CHECK(cfg.output_dir == "elsewhere");

    auto expect_reject = [&](const char* assignment, const char* phrase) {
        try {
            apply_override(cfg, assignment);
            FAIL_CHECK("expected rejection of " << assignment);
        } catch (const std::invalid_argument& ex) {
            CHECK(std::string(ex.what()).find(phrase) != std::string::npos);
        }
    };
    expect_reject("run.epsilon", "must look like section.key=value");
    expect_reject("run.bogus=1", "unknown config key: run.bogus");
    expect_reject("bogus=1", "unknown config key: bogus");
    expect_reject("grid.epsilon=0.5", "unknown config key: grid.epsilon");
    expect_reject("run.epsilon=abc", "bad numeric value");
}

TEST_CASE("config environment variable name is stable") {
    CHECK(std::string(config_env_var) == "CAPSSC_CONFIG");
}

TEST_CASE("write_text_atomic replaces the target and leaves no temp file") {
    const std::string path = temp_path("capssc_report_atomic.txt");
    path_guard guard{path};

    write_text_atomic(path, "first\n");
    CHECK(slurp(path) == "first\n");
    write_text_atomic(path, "second version\n");
    CHECK(slurp(path) == "second version\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    try {
        write_text_atomic(temp_path("capssc_no_such_dir") + "/x.txt", "y");
        FAIL_CHECK("expected an open error");
    } catch (const std::runtime_error& ex) {
        CHECK(std::string(ex.what()).find("cannot open for writing") !=
              std::string::npos);
    }
}

TEST_CASE("csv_table renders, quotes, and round-trips numbers") {
    csv_table t;
    t.header = {"name", "value"};
    t.add_row(std::vector<std::string>{"plain", "1"});
    t.add_row(std::vector<std::string>{"with,comma", "2"});
    t.add_row(std::vector<std::string>{"say \"hi\"", "3"});
    t.add_row(std::vector<std::string>{"two\nlines", "4"});

    const std::string text = t.render();
    CHECK(text ==
          "name,value\n"
          "plain,1\n"
          "\"with,comma\",2\n"
          "\"say \"\"hi\"\"\",3\n"
          "\"two\nlines\",4\n");

    try {
        t.add_row(std::vector<std::string>{"only one cell"});
        FAIL_CHECK("expected a width mismatch error");
    } catch (const std::invalid_argument& ex) {
        CHECK(std::string(ex.what()).find("width mismatch") !=
              std::string::npos);
    }

    // numeric rows print with enough digits to parse back exactly
    csv_table nums;
    nums.header = {"t", "k"};
    const double a = 0.1, b = 12345.678901234567;
    nums.add_row(std::vector<double>{a, b});
    std::istringstream lines(nums.render());
    std::string line;
    std::getline(lines, line);  // header
    std::getline(lines, line);
    const size_t comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stod(line.substr(0, comma)) == a);
    CHECK(std::stod(line.substr(comma + 1)) == b);

    const std::string path = temp_path("capssc_report_table.csv");
    path_guard guard{path};
    nums.save(path);
    CHECK(slurp(path) == nums.render());
}

TEST_CASE("svg chart emits axes, escaped labels, and per-series polylines") {
    svg_series s;
    s.label = "growth & decay";
    for (int i = 0; i <= 10; ++i) {
        s.x.push_back(i);
        s.y.push_back(i * i);
    }
    svg_chart_options opt;
    opt.title = "sup |w| <box>";
    opt.x_label = "time";
    opt.y_label = "sup";

    const std::string svg = svg_line_chart({s}, opt);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("width=\"860\"") != std::string::npos);
    CHECK(svg.find("sup |w| &lt;box&gt;") != std::string::npos);
    CHECK(svg.find("growth &amp; decay") != std::string::npos);
    CHECK(svg.find(">time</text>") != std::string::npos);
    CHECK(count_of(svg, "<polyline") == 1);
    // linear x ticks over [0, 10] land on round numbers
    CHECK(svg.find(">8</text>") != std::string::npos);
}

TEST_CASE("svg chart handles log scales and breaks lines at bad points") {
    svg_series s;
    s.label = "decades";
    for (int i = 0; i <= 4; ++i) {
        s.x.push_back(i);
        s.y.push_back(std::pow(10.0, i));
    }
    svg_chart_options opt;
    opt.title = "log scale";
    opt.log_y = true;

    const std::string svg = svg_line_chart({s}, opt);
    // decade ticks from 1 to 10000
    CHECK(svg.find(">1</text>") != std::string::npos);
    CHECK(svg.find(">100</text>") != std::string::npos);
    CHECK(svg.find(">10000</text>") != std::string::npos);
    CHECK(count_of(svg, "<polyline") == 1);

    // a NaN splits one series into two polylines
    svg_series gap;
    gap.label = "gap";
    gap.x = {0.0, 1.0, 2.0, 3.0, 4.0};
    gap.y = {1.0, 2.0, std::nan(""), 3.0, 4.0};
    svg_chart_options lin;
    lin.title = "gap";
    CHECK(count_of(svg_line_chart({gap}, lin), "<polyline") == 2);

    // under log_y, non-positive values break the line the same way
    svg_series neg;
    neg.label = "neg";
    neg.x = {0.0, 1.0, 2.0};
    neg.y = {1.0, -5.0, 100.0};
    svg_chart_options logopt;
    logopt.title = "neg";
    logopt.log_y = true;
    CHECK(count_of(svg_line_chart({neg}, logopt), "<polyline") == 2);

    // series with no drawable points still yields a valid document
    svg_series empty;
    empty.label = "nothing";
    const std::string blank = svg_line_chart({empty}, lin);
    CHECK(blank.find("</svg>") != std::string::npos);
    CHECK(count_of(blank, "<polyline") == 0);
    CHECK(blank.find("nothing") != std::string::npos);
}
