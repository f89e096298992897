#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "envc/errors.hpp"
#include "envc/io.hpp"
#include "envc/pipeline.hpp"
#include "envc/rng.hpp"

using namespace envc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("envc_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out);
    out << text;
}

ContourTable small_table(std::uint64_t seed) {
    const SampleSet samples = joint_sample(swell_model(), 50000, seed);
    const DirectionGrid grid(12);
    const DirectionalSupport sup = build_support(samples, grid, {0.01, 20, 0});
    const ContourPolygon classical = build_polygon(sup, grid, ContourKind::classical);
    const ContourPolygon buffered = build_polygon(sup, grid, ContourKind::buffered);
    return make_contour_table(grid, sup, 1.0, classical, buffered);
}

} // namespace

TEST_CASE("double formatting round-trips exactly") {
    const CounterRng rng(12);
    for (int i = 0; i < 2000; ++i) {
        double x = (rng.uniform(2 * i) - 0.5) *
                   std::pow(10.0, 30.0 * (rng.uniform(2 * i + 1) - 0.5));
        const std::string s = format_double(x);
        double back = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(res.ec == std::errc{});
        CHECK(back == x);
    }
    CHECK(format_double(0.0) == "0");
}

TEST_CASE("contour CSV round trip is exact") {
    const auto dir = temp_dir("roundtrip");
    const ContourTable t = small_table(501);
    const std::string path = (dir / "contour.csv").string();
    write_contour_csv(path, t);
    const ContourTable r = read_contour_csv(path);
    REQUIRE(r.size() == t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        CHECK(r.theta[j] == t.theta[j]);
        CHECK(r.ux[j] == t.ux[j]);
        CHECK(r.uy[j] == t.uy[j]);
        CHECK(r.c[j] == t.c[j]);
        CHECK(r.cbar[j] == t.cbar[j]);
        CHECK(r.cbar_scaled[j] == t.cbar_scaled[j]);
        CHECK(r.vx_classical[j] == t.vx_classical[j]);
        CHECK(r.vy_classical[j] == t.vy_classical[j]);
        CHECK(r.vx_buffered[j] == t.vx_buffered[j]);
        CHECK(r.vy_buffered[j] == t.vy_buffered[j]);
        CHECK(r.convex_ok[j] == t.convex_ok[j]);
    }
    // the reconstructed grid matches the uniform grid
    const DirectionGrid grid = grid_from_table(r);
    CHECK(grid.size() == 12);
    fs::remove_all(dir);
}

TEST_CASE("contour CSV schema violations name the first bad column") {
    const auto dir = temp_dir("schema");
    const std::string path = (dir / "contour.csv").string();
    const ContourTable t = small_table(502);
    write_contour_csv(path, t);

    std::string text = slurp(path);
    SUBCASE("bad header column") {
        text.replace(text.find("Cbar"), 4, "Xbar");
        spit(path, text);
        try {
            read_contour_csv(path);
            FAIL("expected input_error");
        } catch (const input_error& e) {
            CHECK(std::string(e.what()).find("column 5") != std::string::npos);
        }
    }
    SUBCASE("bad cell") {
        const auto pos = text.find('\n', text.find('\n') + 1); // end of first data row
        auto comma = text.rfind(',', pos);
        text.replace(comma + 1, pos - comma - 1, "oops");
        spit(path, text);
        try {
            read_contour_csv(path);
            FAIL("expected input_error");
        } catch (const input_error& e) {
            const std::string msg = e.what();
            CHECK(msg.find("line 2") != std::string::npos);
            CHECK(msg.find("convex_ok") != std::string::npos);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("scalar file parsing reports the offending line") {
    const auto dir = temp_dir("scalar");
    const fs::path p = dir / "values.txt";
    spit(p, "1.25\n\n  -3e-2 \n0.5\n");
    const auto v = read_scalar_file(p.string());
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.25);
    CHECK(v[1] == -0.03);

    spit(p, "1.0\nnot-a-number\n2.0\n");
    try {
        read_scalar_file(p.string());
        FAIL("expected input_error");
    } catch (const input_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    spit(p, "\n\n");
    CHECK_THROWS_AS(read_scalar_file(p.string()), input_error);
    fs::remove_all(dir);
}

TEST_CASE("config file loading") {
    const auto dir = temp_dir("config");
    const fs::path p = dir / "run.json";

    spit(p, R"({
      "model": "windsea",
      "pe": 0.001,
      "samples": 50000,
      "directions": 36,
      "seed": 9,
      "buffered": true,
      "scale_a": 1.5,
      "min_tail": 25,
      "out_dir": "out",
      "svg": true,
      "threads": 2
    })");
    const RunConfig c = load_config_file(p.string());
    CHECK(c.model == "windsea");
    CHECK(c.pe == 0.001);
    CHECK(c.samples == 50000);
    CHECK(c.directions == 36);
    CHECK(c.seed == 9);
    CHECK(c.buffered);
    CHECK(c.scale_a == 1.5);
    CHECK(c.min_tail == 25);
    CHECK(c.out_dir == "out");
    CHECK(c.svg);
    CHECK(c.threads == 2);
    CHECK(c.resolved_pe() == 0.001);

    spit(p, R"({"model": {"weibull": {"location": 0.1, "scale": 0.5, "shape": 1.4},
                "lognormal": {"a1": 0, "a2": 1, "a3": 0.5, "b1": 0.2, "b2": 0, "b3": 0}}})");
    const RunConfig custom = load_config_file(p.string());
    CHECK(custom.model == "custom");
    REQUIRE(custom.custom_model.has_value());
    CHECK(custom.custom_model->marginal.shape == 1.4);
    CHECK(resolve_model(custom).conditional.b1 == 0.2);

    spit(p, R"({"unknown_key": 1})");
    try {
        load_config_file(p.string());
        FAIL("expected usage_error");
    } catch (const usage_error& e) {
        CHECK(std::string(e.what()).find("unknown_key") != std::string::npos);
    }

    spit(p, R"({"samples": "many"})");
    try {
        load_config_file(p.string());
        FAIL("expected usage_error");
    } catch (const usage_error& e) {
        CHECK(std::string(e.what()).find("samples") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("config validation") {
    RunConfig c;
    CHECK_THROWS_AS(c.resolved_pe(), usage_error); // neither pe nor return period
    c.pe = 0.01;
    c.return_period_years = 25.0;
    CHECK_THROWS_AS(c.resolved_pe(), usage_error); // both
    c.pe.reset();
    CHECK(c.resolved_pe() == doctest::Approx(1.0 / (25.0 * 365.25 * 24.0)));
    c.directions = 2;
    CHECK_THROWS_AS(c.validate_common(), usage_error);

    RunConfig unknown;
    unknown.model = "gulf";
    CHECK_THROWS_AS(resolve_model(unknown), usage_error);
}

TEST_CASE("contour run writes byte-identical files across runs and thread counts") {
    const auto dir1 = temp_dir("det1");
    const auto dir2 = temp_dir("det2");

    RunConfig c;
    c.model = "swell";
    c.pe = 0.01;
    c.samples = 100000;
    c.directions = 45;
    c.seed = 77;
    c.buffered = true;
    c.min_tail = 20;
    c.threads = 1;
    c.out_dir = dir1.string();
    const ContourOutputs a = run_contour(c);

    c.threads = 3;
    c.out_dir = dir2.string();
    const ContourOutputs b = run_contour(c);

    CHECK(slurp(a.csv_path) == slurp(b.csv_path));

    // re-run into the same directory: the bytes do not change
    const std::string before = slurp(a.csv_path);
    c.threads = 2;
    c.out_dir = dir1.string();
    run_contour(c);
    CHECK(slurp(a.csv_path) == before);

    CHECK(a.classical_convex);
    CHECK(a.buffered_convex);
    REQUIRE(a.classical_inside_buffered.has_value());
    CHECK(*a.classical_inside_buffered);
    CHECK(a.report.at("config").at("pe") == 0.01);
    CHECK(a.report.at("containment").at("classical_inside_buffered") == true);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("a 25-year return period run reports the published exceedence probability") {
    const auto dir = temp_dir("rp25");
    RunConfig c;
    c.model = "swell";
    c.return_period_years = 25.0;
    c.samples = 4'500'000; // just above the 20-point-tail floor of ~4.4e6
    c.directions = 12;
    c.seed = 19;
    c.out_dir = dir.string();
    const ContourOutputs out = run_contour(c);
    const double pe = out.report.at("pe").get<double>();
    CHECK(std::llround(pe * 1e10) == 45631); // 4.5631e-6 to 5 significant digits
    CHECK(out.report.at("config").at("return_period_years") == 25.0);
    fs::remove_all(dir);
}

TEST_CASE("contour run emits an SVG when asked") {
    const auto dir = temp_dir("svg");
    RunConfig c;
    c.model = "swell";
    c.pe = 0.02;
    c.samples = 50000;
    c.directions = 24;
    c.seed = 3;
    c.buffered = true;
    c.svg = true;
    c.out_dir = dir.string();
    const ContourOutputs out = run_contour(c);
    REQUIRE(!out.svg_path.empty());
    const std::string svg = slurp(out.svg_path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("#999999") != std::string::npos); // classical in gray
    CHECK(svg.find("#000000") != std::string::npos); // buffered in black
    fs::remove_all(dir);
}

TEST_CASE("riskcalc on a file and on a synthetic sample") {
    const auto dir = temp_dir("risk");
    const fs::path p = dir / "g.txt";
    spit(p, "-3\n-1\n1\n");

    RiskcalcSpec spec;
    spec.input_path = p.string();
    spec.out_dir = dir.string();
    const RiskcalcOutputs out = run_riskcalc(spec);
    CHECK(out.report.p_f == doctest::Approx(1.0 / 3.0));
    CHECK(out.report.p_f_buffered == doctest::Approx(2.0 / 3.0));
    CHECK(out.json.at("report").at("n") == 3);
    CHECK_FALSE(out.json.contains("oracle"));

    RiskcalcSpec synth;
    synth.normal_mu = -2.5;
    synth.normal_sigma = 1.5;
    synth.samples = 200000;
    synth.seed = 8;
    synth.out_dir = dir.string();
    const RiskcalcOutputs s = run_riskcalc(synth);
    CHECK(std::abs(s.report.p_f_buffered - 0.1200823) <= 0.004);
    REQUIRE(s.json.contains("oracle"));
    CHECK(s.json.at("oracle").at("p_f_buffered").get<double>() ==
          doctest::Approx(0.120082303271).epsilon(1e-6));

    // all-negative file: no tail balances to zero, and the undefined tail
    // mean serializes as JSON null
    spit(p, "-1\n-2\n");
    spec.input_path = p.string();
    const RiskcalcOutputs neg = run_riskcalc(spec);
    CHECK(neg.report.p_f == 0.0);
    CHECK(neg.report.p_f_buffered == 0.0);
    CHECK(neg.json.at("report").at("superquantile_at_alpha").is_null());
    CHECK(neg.json.at("report").at("q_alpha").get<double>() == -1.0);
    fs::remove_all(dir);
}

TEST_CASE("verify pipeline passes on a fresh contour and flags corruption") {
    const auto dir = temp_dir("verify");
    RunConfig c;
    c.model = "swell";
    c.pe = 0.01;
    c.samples = 1'600'000;
    c.directions = 24;
    c.seed = 500;
    c.buffered = true;
    c.out_dir = dir.string();
    const ContourOutputs contour = run_contour(c);

    RunConfig v = c;
    v.contour_csv = contour.csv_path;
    v.n_verify = 200000;
    v.verify_seed = 501;
    v.gamma_directions = 4;
    const VerifyOutputs ok = run_verify(v);
    CHECK(ok.pass);
    CHECK(ok.warnings.empty());
    CHECK(ok.report.at("exceedence").at("pass") == true);
    CHECK(ok.report.at("margin_buffered").at("pass") == true);

    // same seed for construction and verification draws a warning
    v.verify_seed = c.seed;
    const VerifyOutputs warned = run_verify(v);
    CHECK(warned.warnings.size() == 1);

    // corrupt one classical support downward: that direction must fail
    ContourTable t = read_contour_csv(contour.csv_path);
    t.c[5] *= 0.8;
    const std::string bad_path = (dir / "bad.csv").string();
    write_contour_csv(bad_path, t);
    v.contour_csv = bad_path;
    v.verify_seed = 501;
    const VerifyOutputs bad = run_verify(v);
    CHECK_FALSE(bad.pass);
    bool direction5_failed = false;
    for (const auto& d : bad.report.at("exceedence").at("directions")) {
        if (d.at("direction") == 5) direction5_failed = !d.at("pass").get<bool>();
    }
    CHECK(direction5_failed);
    fs::remove_all(dir);
}

TEST_CASE("verify requires a contour file") {
    RunConfig v;
    v.pe = 0.01;
    CHECK_THROWS_AS(run_verify(v), usage_error);
}

TEST_CASE("sample subcommand writes the draws") {
    const auto dir = temp_dir("sample");
    RunConfig c;
    c.model = "windsea";
    c.pe = 0.01; // unused but harmless
    c.samples = 1000;
    c.seed = 4;
    c.out_dir = dir.string();
    const SampleOutputs out = run_sample(c);
    CHECK(out.n == 1000);
    const std::string csv = slurp(out.csv_path);
    CHECK(csv.rfind("t,h\n", 0) == 0);
    // 1 header + 1000 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1001);
    fs::remove_all(dir);
}
