#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "julia_rays/brolin.hpp"
#include "julia_rays/cli.hpp"
#include "julia_rays/experiments.hpp"
#include "julia_rays/json_io.hpp"
#include "julia_rays/render.hpp"

using namespace julia_rays;
using Catch::Matchers::WithinAbs;

namespace {

int run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"julia-rays"};
    argv.insert(argv.end(), args.begin(), args.end());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::filesystem::path tmp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

const Measurement* find_measurement(const ExperimentReport& rep, const std::string& needle) {
    for (const auto& m : rep.measurements)
        if (m.label.find(needle) != std::string::npos) return &m;
    return nullptr;
}

}  // namespace

TEST_CASE("chebyshev oracle experiment passes", "[harness]") {
    ExperimentReport rep = exp_chebyshev_oracle();
    INFO(experiment_json(rep).dump(2));
    CHECK(rep.overall == ExperimentOutcome::pass);
    const Measurement* landing = find_measurement(rep, "landing-error t=1/9");
    REQUIRE(landing != nullptr);
    CHECK(landing->value <= 1e-6);
    CHECK(rep.c == std::complex<double>(-2.0, 0.0));
}

TEST_CASE("golden siegel experiment passes", "[harness]") {
    ExperimentReport rep = exp_golden_siegel();
    INFO(experiment_json(rep).dump(2));
    CHECK(rep.overall == ExperimentOutcome::pass);
    CHECK_THAT(rep.c.real(), WithinAbs(-0.390541, 1e-5));
    CHECK_THAT(rep.c.imag(), WithinAbs(-0.586788, 1e-5));
    CHECK_THAT(std::stod(rep.inputs.at("t_star")), WithinAbs(0.3549017, 1e-6));
}

TEST_CASE("preimage cluster experiment passes", "[harness]") {
    ExperimentReport rep = exp_preimage_cluster();
    INFO(experiment_json(rep).dump(2));
    CHECK(rep.overall == ExperimentOutcome::pass);
}

TEST_CASE("experiment overall is three-valued", "[harness]") {
    ExperimentReport rep;
    rep.add("ok", 0.0, 1.0);
    rep.finalize();
    CHECK(rep.overall == ExperimentOutcome::pass);
    rep.add("blocked by undecided landing", 9.0, 1.0, /*decided=*/false);
    rep.finalize();
    CHECK(rep.overall == ExperimentOutcome::undecided);
    rep.add("hard failure", 9.0, 1.0);
    rep.finalize();
    CHECK(rep.overall == ExperimentOutcome::fail);
}

TEST_CASE("brolin invariance residuals", "[harness]") {
    QuadraticMap zero = QuadraticMap::from_c({0.0, 0.0});
    BrolinSample s0 = brolin_sample(zero, 50, 1);
    for (const auto& rec : s0.records) {
        REQUIRE(rec.decided());
        CHECK(*rec.residual <= 1e-10);
    }

    QuadraticMap cheb = QuadraticMap::from_c({-2.0, 0.0});
    BrolinSample s2 = brolin_sample(cheb, 100, 7);
    int decided = 0, good = 0;
    for (const auto& rec : s2.records) {
        if (!rec.decided()) continue;
        ++decided;
        if (*rec.residual < 1e-6) ++good;
    }
    REQUIRE(decided > 0);
    CHECK(good * 100 >= decided * 99);

    CHECK_THROWS_AS(brolin_sample(zero, 0, 1), InvalidInputError);
}

TEST_CASE("brolin sampling is deterministic", "[harness]") {
    QuadraticMap cheb = QuadraticMap::from_c({-2.0, 0.0});
    std::string a = brolin_json(brolin_sample(cheb, 40, 42)).dump(2);
    std::string b = brolin_json(brolin_sample(cheb, 40, 42)).dump(2);
    CHECK(a == b);
    std::string c = brolin_json(brolin_sample(cheb, 40, 43)).dump(2);
    CHECK(a != c);
}

TEST_CASE("results are identical for any thread count", "[harness]") {
    QuadraticMap cheb = QuadraticMap::from_c({-2.0, 0.0});
    std::string parallel = brolin_json(brolin_sample(cheb, 64, 5)).dump();
    setenv("JULIA_RAYS_THREADS", "1", 1);
    std::string serial = brolin_json(brolin_sample(cheb, 64, 5)).dump();
    unsetenv("JULIA_RAYS_THREADS");
    CHECK(parallel == serial);
}

TEST_CASE("render: unit disk silhouette for c = 0", "[harness]") {
    QuadraticMap zero = QuadraticMap::from_c({0.0, 0.0});
    RenderOptions opt;
    opt.width = 64;
    opt.height = 64;
    opt.window = {-2.0, 2.0, -2.0, 2.0};
    Image img = render(zero, opt);

    auto interior = [&](int x, int y) {
        Rgb p = img.get(x, y);
        return p.r == 245 && p.g == 245 && p.b == 245;
    };
    CHECK(interior(32, 32));       // origin
    CHECK_FALSE(interior(1, 1));   // far corner escapes
    CHECK_FALSE(interior(62, 32)); // |z| ~ 1.9

    // deterministic pixels
    Image again = render(zero, opt);
    CHECK(img.rgb == again.rgb);

    std::string ppm = ppm_bytes(img);
    CHECK(ppm.substr(0, 13) == "P6\n64 64\n255\n");
    CHECK(ppm.size() == 13 + 64 * 64 * 3);

    RenderOptions bad_opt;
    bad_opt.width = 8;
    CHECK_THROWS_AS(render(zero, bad_opt), InvalidInputError);
}

TEST_CASE("render: segment silhouette for c = -2 within 2 pixels", "[harness]") {
    QuadraticMap cheb = QuadraticMap::from_c({-2.0, 0.0});
    RenderOptions opt;
    opt.width = 65;
    opt.height = 65;
    opt.window = {-2.5, 2.5, -2.5, 2.5};
    Image img = render(cheb, opt);

    const double px = 5.0 / 65;
    int interior_count = 0;
    for (int y = 0; y < 65; ++y) {
        for (int x = 0; x < 65; ++x) {
            Rgb p = img.get(x, y);
            bool interior = p.r == 245 && p.g == 245 && p.b == 245;
            if (!interior) continue;
            ++interior_count;
            double re = -2.5 + 5.0 * (x + 0.5) / 65;
            double im = 2.5 - 5.0 * (y + 0.5) / 65;
            double dist_to_segment = std::hypot(std::max(0.0, std::abs(re) - 2.0), im);
            CHECK(dist_to_segment <= 2 * px);
        }
    }
    // the center row lies on the segment and stays bounded
    for (int x = 0; x < 65; ++x) {
        double re = -2.5 + 5.0 * (x + 0.5) / 65;
        if (std::abs(re) <= 2.0) {
            Rgb p = img.get(x, 32);
            CHECK((p.r == 245 && p.g == 245 && p.b == 245));
        }
    }
    CHECK(interior_count >= 50);
}

TEST_CASE("render overlays draw in distinct colors", "[harness]") {
    QuadraticMap cheb = QuadraticMap::from_c({-2.0, 0.0});
    RenderOptions opt;
    opt.width = 64;
    opt.height = 64;
    opt.window = {-4.0, 4.0, -4.0, 4.0};
    opt.rays = {Angle::parse("1/9"), Angle::parse("8/9")};
    opt.equipotential_levels = {0.5};
    opt.critical_orbit_steps = 3;
    TraceConfig cfg;
    cfg.depth = 20;
    opt.trace = cfg;
    Image img = render(cheb, opt);
    int ray_px = 0, equi_px = 0, orbit_px = 0;
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            Rgb p = img.get(x, y);
            if (p.r == 230 && p.g == 40) ++ray_px;
            if (p.r == 50 && p.b == 230) ++equi_px;
            if (p.r == 40 && p.g == 170) ++orbit_px;
        }
    CHECK(ray_px > 0);
    CHECK(equi_px > 0);
    CHECK(orbit_px > 0);  // orbit of 0 is 0 -> -2 -> 2, all in window
}

TEST_CASE("render: golden Siegel critical rays terminate at the critical point", "[harness]") {
    QuadraticMap map = golden_siegel_map();
    long levels = 200L * 4;
    AngleApproximation t_star = critical_angle(golden_cf(), pow2_rat(-(levels + 12)));
    RenderOptions opt;
    opt.width = 64;
    opt.height = 64;
    opt.window = {-1.6, 1.6, -1.6, 1.6};
    opt.rays = {t_star.angle(), tau_angle(t_star.angle())};
    TraceConfig cfg;
    cfg.depth = 200;
    cfg.tol_conj = 1e-6;
    opt.trace = cfg;
    Image img = render(map, opt);
    // both ray polylines must put red pixels within 2 px of the origin pixel
    bool near_origin = false;
    for (int y = 30; y <= 34 && !near_origin; ++y)
        for (int x = 30; x <= 34 && !near_origin; ++x) {
            Rgb p = img.get(x, y);
            near_origin = (p.r == 230 && p.g == 40);
        }
    CHECK(near_origin);
}

TEST_CASE("cli: trace the critical ray from a rotation number", "[harness]") {
    auto out = tmp_file("jr_critray.json");
    CHECK(run({"trace", "--lambda-theta", "1;tail=const:1", "--critical-ray", "--depth", "60", "--out",
               out.c_str()}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j.at("status") == "traced-to-depth");
    CHECK(j.at("samples").size() == 241);
    // the ray homes in on the critical point 0 but a 1e-6 landing gate stays undecided
    auto deepest = j.at("samples").back();
    CHECK(std::hypot(deepest[1].get<double>(), deepest[2].get<double>()) < 0.15);
    CHECK(j.at("landing").at("status") == "undecided");
}

TEST_CASE("cli: verify chebyshev exits 0 and reports json", "[harness]") {
    auto out = tmp_file("jr_verify_cheb.json");
    CHECK(run({"verify", "chebyshev", "--out", out.c_str()}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j.at("name") == "chebyshev-oracle");
    CHECK(j.at("overall") == "pass");
}

TEST_CASE("cli: crit-angle emits a certified dyadic", "[harness]") {
    auto out = tmp_file("jr_crit_angle.json");
    CHECK(run({"crit-angle", "--theta-cf", "1;tail=const:1", "--err", "1e-8", "--out", out.c_str()}) == 0);
    json j = json::parse(slurp(out));
    CHECK_THAT(j.at("value_double").get<double>(), WithinAbs(0.3549017, 1e-7));
    CHECK(j.at("error_bound_double").get<double>() <= 1e-8);
    CHECK(j.at("value").at("den").get<std::string>().size() > 6);  // dyadic with a deep denominator
}

TEST_CASE("cli: classify and trace", "[harness]") {
    auto out = tmp_file("jr_classify.json");
    CHECK(run({"classify", "--theta-cf", "1,1,1;tail=const:1", "--out", out.c_str()}) == 0);
    json j = json::parse(slurp(out));
    CHECK(j.at("constant_type") == "true");
    CHECK(j.at("brjuno") == "true");

    auto trail_out = tmp_file("jr_trail.json");
    CHECK(run({"trace", "--c", "-2,0", "--angle", "1/9", "--depth", "28", "--out", trail_out.c_str()}) == 0);
    json t = json::parse(slurp(trail_out));
    CHECK(t.at("status") == "traced-to-depth");
    CHECK(t.at("angle").at("num") == "1");
    CHECK(t.at("angle").at("den") == "9");
    CHECK(t.at("samples").size() == 113);
    CHECK(t.at("landing").at("status") == "landed");
    // samples ordered by decreasing potential
    double prev = 1e300;
    for (const auto& s : t.at("samples")) {
        CHECK(s[0].get<double>() < prev);
        prev = s[0].get<double>();
    }
}

TEST_CASE("cli: wake, separate, brolin, equipotential, render", "[harness]") {
    auto wake_out = tmp_file("jr_wake.json");
    CHECK(run({"wake", "--c", "-2,0", "--pair", "1/9,8/9", "--out", wake_out.c_str()}) == 0);
    json w = json::parse(slurp(wake_out));
    CHECK(w.at("a").at("num") == "2");
    CHECK(w.at("a").at("den") == "9");
    CHECK(w.at("alpha_excluded") == "geometric-test");

    auto sep_out = tmp_file("jr_sep.json");
    CHECK(run({"separate", "--c", "-2,0", "--pair", "1/9,8/9", "--out", sep_out.c_str()}) == 0);
    json s = json::parse(slurp(sep_out));
    CHECK(s.at("status") == "separated");
    CHECK(s.at("iterations") == 2);
    CHECK(s.at("trace").size() == 3);

    auto br_out = tmp_file("jr_brolin.json");
    CHECK(run({"brolin", "--c", "-2,0", "--n", "5", "--seed", "42", "--out", br_out.c_str()}) == 0);
    json b = json::parse(slurp(br_out));
    CHECK(b.at("records").size() == 5);
    CHECK(b.at("seed") == 42);

    auto eq_out = tmp_file("jr_equi.json");
    CHECK(run({"equipotential", "--c", "0,0", "--g", "1.0", "--n", "16", "--out", eq_out.c_str()}) == 0);
    json e = json::parse(slurp(eq_out));
    CHECK(e.at("points").size() == 16);

    auto ppm_out = tmp_file("jr_render.ppm");
    CHECK(run({"render", "--c", "0,0", "--width", "32", "--height", "32", "--window", "-2,2,-2,2",
               "--out", ppm_out.c_str()}) == 0);
    std::string ppm = slurp(ppm_out);
    CHECK(ppm.substr(0, 13) == "P6\n32 32\n255\n");
    CHECK(ppm.size() == 13 + 32 * 32 * 3);
}

TEST_CASE("cli: short trails emit with a null landing", "[harness]") {
    auto out = tmp_file("jr_short_trail.json");
    CHECK(run({"trace", "--c", "0,0", "--angle", "1/3", "--depth", "2", "--m", "2", "--out",
               out.c_str()}) == 0);
    json t = json::parse(slurp(out));
    CHECK(t.at("samples").size() == 5);
    CHECK(t.at("landing").is_null());
}

TEST_CASE("cli: usage errors exit 2", "[harness]") {
    CHECK(run({"no-such-command"}) == 2);
    CHECK(run({"classify"}) == 2);                                   // missing --theta-cf
    CHECK(run({"classify", "--theta-cf", "1,0;tail=const:1"}) == 2); // bad quotient
    CHECK(run({"trace", "--angle", "1/9"}) == 2);                    // no map given
    CHECK(run({"crit-angle", "--theta-cf", "2"}) == 2);              // rational rotation number
    CHECK(run({"render", "--c", "0,0", "--window", "a,b,c,d"}) == 2);  // malformed numeric list
    CHECK(run({}) == 2);                                             // subcommand required
}
