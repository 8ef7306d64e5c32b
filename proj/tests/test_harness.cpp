#include <doctest.h>

#include <cmath>
#include <sstream>

#include "seqwarp/errors.hpp"
#include "seqwarp/harness.hpp"
#include "test_support.hpp"

using namespace seqwarp;

namespace {

const CheckResult& result(const VerificationReport& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return c;
    FAIL("no check named " << name);
    return rep.checks.front();
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* header = nullptr) {
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(ss, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("registry names are unique and known") {
    const auto& reg = check_registry();
    CHECK(reg.size() == 24);
    for (const auto& c : reg) {
        CHECK(find_check(c.name) == &c);
        if (c.kind != CheckKind::informational) CHECK(c.default_tolerance > 0);
    }
    CHECK(find_check("gauss_eq")->kind == CheckKind::identity);
    CHECK(find_check("chen_3_11")->kind == CheckKind::inequality);
    CHECK(find_check("nonexist_3_1")->kind == CheckKind::probe);
    CHECK(find_check("nope") == nullptr);
}

TEST_CASE("tolerance precedence: option, manifest entry, manifest default, built-in") {
    Manifest m = testing::shipped("cr_product_e8");
    const CheckInfo& info = *find_check("gauss_eq");
    CheckOptions opts;
    CHECK(resolve_tolerance(m, opts, info) == info.default_tolerance);
    m.tolerances["default"] = 3e-7;
    CHECK(resolve_tolerance(m, opts, info) == 3e-7);
    m.tolerances["gauss_eq"] = 2e-9;
    CHECK(resolve_tolerance(m, opts, info) == 2e-9);
    opts.tol = 5e-5;
    CHECK(resolve_tolerance(m, opts, info) == 5e-5);

    CHECK(resolve_sin_floor(m, CheckOptions{}) == 0.1);
    m.sin_floor = 0.25;
    CHECK(resolve_sin_floor(m, CheckOptions{}) == 0.25);
    CheckOptions o2;
    o2.sin_floor = 0.05;
    CHECK(resolve_sin_floor(m, o2) == 0.05);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    const Manifest m = testing::shipped("example31");
    CheckOptions opts;
    opts.samples = 40;
    opts.threads = 1;
    const std::string a = run_check(m, opts).to_json(m.immersion.chart).dump(2);
    const std::string b = run_check(m, opts).to_json(m.immersion.chart).dump(2);
    opts.threads = 4;
    const std::string c = run_check(m, opts).to_json(m.immersion.chart).dump(2);
    CHECK(a == b);
    CHECK(a == c);
    opts.seed = 7;
    CHECK(run_check(m, opts).to_json(m.immersion.chart).dump(2) != a);
}

TEST_CASE("report layout") {
    const Manifest m = testing::shipped("cr_product_e8");
    CheckOptions opts;
    opts.samples = 10;
    const auto rep = run_check(m, opts);
    const auto j = rep.to_json(m.immersion.chart);
    CHECK(j.contains("schema_version"));
    CHECK(j["metadata"]["manifest"] == "cr_product_e8");
    CHECK(j["metadata"]["samples"] == 10);
    CHECK(j["all_pass"] == true);
    CHECK(j["checks"].size() == check_registry().size());
    for (const auto& c : j["checks"]) {
        const std::string kind = c["kind"];
        if (c["status"] != "evaluated") continue;
        if (kind == "identity") CHECK(c.contains("max_residual"));
        if (kind == "inequality") CHECK(c.contains("min_gap"));
        if (kind == "probe") CHECK(c.contains("counterexamples_found"));
        if (kind == "informational") CHECK(c["pass"].is_null());
    }
    CHECK(result(rep, "gauss_eq").worst_point.size() == 4);
    CHECK(j["checks"][0]["argmax"].contains("u1"));
    CHECK(rep.exit_code() == 0);
}

TEST_CASE("statuses: skipped and declined") {
    const Manifest m = testing::shipped("cr_product_e8");
    CheckOptions opts;
    opts.samples = 5;
    const auto rep = run_check(m, opts);
    CHECK(result(rep, "thm42").status == "skipped");
    CHECK(!result(rep, "thm42").pass.has_value());
    CHECK(result(rep, "nonexist_3_1").status == "declined");
    CHECK(result(rep, "nonexist_3_1").note == "ordering not in forbidden list");
    CHECK(result(rep, "gauss_eq").status == "evaluated");

    const Manifest f = testing::shipped("forbidden_perp_theta_T");
    const auto rf = run_check(f, opts);
    CHECK(result(rf, "nonexist_3_1").status == "evaluated");
    CHECK(*result(rf, "nonexist_3_1").pass);
    CHECK(result(rf, "lemma_3_4").status == "skipped");
    CHECK(result(rf, "lemma_3_4").note.find("ordering") != std::string::npos);
}

TEST_CASE("check filter and unknown names") {
    const Manifest m = testing::shipped("cr_product_e8");
    CheckOptions opts;
    opts.samples = 5;
    opts.checks = {"lemma_3_4", "gauss_eq"};
    const auto rep = run_check(m, opts);
    REQUIRE(rep.checks.size() == 2);
    CHECK(rep.checks[0].name == "gauss_eq");
    CHECK(rep.checks[1].name == "lemma_3_4");
    opts.checks = {"gauss_eq", "lemma_9_9"};
    CHECK_THROWS_AS(run_check(m, opts), PreconditionError);
    opts.checks.clear();
    opts.samples = 0;
    CHECK_THROWS_AS(run_check(m, opts), PreconditionError);
}

TEST_CASE("violations set the exit code") {
    const Manifest m = testing::shipped("example31");
    CheckOptions opts;
    opts.samples = 20;
    opts.checks = {"gauss_eq", "prop21_1"};
    CHECK(run_check(m, opts).exit_code() == 0);
    opts.checks = {"lemma_3_6"};
    const auto rep = run_check(m, opts);
    CHECK(rep.exit_code() == 1);
    CHECK(!*rep.checks[0].pass);
    // A tolerance large enough turns the violation into a pass.
    opts.tol = 10.0;
    CHECK(run_check(m, opts).exit_code() == 0);
}

TEST_CASE("informational checks never gate") {
    const Manifest m = testing::shipped("example31");
    CheckOptions opts;
    opts.samples = 10;
    opts.checks = {"equality_3_13", "equality_3_14", "ls_2_8"};
    const auto rep = run_check(m, opts);
    for (const auto& c : rep.checks) {
        CHECK(c.status == "evaluated");
        CHECK(!c.pass.has_value());
        CHECK(c.worst > 0);
    }
    CHECK(rep.exit_code() == 0);
}

TEST_CASE("singular points are excluded from csc-bearing checks") {
    const Manifest m = testing::shipped("synthetic_kaehler_e12");
    CheckOptions opts;
    opts.samples = 20;
    opts.sin_floor = 2.0;
    opts.checks = {"chen_3_11", "gauss_eq"};
    const auto rep = run_check(m, opts);
    CHECK(result(rep, "chen_3_11").singular_points_excluded == 20);
    CHECK(result(rep, "chen_3_11").status == "skipped");
    CHECK(result(rep, "gauss_eq").samples_evaluated == 20);
}

TEST_CASE("grid parsing") {
    const auto g = parse_grid("u1=0:2:50,t1=0.1:1.5:3");
    REQUIRE(g.size() == 2);
    CHECK(g[0].coord == "u1");
    CHECK(g[0].hi == 2.0);
    CHECK(g[1].count == 3);
    CHECK_THROWS_AS(parse_grid("u1=0:2"), PreconditionError);
    CHECK_THROWS_AS(parse_grid("u1=0:2:0"), PreconditionError);
    CHECK_THROWS_AS(parse_grid("u1:0:2:5"), PreconditionError);
    CHECK_THROWS_AS(parse_grid("u1=0:2:5x"), PreconditionError);
    CHECK_THROWS_AS(parse_grid(""), PreconditionError);
    const auto a = parse_assignments("u1=1,u2=-2.5");
    CHECK(a.at("u2") == -2.5);
    CHECK_THROWS_AS(parse_assignments("u1"), PreconditionError);
    CHECK_THROWS_AS(parse_assignments("u1=abc"), PreconditionError);
}

TEST_CASE("sweep: slant angle of E18 example on a grid") {
    const Manifest m = testing::shipped("example31");
    std::string header;
    const auto rows = csv_rows(run_sweep(m, parse_grid("u1=0:2:5,t1=0.1:1.5:4"), "cos_slant_theta",
                                         parse_assignments("u2=0.5"), CheckOptions{}),
                               &header);
    CHECK(header == "u1,t1,cos_slant_theta,singular");
    REQUIRE(rows.size() == 20);
    for (const auto& r : rows) {
        CHECK(std::abs(r[2] - 1.0 / (1 + r[0] * r[0] + 0.25 + r[1] * r[1])) < 1e-9);
        CHECK(r[3] == 0.0);
    }
    const auto one = csv_rows(run_sweep(m, parse_grid("u1=1:1:1"), "f", {}, CheckOptions{}));
    REQUIRE(one.size() == 1);
    // u2 defaults to the domain midpoint 0.
    CHECK(one[0][1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("sweep: Chen gap stays non-negative") {
    const Manifest m = testing::shipped("example31");
    const auto rows = csv_rows(run_sweep(m, parse_grid("u1=-2:2:6,t1=-1.5:1.5:6"), "chen_gap", {}, CheckOptions{}));
    REQUIRE(rows.size() == 36);
    for (const auto& r : rows)
        if (r[3] == 0.0) CHECK(r[2] >= -1e-8);
}

TEST_CASE("sweep errors") {
    const Manifest m = testing::shipped("example31");
    try {
        run_sweep(m, parse_grid("u1=0:1:2"), "bogus", {}, CheckOptions{});
        FAIL("expected an error");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("available: slant_theta") != std::string::npos);
    }
    CHECK_THROWS_AS(run_sweep(m, parse_grid("zz=0:1:2"), "f", {}, CheckOptions{}), PreconditionError);
    CHECK_THROWS_AS(run_sweep(m, parse_grid("u1=0:1:2"), "f", {{"zz", 1.0}}, CheckOptions{}), PreconditionError);
}

TEST_CASE("points by name") {
    const Manifest m = testing::shipped("example31");
    const auto p = point_from_assignments(m, parse_assignments("u1=1,u2=2,t1=0.5,t2=0.1,t3=0.2"));
    CHECK(p == std::vector<double>{1, 2, 0.5, 0.1, 0.2});
    CHECK_THROWS_AS(point_from_assignments(m, parse_assignments("u1=1")), PreconditionError);
    CHECK_THROWS_AS(point_from_assignments(m, parse_assignments("u1=1,u2=2,t1=0.5,t2=0.1,t3=0.2,q=1")),
                    PreconditionError);
}

TEST_CASE("frame report") {
    const Manifest m = testing::shipped("example31");
    const auto j = frame_report(m, {1, 2, 1.0471975511965976, 0.7853981633974483, 0.5235987755982988}, CheckOptions{});
    CHECK(j["metric"][0][0].get<double>() == doctest::Approx(3.0));
    CHECK(j["metric"][2][2].get<double>() == doctest::Approx(7.0));
    CHECK(j.contains("singular_values"));
    CHECK(j.contains("values"));
}

TEST_CASE("per-point evaluation on a degenerate point") {
    // x = (u1^3, u2): rank drops on u1 = 0.
    Manifest m = testing::shipped("cr_product_e8");
    m.immersion.coords[0] = parse_expression("u1^3", m.immersion.chart);
    const auto e = evaluate_point(m, {0, 0.2, 0.1, 0.3}, CheckOptions{}, 0.1);
    CHECK(e.degenerate);
    CHECK(e.values.empty());
    CHECK(e.exclusions.count("gauss_eq"));
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300})
        CHECK(std::stod(format_double(v)) == v);
}
