#include <doctest.h>

#include <cmath>
#include <numbers>

#include "seqwarp/errors.hpp"
#include "seqwarp/split.hpp"
#include "test_support.hpp"

using namespace seqwarp;
using Eigen::VectorXd;
using testing::make_spec;

namespace {

const double pi = std::numbers::pi;

// Hand expansion for E18 example: g(JY, Z1) = g(JY, Z2) = t1 and JY is
// orthogonal to X1, X2, Y, so |TY| / |Y| = sqrt(2) |t1| / (f h).
double example31_defect(double u1, double u2, double t1) {
    const double f2 = 2 + u1 * u1 + u2 * u2, h2 = 1 + u1 * u1 + u2 * u2 + t1 * t1;
    return std::sqrt(2.0) * std::abs(t1) / std::sqrt(f2 * h2);
}

}  // namespace

TEST_CASE("holomorphic plane: J maps the tangent space to itself") {
    const auto s = make_spec({"u1", "u2"}, {"u1", "u2", "0", "0"}, {0, 1}, {}, {});
    const KaehlerAmbient amb(standard_complex_structure(4), 0.0);
    const auto geo = geometry_at(s, {0.2, 0.3});
    const auto sp = split_J(geo, amb, VectorXd::Unit(2, 0));
    CHECK(sp.normal.norm() == 0.0);
    CHECK((sp.tangent - VectorXd::Unit(2, 1)).norm() == 0.0);
    CHECK(std::acos(wirtinger_cos(geo, amb, VectorXd::Unit(2, 0), SlantReference::full_tangent)) == 0.0);
}

TEST_CASE("Lagrangian plane: J maps the tangent space to the normal space") {
    const auto s = make_spec({"u1", "u2"}, {"u1", "0", "u2", "0"}, {}, {0, 1}, {});
    const KaehlerAmbient amb(standard_complex_structure(4), 0.0);
    const auto geo = geometry_at(s, {0.2, 0.3});
    const auto sp = split_J(geo, amb, VectorXd::Unit(2, 0));
    CHECK(sp.tangent_ambient.norm() == 0.0);
    CHECK(wirtinger_cos(geo, amb, VectorXd::Unit(2, 1), SlantReference::full_tangent) == 0.0);
    CHECK_THROWS_AS(wirtinger_cos(geo, amb, VectorXd::Zero(2), SlantReference::full_tangent), PreconditionError);
}

TEST_CASE("E18 example: J X1 = X2") {
    const Manifest m = testing::shipped("example31");
    const auto amb = m.ambient();
    for (const std::vector<double>& p : {std::vector<double>{1, 2, pi / 3, pi / 4, pi / 6}, {-0.7, 0.4, 1.1, 2.0, 5.0}}) {
        const auto geo = geometry_at(m.immersion, p);
        const auto sp = split_J(geo, amb, VectorXd::Unit(5, 0));
        CHECK(sp.normal.norm() < 1e-12);
        CHECK((sp.tangent - VectorXd::Unit(5, 1)).norm() < 1e-12);
    }
}

TEST_CASE("E18 example: slant angle relative to the slant distribution") {
    const Manifest m = testing::shipped("example31");
    const auto amb = m.ambient();
    for (const std::vector<double>& p : {std::vector<double>{1, 2, pi / 3, pi / 4, pi / 6}, {0.3, -1.2, -0.4, 3.0, 1.0}}) {
        const auto geo = geometry_at(m.immersion, p);
        const double expected = 1 / (1 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        CHECK(wirtinger_cos(geo, amb, VectorXd::Unit(5, 3), SlantReference::slant_distribution) ==
              doctest::Approx(expected).epsilon(1e-12));
        const auto rep = slant_angle(geo, amb, SlantReference::slant_distribution);
        CHECK(rep.cos_theta == doctest::Approx(expected).epsilon(1e-12));
        CHECK(rep.spread < 1e-9);
        CHECK(rep.point_type == PointType::proper_slant);
        // The full tangent space contains D^theta, so its angle is no larger.
        const auto full = slant_angle(geo, amb, SlantReference::full_tangent);
        CHECK(full.cos_theta >= rep.cos_theta - 1e-12);
    }
}

TEST_CASE("E18 example: anti-invariance defect of D^perp") {
    const Manifest m = testing::shipped("example31");
    const auto amb = m.ambient();
    const auto at_zero = classify_distributions(geometry_at(m.immersion, {1, 1, 0, 0.5, 0.5}), amb,
                                                SlantReference::slant_distribution);
    CHECK(at_zero.anti_invariance_defect < 1e-10);
    const std::vector<double> p = {1, 1, pi / 3, 0.5, 0.5};
    const auto d = classify_distributions(geometry_at(m.immersion, p), amb, SlantReference::slant_distribution);
    CHECK(d.anti_invariance_defect > 0.1);
    CHECK(d.anti_invariance_defect == doctest::Approx(example31_defect(1, 1, pi / 3)).epsilon(1e-12));
    CHECK(d.perp_coordinate_pairing == doctest::Approx(pi / 3).epsilon(1e-12));
    CHECK(d.holomorphic_defect < 1e-12);
}

TEST_CASE("CR product of a holomorphic and a Lagrangian plane") {
    const Manifest m = testing::shipped("cr_product_e8");
    const auto d = classify_distributions(geometry_at(m.immersion, {0.1, 0.2, -0.3, 0.4}), m.ambient(),
                                          SlantReference::slant_distribution);
    CHECK(d.holomorphic_defect < 1e-12);
    CHECK(d.anti_invariance_defect < 1e-12);
    CHECK(!d.has_slant);
}

TEST_CASE("slant plane with theta = pi/3") {
    const Manifest m = testing::shipped("forbidden_product");
    const auto geo = geometry_at(m.immersion, {0.1, 0.2, 0.3, 0.4, 0.5});
    for (auto ref : {SlantReference::slant_distribution, SlantReference::full_tangent}) {
        const auto r = slant_angle(geo, m.ambient(), ref);
        CHECK(r.theta == doctest::Approx(pi / 3).epsilon(1e-12));
        CHECK(r.spread < 1e-12);
    }
}

TEST_CASE("splitting invariants") {
    const Manifest m = testing::shipped("example31");
    const auto amb = m.ambient();
    const auto geo = geometry_at(m.immersion, {0.8, -0.6, 0.9, 1.3, 4.1});
    const VectorXd X = VectorXd::LinSpaced(5, -1.0, 1.3), Y = VectorXd::LinSpaced(5, 0.7, -0.2);
    const auto sx = split_J(geo, amb, X), sy = split_J(geo, amb, Y);
    CHECK((sx.tangent_ambient + sx.normal - amb.apply_J(geo.push(X))).norm() < 1e-12);
    CHECK(std::abs(sx.tangent_ambient.dot(sx.normal)) < 1e-10);
    CHECK(std::abs(sx.tangent_ambient.squaredNorm() + sx.normal.squaredNorm() - geo.g(X, X)) < 1e-10);
    CHECK((geo.push(sx.tangent) - sx.tangent_ambient).norm() < 1e-10);
    // T is skew: g(TX, Y) = -g(X, TY)
    CHECK(std::abs(geo.g(sx.tangent, Y) + geo.g(X, sy.tangent)) < 1e-10);
    for (double lambda : {-3.0, 0.01, 17.0}) {
        const double a = std::acos(wirtinger_cos(geo, amb, X, SlantReference::full_tangent));
        const double b = std::acos(wirtinger_cos(geo, amb, lambda * X, SlantReference::full_tangent));
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("point classification thresholds") {
    CHECK(classify_point(0.0) == PointType::complex_point);
    CHECK(classify_point(1e-7) == PointType::complex_point);
    CHECK(classify_point(pi / 2) == PointType::totally_real_point);
    CHECK(classify_point(1.0) == PointType::proper_slant);
}

TEST_CASE("slant reference names") {
    SlantReference r{};
    CHECK(parse_slant_reference("full_tangent", r));
    CHECK(r == SlantReference::full_tangent);
    CHECK(parse_slant_reference(slant_reference_name(SlantReference::slant_distribution), r));
    CHECK(r == SlantReference::slant_distribution);
    CHECK(!parse_slant_reference("bogus", r));
}
