#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "seqwarp/errors.hpp"
#include "seqwarp/jet.hpp"
#include "test_support.hpp"

using namespace seqwarp;
using testing::fd_relative_error;

namespace {

Jet jet_of(const std::string& s, const std::vector<std::string>& chart, const std::vector<double>& p, int order) {
    return evaluate_jet(parse_expression(s, chart), p, order);
}

}  // namespace

TEST_CASE("layout size is the number of multi-indices of degree <= order") {
    // C(n + k, k)
    CHECK(JetLayout::get(1, 3).size() == 4);
    CHECK(JetLayout::get(3, 2).size() == 10);
    CHECK(JetLayout::get(5, 3).size() == 56);
    CHECK(JetLayout::get(6, 3).size() == 84);
    CHECK(JetLayout::get(4, 0).size() == 1);
}

TEST_CASE("constant jet") {
    const Jet j = jet_of("7", {"u", "v"}, {0.3, -1.0}, 2);
    CHECK(j.value() == 7.0);
    for (int i = 1; i < j.layout().size(); ++i) CHECK(j.coeffs()[i] == 0.0);
}

TEST_CASE("u1*cos(t1) at (2, 0)") {
    const Jet j = jet_of("u1*cos(t1)", {"u1", "t1"}, {2.0, 0.0}, 2);
    CHECK(j.value() == 2.0);
    CHECK(j.partial({0}) == 1.0);
    CHECK(j.partial({1}) == 0.0);
    CHECK(j.partial({1, 1}) == -2.0);
    CHECK(j.partial({0, 1}) == 0.0);
}

TEST_CASE("third derivatives of elementary functions") {
    const std::vector<std::string> c = {"x"};
    const double x = 0.7;
    CHECK(jet_of("sin(x)", c, {x}, 3).partial({0, 0, 0}) == doctest::Approx(-std::cos(x)).epsilon(1e-14));
    CHECK(jet_of("exp(2*x)", c, {x}, 3).partial({0, 0, 0}) == doctest::Approx(8 * std::exp(2 * x)).epsilon(1e-14));
    CHECK(jet_of("ln(x)", c, {x}, 3).partial({0, 0, 0}) == doctest::Approx(2 / (x * x * x)).epsilon(1e-14));
    CHECK(jet_of("sqrt(x)", c, {x}, 2).partial({0, 0}) == doctest::Approx(-0.25 * std::pow(x, -1.5)).epsilon(1e-14));
    const double t = std::tan(x), s2 = 1 + t * t;
    CHECK(jet_of("tan(x)", c, {x}, 3).partial({0, 0, 0}) == doctest::Approx(2 * s2 * (1 + 3 * t * t)).epsilon(1e-13));
    CHECK(jet_of("x^3", c, {1.5}, 3).partial({0, 0, 0}) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(jet_of("1/x", c, {x}, 3).partial({0, 0, 0}) == doctest::Approx(-6 / std::pow(x, 4)).epsilon(1e-13));
    CHECK(jet_of("x^-2.5", c, {x}, 1).partial({0}) == doctest::Approx(-2.5 * std::pow(x, -3.5)).epsilon(1e-14));
}

TEST_CASE("mixed partials are symmetric") {
    const std::vector<std::string> c = {"a", "b", "d"};
    const Jet j = jet_of("sin(a*b)*exp(d*a)+b^3*d", c, {0.4, -0.8, 1.1}, 3);
    CHECK(j.partial({0, 1}) == j.partial({1, 0}));
    CHECK(j.partial({0, 1, 2}) == j.partial({2, 0, 1}));
    CHECK(j.partial({1, 2, 1}) == j.partial({1, 1, 2}));
    // d^3/db^2 dd of b^3 d = 6b
    const Jet k = jet_of("b^3*d", c, {0.4, -0.8, 1.1}, 3);
    CHECK(k.partial({2, 1, 1}) == doctest::Approx(6 * -0.8).epsilon(1e-15));
}

TEST_CASE("finite differences of simple functions") {
    const std::vector<std::string> c = {"t1"};
    CHECK(finite_difference_jet(parse_expression("sin(t1)", c), {0.0}, 1).partial({0}) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(finite_difference_jet(parse_expression("t1^3", c), {1.5}, 3).partial({0, 0, 0}) ==
          doctest::Approx(6.0).epsilon(1e-4));
    const Jet k = finite_difference_jet(parse_expression("3.5", c), {0.2}, 3);
    for (int i = 1; i < k.layout().size(); ++i) CHECK(std::abs(k.coeffs()[i]) < 1e-9);
}

TEST_CASE("degree-4 polynomials agree with finite differences") {
    testing::ExprGen gen(11);
    const auto chart = testing::var_chart(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::string poly = "0";
        for (int t = 0; t < 6; ++t) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "+%.4f*v%d^%d*v%d^%d", gen.uniform(-2, 2), t % 3, 1 + t % 3,
                          (t + 1) % 3, (t * 7) % 2 + (t == 5 ? 0 : 1));
            poly += buf;
        }
        const ExprNode e = parse_expression(poly, chart);
        const std::vector<double> p = {gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)};
        const Jet ad = evaluate_jet(e, p, 2);
        const Jet fd = finite_difference_jet(e, p, 2);
        CHECK(fd_relative_error(ad, fd, 1) < 1e-6);
        CHECK(fd_relative_error(ad, fd, 2) < 1e-6);
    }
}

TEST_CASE("random expressions agree with finite differences") {
    testing::ExprGen gen(2024);
    const auto chart = testing::var_chart(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::string src = gen.any(3, 3);
        const ExprNode e = parse_expression(src, chart);
        const std::vector<double> p = {gen.uniform(0.5, 1.5), gen.uniform(0.5, 1.5), gen.uniform(0.5, 1.5)};
        const Jet ad = evaluate_jet(e, p, 3);
        const Jet fd = finite_difference_jet(e, p, 3);
        INFO(src);
        CHECK(ad.value() == doctest::Approx(eval_scalar(e, p)).epsilon(1e-14));
        CHECK(fd_relative_error(ad, fd, 1) < 1e-6);
        CHECK(fd_relative_error(ad, fd, 2) < 1e-6);
        CHECK(fd_relative_error(ad, fd, 3) < 1e-4);
    }
}

TEST_CASE("jet arithmetic identities") {
    const auto& L = JetLayout::get(2, 3);
    const Jet x = Jet::variable(L, 0, 0.6), y = Jet::variable(L, 1, -0.3);
    const Jet a = sin(x * y) + exp(y);
    const Jet s = sin(a), co = cos(a);
    const Jet one = s * s + co * co;
    CHECK(one.value() == doctest::Approx(1.0).epsilon(1e-15));
    for (int i = 1; i < L.size(); ++i) CHECK(std::abs(one.coeffs()[i]) < 1e-13);
    const Jet r = (a * reciprocal(a)) - Jet::constant(L, 1.0);
    for (double c : r.coeffs()) CHECK(std::abs(c) < 1e-13);
    const Jet q = ln(exp(a)) - a;
    for (double c : q.coeffs()) CHECK(std::abs(c) < 1e-13);
    const Jet p = pow(sqrt(exp(a)), 2.0) - exp(a);
    for (double c : p.coeffs()) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("derivative lowers the order") {
    const auto& L = JetLayout::get(2, 3);
    const Jet x = Jet::variable(L, 0, 0.5), y = Jet::variable(L, 1, 2.0);
    const Jet f = x * x * y;
    const Jet d = f.derivative(0);  // 2xy
    CHECK(d.order() == 2);
    CHECK(d.value() == doctest::Approx(2.0));
    CHECK(d.partial({1}) == doctest::Approx(1.0));
    CHECK(d.partial({0, 1}) == doctest::Approx(2.0));
    CHECK(f.truncated(1).order() == 1);
}

TEST_CASE("jet domain errors") {
    const std::vector<std::string> c = {"u"};
    CHECK_THROWS_AS(jet_of("ln(u)", c, {-1.0}, 2), DomainError);
    CHECK_THROWS_AS(jet_of("sqrt(u)", c, {0.0}, 1), DomainError);
    CHECK_THROWS_AS(jet_of("1/(u-1)", c, {1.0}, 1), DomainError);
    try {
        jet_of("ln(u)", c, {-1.0}, 2);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("ln") != std::string::npos);
    }
}
