#include <doctest.h>

#include <cmath>
#include <numbers>

#include "seqwarp/errors.hpp"
#include "seqwarp/expr.hpp"
#include "test_support.hpp"

using namespace seqwarp;

namespace {

ExprNode var(int i) {
    ExprNode n;
    n.op = Op::variable;
    n.var = i;
    return n;
}

ExprNode num(double v) {
    ExprNode n;
    n.op = Op::constant;
    n.value = v;
    return n;
}

ExprNode node(Op op, std::vector<ExprNode> children) {
    ExprNode n;
    n.op = op;
    n.children = std::move(children);
    return n;
}

}  // namespace

TEST_CASE("product of a variable and a cosine") {
    const ExprNode e = parse_expression("u1*cos(t1)", {"u1", "t1"});
    CHECK(e == node(Op::mul, {var(0), node(Op::cos, {var(1)})}));
}

TEST_CASE("sum chain with squared leaves") {
    const ExprNode e = parse_expression("1+u1^2+u2^2+t1^2", {"u1", "u2", "t1"});
    // Left-associative: ((1 + u1^2) + u2^2) + t1^2
    REQUIRE(e.op == Op::add);
    CHECK(e.children[1].op == Op::pow);
    CHECK(e.children[1].value == 2.0);
    CHECK(e.children[1].children[0] == var(2));
    REQUIRE(e.children[0].op == Op::add);
    REQUIRE(e.children[0].children[0].op == Op::add);
    CHECK(e.children[0].children[0].children[0] == num(1.0));
}

TEST_CASE("precedence and associativity") {
    const std::vector<std::string> c = {"a", "b"};
    // ^ binds tighter than unary minus: -a^2 = -(a^2)
    CHECK(eval_scalar(parse_expression("-a^2", c), {3, 0}) == -9.0);
    // ^ is right-associative: 2^3^2 = 2^9
    CHECK(eval_scalar(parse_expression("2^3^2", c), {0, 0}) == 512.0);
    CHECK(eval_scalar(parse_expression("a-b-1", c), {5, 1}) == 3.0);
    CHECK(eval_scalar(parse_expression("a/b/2", c), {8, 2}) == 2.0);
    CHECK(eval_scalar(parse_expression("2*a+b*3", c), {1, 2}) == 8.0);
    CHECK(eval_scalar(parse_expression("--a", c), {4, 0}) == 4.0);
    CHECK(eval_scalar(parse_expression("a^-1", c), {4, 0}) == 0.25);
    CHECK(eval_scalar(parse_expression(" ( a + b ) * 2e-1 ", c), {1, 4}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_scalar(parse_expression("sin(pi/2)", c), {0, 0}) == 1.0);
}

TEST_CASE("truncated call is a syntax error at the end of input") {
    try {
        parse_expression("cos(", {"u"});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
        CHECK(!e.expected().empty());
    }
}

TEST_CASE("syntax error offsets") {
    const std::vector<std::string> c = {"u"};
    auto offset_of = [&](const std::string& s) -> long {
        try {
            parse_expression(s, c);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1;
    };
    CHECK(offset_of("u+") == 2);
    CHECK(offset_of("u u") == 2);
    CHECK(offset_of("(u") == 2);
    CHECK(offset_of("u)") == 1);
    CHECK(offset_of("") == 0);
    CHECK(offset_of("u*#") == 2);
}

TEST_CASE("unknown identifier is named") {
    try {
        parse_expression("u1 + w", {"u1"});
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name() == "w");
        CHECK(e.offset() == 5);
    }
    CHECK_THROWS_AS(parse_expression("foo(u1)", {"u1"}), UnknownIdentifier);
}

TEST_CASE("pow exponent must be constant") {
    CHECK_THROWS(parse_expression("u^u", {"u"}));
    CHECK(eval_scalar(parse_expression("u^(1/2)", {"u"}), {4.0}) == 2.0);
}

TEST_CASE("canonical printing round-trips") {
    const std::vector<std::string> c = {"u1", "u2", "t1"};
    for (const char* s : {"u1*cos(t1)", "1+u1^2+u2^2+t1^2", "-u1^2", "sqrt(2+u1^2)/exp(-t1)",
                          "ln(1+u2^2)-tan(0.1*t1)", "0.1+1e-30*u1", "(u1-u2)^-3"}) {
        const ExprNode e = parse_expression(s, c);
        const std::string printed = to_string(e, c);
        CHECK(parse_expression(printed, c) == e);
        CHECK(to_string(parse_expression(printed, c), c) == printed);
    }
}

TEST_CASE("random expressions round-trip through the printer") {
    testing::ExprGen gen(7);
    const auto chart = testing::var_chart(3);
    for (int i = 0; i < 200; ++i) {
        const ExprNode e = parse_expression(gen.any(4, 3), chart);
        CHECK(parse_expression(to_string(e, chart), chart) == e);
    }
}

TEST_CASE("scalar domain errors") {
    const std::vector<std::string> c = {"u"};
    CHECK_THROWS_AS(eval_scalar(parse_expression("ln(u)", c), {0.0}), DomainError);
    CHECK_THROWS_AS(eval_scalar(parse_expression("sqrt(u)", c), {-1.0}), DomainError);
    CHECK_THROWS_AS(eval_scalar(parse_expression("1/u", c), {0.0}), DomainError);
    CHECK_THROWS_AS(eval_scalar(parse_expression("u^0.5", c), {-1.0}), DomainError);
    CHECK_THROWS_AS(eval_scalar(parse_expression("u^-1", c), {0.0}), DomainError);
    CHECK_THROWS_AS(eval_scalar(parse_expression("tan(u)", c), {std::numbers::pi / 2}), DomainError);
    CHECK(eval_scalar(parse_expression("u^3", c), {-2.0}) == -8.0);
}

TEST_CASE("referenced variables") {
    const std::vector<std::string> c = {"a", "b", "c"};
    CHECK(referenced_variables(parse_expression("c*sin(a)+c", c)) == std::vector<int>{0, 2});
    CHECK(referenced_variables(parse_expression("7", c)).empty());
}
