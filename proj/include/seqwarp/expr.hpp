#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace seqwarp {

enum class Op { constant, variable, neg, sin, cos, tan, sqrt, exp, ln, add, sub, mul, div, pow };

// Expression tree over a fixed chart. Variables are stored by chart index;
// exponents of pow are folded to constants at parse time.
struct ExprNode {
    Op op = Op::constant;
    double value = 0.0;
    int var = -1;
    std::vector<ExprNode> children;

    bool operator==(const ExprNode& other) const;
};

// Grammar (^ binds tighter than unary minus, so -a^2 is -(a^2)):
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := unary
//   unary  := "-" unary | power
//   power  := atom ("^" unary)?
//   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
// The identifier "pi" is accepted when it is not a chart coordinate.
ExprNode parse_expression(std::string_view source, const std::vector<std::string>& chart);

// Canonical form: every binary operation parenthesised, numbers printed with
// 17 significant digits, so parse(to_string(e)) == e.
std::string to_string(const ExprNode& node, const std::vector<std::string>& chart);

// Plain double evaluation. Throws DomainError outside the domain of an
// elementary function.
double eval_scalar(const ExprNode& node, const std::vector<double>& point);

// Chart indices referenced by the tree, sorted and unique.
std::vector<int> referenced_variables(const ExprNode& node);

// True when cos(x) is zero up to the rounding of x itself.
bool at_tan_pole(double x);

bool is_unary_function(Op op);
const char* op_name(Op op);

}  // namespace seqwarp
