#include "seqwarp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "seqwarp/errors.hpp"

namespace seqwarp {

bool ExprNode::operator==(const ExprNode& other) const {
    if (op != other.op) return false;
    if (op == Op::constant) return value == other.value;
    if (op == Op::variable) return var == other.var;
    if (op == Op::pow && value != other.value) return false;
    return children == other.children;
}

bool at_tan_pole(double x) {
    return std::abs(std::cos(x)) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
}

bool is_unary_function(Op op) {
    switch (op) {
        case Op::neg: case Op::sin: case Op::cos: case Op::tan:
        case Op::sqrt: case Op::exp: case Op::ln:
            return true;
        default:
            return false;
    }
}

const char* op_name(Op op) {
    switch (op) {
        case Op::constant: return "constant";
        case Op::variable: return "variable";
        case Op::neg: return "neg";
        case Op::sin: return "sin";
        case Op::cos: return "cos";
        case Op::tan: return "tan";
        case Op::sqrt: return "sqrt";
        case Op::exp: return "exp";
        case Op::ln: return "ln";
        case Op::add: return "+";
        case Op::sub: return "-";
        case Op::mul: return "*";
        case Op::div: return "/";
        case Op::pow: return "^";
    }
    return "?";
}

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
    double number = 0.0;
};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(c) || (c == '.' && i + 1 < src.size() &&
                                std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    i = j;
                    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
                }
            }
            Token t{Tok::number, start, std::string(src.substr(start, i - start))};
            t.number = std::strtod(t.text.c_str(), nullptr);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
                ++i;
            out.push_back({Tok::ident, start, std::string(src.substr(start, i - start))});
            continue;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::plus; break;
            case '-': kind = Tok::minus; break;
            case '*': kind = Tok::star; break;
            case '/': kind = Tok::slash; break;
            case '^': kind = Tok::caret; break;
            case '(': kind = Tok::lparen; break;
            case ')': kind = Tok::rparen; break;
            default:
                throw ParseError(start, {"NUMBER", "IDENT", "\"(\"", "\"-\""},
                                 "character '" + std::string(1, static_cast<char>(c)) + "'");
        }
        out.push_back({kind, start, std::string(1, static_cast<char>(c))});
        ++i;
    }
    out.push_back({Tok::end, src.size(), ""});
    return out;
}

bool function_op(const std::string& name, Op& op) {
    static const std::pair<const char*, Op> table[] = {
        {"neg", Op::neg}, {"sin", Op::sin}, {"cos", Op::cos}, {"tan", Op::tan},
        {"sqrt", Op::sqrt}, {"exp", Op::exp}, {"ln", Op::ln},
    };
    for (const auto& [n, o] : table) {
        if (name == n) {
            op = o;
            return true;
        }
    }
    return false;
}

ExprNode make(Op op, std::vector<ExprNode> children) {
    ExprNode n;
    n.op = op;
    n.children = std::move(children);
    return n;
}

ExprNode make_constant(double v) {
    ExprNode n;
    n.op = Op::constant;
    n.value = v;
    return n;
}

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& chart)
        : tokens_(tokenize(src)), chart_(chart) {}

    ExprNode parse() {
        ExprNode e = expr();
        if (peek().kind != Tok::end)
            fail({"\"+\"", "\"-\"", "\"*\"", "\"/\"", "\"^\"", "end of input"});
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        throw ParseError(t.offset, std::move(expected), found);
    }

    ExprNode expr() {
        ExprNode lhs = term();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Op op = next().kind == Tok::plus ? Op::add : Op::sub;
            ExprNode rhs = term();
            lhs = make(op, {std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprNode term() {
        ExprNode lhs = factor();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Op op = next().kind == Tok::star ? Op::mul : Op::div;
            ExprNode rhs = factor();
            lhs = make(op, {std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprNode factor() { return unary(); }

    ExprNode unary() {
        if (peek().kind == Tok::minus) {
            next();
            return make(Op::neg, {unary()});
        }
        return power();
    }

    // Right-associative; the exponent may carry its own unary minus.
    ExprNode power() {
        ExprNode base = atom();
        if (peek().kind != Tok::caret) return base;
        next();
        const std::size_t at = peek().offset;
        ExprNode exponent = unary();
        if (!referenced_variables(exponent).empty())
            throw ParseError(at, {"constant exponent"}, "an exponent depending on a coordinate");
        ExprNode n = make(Op::pow, {std::move(base)});
        n.value = eval_scalar(exponent, {});
        return n;
    }

    ExprNode atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::number:
                next();
                return make_constant(t.number);
            case Tok::lparen: {
                next();
                ExprNode e = expr();
                if (peek().kind != Tok::rparen)
                    fail({"\"+\"", "\"-\"", "\"*\"", "\"/\"", "\"^\"", "\")\""});
                next();
                return e;
            }
            case Tok::ident:
                return identifier();
            default:
                fail({"NUMBER", "IDENT", "\"(\"", "\"-\""});
        }
    }

    ExprNode identifier() {
        const Token t = next();
        if (peek().kind == Tok::lparen) {
            Op op;
            if (!function_op(t.text, op)) throw UnknownIdentifier(t.text, t.offset);
            next();
            ExprNode arg = expr();
            if (peek().kind != Tok::rparen)
                fail({"\"+\"", "\"-\"", "\"*\"", "\"/\"", "\"^\"", "\")\""});
            next();
            return make(op, {std::move(arg)});
        }
        const auto it = std::find(chart_.begin(), chart_.end(), t.text);
        if (it != chart_.end()) {
            ExprNode n;
            n.op = Op::variable;
            n.var = static_cast<int>(it - chart_.begin());
            return n;
        }
        if (t.text == "pi") return make_constant(std::numbers::pi);
        Op op;
        if (function_op(t.text, op)) fail({"\"(\""});
        throw UnknownIdentifier(t.text, t.offset);
    }

    std::vector<Token> tokens_;
    const std::vector<std::string>& chart_;
    std::size_t pos_ = 0;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print(const ExprNode& n, const std::vector<std::string>& chart, std::string& out) {
    switch (n.op) {
        case Op::constant:
            if (n.value < 0 || std::signbit(n.value)) {
                out += "neg(" + format_number(-n.value) + ")";
            } else {
                out += format_number(n.value);
            }
            return;
        case Op::variable:
            out += n.var >= 0 && n.var < static_cast<int>(chart.size())
                       ? chart[n.var]
                       : "x" + std::to_string(n.var);
            return;
        case Op::pow:
            out += "(";
            print(n.children[0], chart, out);
            out += "^" + format_number(n.value) + ")";
            return;
        case Op::add: case Op::sub: case Op::mul: case Op::div:
            out += "(";
            print(n.children[0], chart, out);
            out += op_name(n.op);
            print(n.children[1], chart, out);
            out += ")";
            return;
        default:
            out += op_name(n.op);
            out += "(";
            print(n.children[0], chart, out);
            out += ")";
            return;
    }
}

void collect(const ExprNode& n, std::vector<int>& vars) {
    if (n.op == Op::variable) vars.push_back(n.var);
    for (const auto& c : n.children) collect(c, vars);
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
    return v;
}

}  // namespace

ExprNode parse_expression(std::string_view source, const std::vector<std::string>& chart) {
    return Parser(source, chart).parse();
}

std::string to_string(const ExprNode& node, const std::vector<std::string>& chart) {
    std::string out;
    print(node, chart, out);
    return out;
}

std::vector<int> referenced_variables(const ExprNode& node) {
    std::vector<int> vars;
    collect(node, vars);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

double eval_scalar(const ExprNode& n, const std::vector<double>& point) {
    switch (n.op) {
        case Op::constant:
            return n.value;
        case Op::variable:
            if (n.var < 0 || n.var >= static_cast<int>(point.size()))
                throw DomainError("variable index out of range");
            return point[n.var];
        default:
            break;
    }
    const double a = eval_scalar(n.children[0], point);
    switch (n.op) {
        case Op::neg: return -a;
        case Op::sin: return std::sin(a);
        case Op::cos: return std::cos(a);
        case Op::tan:
            if (at_tan_pole(a)) throw DomainError("tan at a pole");
            return checked(std::tan(a), "tan");
        case Op::sqrt:
            if (a < 0) throw DomainError("sqrt of a negative value");
            return std::sqrt(a);
        case Op::exp: return checked(std::exp(a), "exp");
        case Op::ln:
            if (a <= 0) throw DomainError("ln of a non-positive value");
            return std::log(a);
        case Op::pow:
            if (a < 0 && n.value != std::floor(n.value))
                throw DomainError("non-integer power of a negative value");
            if (a == 0 && n.value < 0) throw DomainError("negative power of zero");
            return checked(std::pow(a, n.value), "pow");
        default:
            break;
    }
    const double b = eval_scalar(n.children[1], point);
    switch (n.op) {
        case Op::add: return a + b;
        case Op::sub: return a - b;
        case Op::mul: return a * b;
        case Op::div:
            if (b == 0) throw DomainError("division by zero");
            return checked(a / b, "division");
        default:
            break;
    }
    throw DomainError("malformed expression");
}

}  // namespace seqwarp
