#include "seqwarp/jet.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "seqwarp/errors.hpp"

namespace seqwarp {

namespace {

void enumerate(int n, int remaining, int var, std::vector<std::uint8_t>& cur,
               std::vector<std::vector<std::uint8_t>>& out) {
    if (var == n) {
        if (remaining == 0) out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[var] = static_cast<std::uint8_t>(e);
        enumerate(n, remaining - e, var + 1, cur, out);
    }
    cur[var] = 0;
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : n_(nvars), order_(order) {
    if (nvars < 0 || order < 0 || order > 3) throw std::invalid_argument("jet order must be 0..3");
    std::vector<std::uint8_t> cur(n_, 0);
    for (int d = 0; d <= order_; ++d) {
        const std::size_t before = exponents_.size();
        enumerate(n_, d, 0, cur, exponents_);
        degrees_.insert(degrees_.end(), exponents_.size() - before, d);
    }
    std::vector<std::pair<std::uint64_t, int>> kv;
    for (int k = 0; k < size(); ++k) kv.emplace_back(key(exponents_[k]), k);
    std::sort(kv.begin(), kv.end());
    for (auto& [k, i] : kv) {
        keys_.push_back(k);
        key_index_.push_back(i);
    }
    units_.assign(n_, -1);
    for (int v = 0; v < n_; ++v) {
        if (order_ == 0) break;
        std::vector<std::uint8_t> e(n_, 0);
        e[v] = 1;
        units_[v] = index_of(e);
    }
    std::vector<std::uint8_t> sum(n_);
    for (int a = 0; a < size(); ++a) {
        for (int b = 0; b < size(); ++b) {
            if (degrees_[a] + degrees_[b] > order_) continue;
            for (int v = 0; v < n_; ++v) sum[v] = exponents_[a][v] + exponents_[b][v];
            products_.push_back({a, b, index_of(sum)});
        }
    }
}

std::uint64_t JetLayout::key(const std::vector<std::uint8_t>& alpha) const {
    std::uint64_t k = 0;
    for (int v = n_ - 1; v >= 0; --v) k = k * 4 + alpha[v];
    return k;
}

int JetLayout::index_of(const std::vector<std::uint8_t>& alpha) const {
    int deg = 0;
    for (auto e : alpha) deg += e;
    if (deg > order_ || static_cast<int>(alpha.size()) != n_) return -1;
    const std::uint64_t k = key(alpha);
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
    if (it == keys_.end() || *it != k) return -1;
    return key_index_[it - keys_.begin()];
}

const JetLayout& JetLayout::get(int nvars, int order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::make_unique<JetLayout>(nvars, order);
    return *slot;
}

Jet::Jet(const JetLayout& layout) : layout_(&layout), coeffs_(layout.size(), 0.0) {}

Jet Jet::constant(const JetLayout& layout, double v) {
    Jet j(layout);
    j.coeffs_[0] = v;
    return j;
}

Jet Jet::variable(const JetLayout& layout, int v, double value) {
    Jet j(layout);
    j.coeffs_[0] = value;
    if (layout.order() > 0) j.coeffs_[layout.unit(v)] = 1.0;
    return j;
}

double Jet::partial(std::span<const int> indices) const {
    std::vector<std::uint8_t> alpha(nvars(), 0);
    for (int i : indices) {
        if (i < 0 || i >= nvars()) throw std::out_of_range("jet partial index out of range");
        ++alpha[i];
    }
    const int k = layout_->index_of(alpha);
    if (k < 0) throw std::out_of_range("jet partial beyond stored order");
    double fact = 1.0;
    for (auto e : alpha)
        for (int j = 2; j <= e; ++j) fact *= j;
    return coeffs_[k] * fact;
}

double Jet::partial(std::initializer_list<int> indices) const {
    return partial(std::span<const int>(indices.begin(), indices.size()));
}

Jet Jet::derivative(int v) const {
    if (order() == 0) throw std::out_of_range("derivative of an order-0 jet");
    const JetLayout& lower = JetLayout::get(nvars(), order() - 1);
    Jet out(lower);
    std::vector<std::uint8_t> beta;
    for (int k = 0; k < lower.size(); ++k) {
        beta = lower.exponent(k);
        beta[v] += 1;
        out.coeffs_[k] = (beta[v]) * coeffs_[layout_->index_of(beta)];
    }
    return out;
}

Jet Jet::truncated(int order) const {
    const JetLayout& lower = JetLayout::get(nvars(), order);
    Jet out(lower);
    for (int k = 0; k < lower.size(); ++k) out.coeffs_[k] = coeffs_[layout_->index_of(lower.exponent(k))];
    return out;
}

Jet& Jet::operator+=(const Jet& o) {
    assert(layout_ == o.layout_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    assert(layout_ == o.layout_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

Jet Jet::operator-() const {
    Jet out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

Jet operator*(const Jet& a, const Jet& b) {
    assert(a.layout_ == b.layout_);
    Jet out(*a.layout_);
    for (const auto& t : a.layout_->products()) out.coeffs_[t.c] += a.coeffs_[t.a] * b.coeffs_[t.b];
    return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

namespace {

// f(a0 + d) = sum_k f^(k)(a0) / k! * d^k, with d the non-constant part of a.
Jet compose(const Jet& a, const std::array<double, 4>& derivs) {
    const int order = a.order();
    Jet delta = a;
    delta.coeffs()[0] = 0.0;
    Jet out = Jet::constant(a.layout(), derivs[0]);
    Jet power = Jet::constant(a.layout(), 1.0);
    double fact = 1.0;
    for (int k = 1; k <= order; ++k) {
        power = power * delta;
        fact *= k;
        out += power * (derivs[k] / fact);
    }
    for (double c : out.coeffs())
        if (!std::isfinite(c)) throw DomainError("non-finite jet coefficient");
    return out;
}

}  // namespace

Jet sin(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return compose(a, {s, c, -s, -c});
}

Jet cos(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    return compose(a, {c, -s, -c, s});
}

Jet tan(const Jet& a) {
    if (at_tan_pole(a.value())) throw DomainError("tan at a pole");
    const double t = std::tan(a.value());
    const double s2 = 1 + t * t;
    return compose(a, {t, s2, 2 * t * s2, s2 * (2 + 6 * t * t)});
}

Jet sqrt(const Jet& a) {
    const double x = a.value();
    if (x < 0) throw DomainError("sqrt of a negative value");
    if (x == 0 && a.order() > 0) throw DomainError("sqrt is not differentiable at 0");
    const double r = std::sqrt(x);
    return compose(a, {r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x)});
}

Jet exp(const Jet& a) {
    const double e = std::exp(a.value());
    return compose(a, {e, e, e, e});
}

Jet ln(const Jet& a) {
    const double x = a.value();
    if (x <= 0) throw DomainError("ln of a non-positive value");
    return compose(a, {std::log(x), 1 / x, -1 / (x * x), 2 / (x * x * x)});
}

Jet reciprocal(const Jet& a) {
    const double x = a.value();
    if (x == 0) throw DomainError("division by zero");
    const double r = 1 / x;
    return compose(a, {r, -r * r, 2 * r * r * r, -6 * r * r * r * r});
}

Jet pow(const Jet& a, double p) {
    const double x = a.value();
    const bool integral = p == std::floor(p);
    if (x < 0 && !integral) throw DomainError("non-integer power of a negative value");
    if (x == 0 && p < 0) throw DomainError("negative power of zero");
    std::array<double, 4> d{};
    double coef = 1.0;
    for (int k = 0; k <= 3; ++k) {
        if (k > 0) coef *= (p - (k - 1));
        if (coef == 0.0 || k > a.order()) {
            d[k] = 0.0;
            continue;
        }
        const double v = coef * std::pow(x, p - k);
        if (!std::isfinite(v)) throw DomainError("power is not differentiable here");
        d[k] = v;
    }
    return compose(a, d);
}

namespace {

Jet eval(const ExprNode& n, const JetLayout& layout, const std::vector<double>& point) {
    switch (n.op) {
        case Op::constant: return Jet::constant(layout, n.value);
        case Op::variable:
            if (n.var < 0 || n.var >= static_cast<int>(point.size()))
                throw DomainError("variable index out of range");
            return Jet::variable(layout, n.var, point[n.var]);
        default: break;
    }
    const Jet a = eval(n.children[0], layout, point);
    switch (n.op) {
        case Op::neg: return -a;
        case Op::sin: return sin(a);
        case Op::cos: return cos(a);
        case Op::tan: return tan(a);
        case Op::sqrt: return sqrt(a);
        case Op::exp: return exp(a);
        case Op::ln: return ln(a);
        case Op::pow: return pow(a, n.value);
        default: break;
    }
    const Jet b = eval(n.children[1], layout, point);
    switch (n.op) {
        case Op::add: return a + b;
        case Op::sub: return a - b;
        case Op::mul: return a * b;
        case Op::div: return a / b;
        default: break;
    }
    throw DomainError("malformed expression");
}

struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;  // multiplied by 1/h^k afterwards
};

const Stencil& stencil(int k) {
    static const Stencil s[4] = {
        {{0}, {1.0}},
        {{1, -1}, {0.5, -0.5}},
        {{1, 0, -1}, {1.0, -2.0, 1.0}},
        {{2, 1, -1, -2}, {0.5, -1.0, 1.0, -0.5}},
    };
    return s[k];
}

}  // namespace

Jet evaluate_jet(const ExprNode& expr, const std::vector<double>& point, int order) {
    const JetLayout& layout = JetLayout::get(static_cast<int>(point.size()), order);
    return eval(expr, layout, point);
}

double fd_step(int k) {
    switch (k) {
        case 0: return 0.0;
        case 1: return 1e-5;
        case 2: return 1e-4;
        default: return 1e-3;
    }
}

Jet finite_difference_jet(const ExprNode& expr, const std::vector<double>& point, int order) {
    const int n = static_cast<int>(point.size());
    const JetLayout& layout = JetLayout::get(n, order);
    Jet out(layout);
    std::vector<double> x(point);
    for (int k = 0; k < layout.size(); ++k) {
        const auto& alpha = layout.exponent(k);
        const int deg = layout.degree(k);
        const double h = fd_step(deg);
        std::vector<int> vars;
        for (int v = 0; v < n; ++v)
            if (alpha[v]) vars.push_back(v);
        // Walk the tensor product of the one-dimensional stencils.
        std::vector<std::size_t> idx(vars.size(), 0);
        double acc = 0.0;
        while (true) {
            double w = 1.0;
            x = point;
            for (std::size_t j = 0; j < vars.size(); ++j) {
                const Stencil& s = stencil(alpha[vars[j]]);
                w *= s.weights[idx[j]];
                x[vars[j]] += s.offsets[idx[j]] * h;
            }
            acc += w * eval_scalar(expr, x);
            std::size_t j = 0;
            for (; j < vars.size(); ++j) {
                if (++idx[j] < stencil(alpha[vars[j]]).offsets.size()) break;
                idx[j] = 0;
            }
            if (j == vars.size()) break;
        }
        double fact = 1.0;
        for (auto e : alpha)
            for (int i = 2; i <= e; ++i) fact *= i;
        out.coeffs()[k] = acc / (std::pow(h, deg) * fact);
    }
    return out;
}

}  // namespace seqwarp
