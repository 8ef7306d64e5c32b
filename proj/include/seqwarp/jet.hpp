#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seqwarp/expr.hpp"

namespace seqwarp {

// Monomial table for truncated Taylor polynomials in n variables up to a
// total degree. Monomials are ordered by degree, then lexicographically.
class JetLayout {
public:
    static const JetLayout& get(int nvars, int order);

    int nvars() const { return n_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    const std::vector<std::uint8_t>& exponent(int k) const { return exponents_[k]; }
    int degree(int k) const { return degrees_[k]; }
    // -1 when the exponent vector is not in the table.
    int index_of(const std::vector<std::uint8_t>& alpha) const;
    // Index of the monomial u_v, i.e. the unit exponent e_v.
    int unit(int v) const { return units_[v]; }

    struct Term {
        int a, b, c;  // coeff[c] += x[a] * y[b]
    };
    const std::vector<Term>& products() const { return products_; }

    JetLayout(int nvars, int order);

private:
    std::uint64_t key(const std::vector<std::uint8_t>& alpha) const;

    int n_;
    int order_;
    std::vector<std::vector<std::uint8_t>> exponents_;
    std::vector<int> degrees_;
    std::vector<int> units_;
    std::vector<std::uint64_t> keys_;  // sorted, parallel to key_index_
    std::vector<int> key_index_;
    std::vector<Term> products_;
};

// Truncated multivariate Taylor polynomial. coeffs[k] is the Taylor
// coefficient of monomial k, i.e. the partial derivative divided by alpha!.
class Jet {
public:
    Jet() = default;
    explicit Jet(const JetLayout& layout);

    static Jet constant(const JetLayout& layout, double v);
    static Jet variable(const JetLayout& layout, int v, double value);

    const JetLayout& layout() const { return *layout_; }
    int order() const { return layout_->order(); }
    int nvars() const { return layout_->nvars(); }
    double value() const { return coeffs_[0]; }

    // Mixed partial derivative; indices may repeat and appear in any order.
    double partial(std::span<const int> indices) const;
    double partial(std::initializer_list<int> indices) const;

    // Derivative with respect to one variable, one order lower.
    Jet derivative(int v) const;
    // Same polynomial truncated to a lower order.
    Jet truncated(int order) const;

    std::vector<double>& coeffs() { return coeffs_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    Jet operator-() const;

private:
    const JetLayout* layout_ = nullptr;
    std::vector<double> coeffs_;
};

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet ln(const Jet& a);
Jet pow(const Jet& a, double p);
Jet reciprocal(const Jet& a);

// Jet of an expression at a point, all mixed partials up to `order` (<= 3).
Jet evaluate_jet(const ExprNode& expr, const std::vector<double>& point, int order);

// Finite-difference oracle with the same layout as evaluate_jet. Central
// tensor-product stencils; step is chosen per derivative order.
Jet finite_difference_jet(const ExprNode& expr, const std::vector<double>& point, int order);

// Step used by finite_difference_jet for derivatives of total order k.
double fd_step(int k);

}  // namespace seqwarp
