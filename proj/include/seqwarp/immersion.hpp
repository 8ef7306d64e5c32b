#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "seqwarp/expr.hpp"
#include "seqwarp/kaehler.hpp"

namespace seqwarp {

enum class Role { holomorphic = 0, totally_real = 1, slant = 2 };

// Order in which the three distributions appear as factors M1 x_f M2 x_h M3.
enum class Ordering { t_perp_theta, theta_perp_t, perp_theta_t };

const char* ordering_name(Ordering o);
bool parse_ordering(const std::string& text, Ordering& out);
const char* role_name(Role r);

struct FactorPartition {
    std::vector<int> holomorphic;   // chart indices spanning D^T
    std::vector<int> totally_real;  // D^perp
    std::vector<int> slant;         // D^theta
    Ordering ordering = Ordering::t_perp_theta;

    const std::vector<int>& indices(Role r) const;
    Role role_at(int position) const;  // position 0, 1, 2
    const std::vector<int>& factor(int position) const { return indices(role_at(position)); }
    int size(Role r) const { return static_cast<int>(indices(r).size()); }
    int dim() const;
    // Factor position (0..2) of a chart index, -1 if unassigned.
    int position_of(int chart_index) const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ImmersionSpec {
    std::vector<std::string> chart;
    FactorPartition partition;
    std::vector<ExprNode> coords;  // ambient coordinates x_1..x_N
    std::vector<Interval> domain;  // one per chart coordinate

    int dim() const { return static_cast<int>(chart.size()); }
    int ambient_dim() const { return static_cast<int>(coords.size()); }
};

// g-orthonormal tangent frame adapted to the factors (chart components) and
// an orthonormal frame of the normal space (ambient components).
struct AdaptedFrame {
    std::array<std::vector<Eigen::VectorXd>, 3> by_role;
    std::vector<Eigen::VectorXd> tangent;  // factor 1, then 2, then 3
    Eigen::MatrixXd normal;                // N x (N - m)

    const std::vector<Eigen::VectorXd>& of(Role r) const { return by_role[static_cast<int>(r)]; }
};

struct GeometryAtPoint {
    std::vector<double> point;
    int m = 0;
    int N = 0;
    int order = 0;  // jet order used; curvature available when 3
    FactorPartition partition;
    Eigen::MatrixXd jacobian;  // N x m
    std::vector<Eigen::VectorXd> d2x;  // [a*m + b]
    std::vector<Eigen::VectorXd> d3x;  // [(a*m + b)*m + c]
    Eigen::MatrixXd metric;
    Eigen::MatrixXd inverse_metric;
    std::vector<Eigen::MatrixXd> dmetric;   // [c] = d_c g
    std::vector<Eigen::MatrixXd> d2metric;  // [c*m + d] = d_c d_d g
    std::vector<double> christoffel;        // Gamma^c_ab at (c*m + a)*m + b
    std::vector<double> dchristoffel;       // d_e Gamma^c_ab at ((e*m + c)*m + a)*m + b
    std::vector<double> riemann;            // R_abcd = g(R(d_a, d_b) d_c, d_d)
    std::vector<Eigen::VectorXd> sff;       // B(d_a, d_b), ambient, [a*m + b]
    Eigen::MatrixXd tangent_projector;      // N x N
    Eigen::VectorXd singular_values;
    AdaptedFrame frame;

    bool has_curvature() const { return order >= 3; }
    double gamma(int c, int a, int b) const { return christoffel[(c * m + a) * m + b]; }
    double dgamma(int e, int c, int a, int b) const {
        return dchristoffel[((e * m + c) * m + a) * m + b];
    }
    double riemann4(int a, int b, int c, int d) const {
        return riemann[((a * m + b) * m + c) * m + d];
    }

    double g(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const { return X.dot(metric * Y); }
    double norm(const Eigen::VectorXd& X) const;
    Eigen::VectorXd push(const Eigen::VectorXd& X) const { return jacobian * X; }
    Eigen::VectorXd B(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;
    // Gamma^c_ab X^a Y^b: Levi-Civita derivative of Y extended with constant
    // chart components.
    Eigen::VectorXd connection(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;
    // R(X,Y)Z in chart components.
    Eigen::VectorXd curvature(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                              const Eigen::VectorXd& Z) const;
    // g(R(X,Y)Z, W).
    double curvature4(const Eigen::VectorXd& X, const Eigen::VectorXd& Y, const Eigen::VectorXd& Z,
                      const Eigen::VectorXd& W) const;
    // Chart components of the tangent part of an ambient vector.
    Eigen::VectorXd tangent_part(const Eigen::VectorXd& ambient) const;
};

struct GeometryOptions {
    int order = 3;              // 2 skips curvature
    double rank_tol = 1e-8;     // smallest admissible singular value
};

// Throws RankDeficiency when the Jacobian loses rank, DomainError when a
// coordinate expression is undefined at p.
GeometryAtPoint geometry_at(const ImmersionSpec& spec, const std::vector<double>& p,
                            const GeometryOptions& opts = {});

// Shape operator: g(A_xi X, Y) = <B(X,Y), xi>.
// Throws PreconditionError when xi has a tangential component above 1e-10.
Eigen::VectorXd weingarten(const GeometryAtPoint& geo, const Eigen::VectorXd& xi,
                           const Eigen::VectorXd& X);

// (1/m) trace_g B.
Eigen::VectorXd mean_curvature(const GeometryAtPoint& geo);

struct GaussResidual {
    double max_residual = 0.0;
    std::array<int, 4> argmax{0, 0, 0, 0};  // tangent frame indices
};

// Max over orthonormal frame quadruples of
// |Rbar(X,Y,Z,W) - R(X,Y,Z,W) + <B(X,W),B(Y,Z)> - <B(Y,W),B(X,Z)>|.
GaussResidual gauss_equation_residual(const GeometryAtPoint& geo, const KaehlerAmbient& ambient);

}  // namespace seqwarp
