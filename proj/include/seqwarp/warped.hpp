#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "seqwarp/expr.hpp"
#include "seqwarp/immersion.hpp"
#include "seqwarp/jet.hpp"

namespace seqwarp {

// Warping data a manifest may declare. base_diag[a] is the diagonal entry of
// the factor metric g2 or g3 along chart coordinate a (Euclidean if absent).
struct WarpingSpec {
    std::optional<ExprNode> f;
    std::optional<ExprNode> h;
    std::vector<std::optional<ExprNode>> base_diag;
};

enum class WarpSource { declared, extracted };
const char* warp_source_name(WarpSource s);

struct WarpingFunctions {
    double f_value = 1.0;
    double h_value = 1.0;
    WarpSource f_source = WarpSource::extracted;
    WarpSource h_source = WarpSource::extracted;
    Jet f, h;        // order 2
    Jet ln_f, ln_h;  // order 2
    Eigen::VectorXd dln_f, dln_h;          // differentials, chart components
    Eigen::VectorXd grad_ln_f, grad_ln_h;  // g-gradients
    Eigen::VectorXd grad_T_ln_h;           // D^T component of grad ln h
    Eigen::VectorXd grad_perp_ln_h;        // D^perp component
};

struct Properness {
    bool f_on_first = false;   // X1(ln f) != 0
    bool h_on_first = false;   // X1(ln h) != 0
    bool h_on_second = false;  // X2(ln h) != 0
    bool all() const { return f_on_first && h_on_first && h_on_second; }
};

struct BlockMetricReport {
    double off_block_norm = 0.0;
    double f_consistency = 0.0;
    double h_consistency = 0.0;
    double f_declared_mismatch = 0.0;  // |declared f - extracted f|, 0 when not declared
    double h_declared_mismatch = 0.0;
    double ln_f_leak = 0.0;  // max |d_a ln f| over factor-2 and factor-3 coordinates
    double ln_h_leak = 0.0;  // max |d_a ln h| over factor-3 coordinates
    Properness properness;
    bool warped = false;     // block-diagonal with consistent warping, within tolerance
};

struct BlockMetricOptions {
    double block_tol = 1e-8;
    double proper_threshold = 1e-8;
};

struct WarpedStructure {
    BlockMetricReport report;
    WarpingFunctions warping;
};

// Needs an order-3 geometry (second derivatives of the metric). Throws
// PreconditionError when an extracted f^2 or h^2 is not positive.
WarpedStructure verify_block_metric(const GeometryAtPoint& geo, const WarpingSpec& spec,
                                    const BlockMetricOptions& opts = {});

struct ConnectionResiduals {
    double first = 0.0;   // nabla_{X1} X2 = X1(ln f) X2
    double second = 0.0;  // nabla_{X1} X3 = X1(ln h) X3
    double third = 0.0;   // nabla_{X2} X3 = X2(ln h) X3
};

ConnectionResiduals connection_identity_residuals(const GeometryAtPoint& geo, const WarpedStructure& ws,
                                                  double block_tol = 1e-8);

struct CurvatureIdentityResidual {
    // max |R(X,Y3)Z - (1/h) H^h(X,Z) Y3|, the sign that holds with
    // R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
    double residual = 0.0;
    // Same with + (1/h) H^h(X,Z) Y3, i.e. the opposite curvature sign.
    double opposite_sign_residual = 0.0;
};

CurvatureIdentityResidual curvature_identity_residual(const GeometryAtPoint& geo, const WarpedStructure& ws,
                                                      double block_tol = 1e-8);

enum class WarpScalar { h, ln_h };

// Hessian of h or ln h with the Levi-Civita connection of the factor-1 and
// factor-2 block of the metric, evaluated on chart vectors supported there.
double hessian_on_base(const GeometryAtPoint& geo, const WarpedStructure& ws, WarpScalar scalar,
                       const Eigen::VectorXd& X, const Eigen::VectorXd& Z);
// Coordinate form, a and b chart indices in factors 1 and 2.
double hessian_on_base(const GeometryAtPoint& geo, const WarpedStructure& ws, WarpScalar scalar, int a, int b);

enum class LaplacianKind {
    base_hessian_trace,  // sum of H^h(e, e) over an orthonormal frame of factor 2
    leaf_intrinsic,      // Laplace-Beltrami operator of the factor-2 leaf
};

const char* laplacian_kind_name(LaplacianKind k);

// Throws PreconditionError when factor 2 is empty.
double laplacian_perp(const GeometryAtPoint& geo, const WarpedStructure& ws, WarpScalar scalar,
                      LaplacianKind kind);

// Order-2 jet with prescribed value, gradient and Hessian.
Jet jet_from_derivatives(int nvars, double value, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess);

}  // namespace seqwarp
