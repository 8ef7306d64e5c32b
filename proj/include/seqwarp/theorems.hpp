#pragma once

#include <string>

#include <Eigen/Dense>

#include "seqwarp/immersion.hpp"
#include "seqwarp/kaehler.hpp"
#include "seqwarp/warped.hpp"

namespace seqwarp {

// Residuals of the frame identities for M_T x_f M_perp x_h M_theta. Each is
// the largest absolute violation over orthonormal adapted-frame tuples.
struct LemmaResiduals {
    double r34 = 0.0;   // g(B(X,Y), JZ)
    double r35 = 0.0;   // g(B(X,Y), FW)
    double r36 = 0.0;   // g(B(X,Z1), FW)
    double r37 = 0.0;   // g(B(X,Z1), JZ2) + TX(ln f) g(Z1,Z2)
    double r38 = 0.0;   // g(B(X,W), JZ)
    double r39 = 0.0;   // g(B(X,W1), FW2) + TX(ln h) g(W1,W2) + X(ln h) g(W1,TW2)
    double r310 = 0.0;  // g(B(Z1,Z2), FW) - g(B(Z1,W), JZ2)
};

LemmaResiduals lemma_residuals(const GeometryAtPoint& geo, const KaehlerAmbient& ambient,
                               const WarpedStructure& ws);

// Squared norms of B restricted to pairs of distributions over the frame.
struct SffBlockNorms {
    double tt = 0.0, pp = 0.0, thth = 0.0, tp = 0.0, tth = 0.0, pth = 0.0;
    double total = 0.0;  // |B|^2 over the full frame
};

SffBlockNorms sff_block_norms(const GeometryAtPoint& geo);

struct InequalityGap {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;  // lhs - rhs
    bool singular = false;
};

struct ChenReport {
    InequalityGap gap;
    SffBlockNorms blocks;
    double sin_theta = 0.0;
    // The mixed sums written in the frame {J e_perp, csc(theta) F e_theta}
    // used by the proof, and what is left of tp, t-theta outside that frame.
    double tp_frame = 0.0;
    double tth_frame = 0.0;
    double tp_outside = 0.0;
    double tth_outside = 0.0;
    // gap - (tt + pp + thth + 2 pth + 2 tp_outside + 2 tth_outside): zero when
    // the frame sums equal the closed forms the proof substitutes.
    double proof_remainder = 0.0;
};

ChenReport chen_inequality(const GeometryAtPoint& geo, const KaehlerAmbient& ambient,
                           const WarpedStructure& ws, double theta, double sin_floor = 0.1);

struct EqualityDiagnostics {
    double umbilicity_defect = 0.0;     // max |B'(W1,W2) - g(W1,W2) H'|
    double mean_curvature_match = 0.0;  // |H' + grad ln h|
    double minimality = 0.0;            // |trace B|
    double mixed_geodesic_pth = 0.0;
    double r315 = 0.0;  // max |g(B'(W1,W2), X) + X(ln h) g(W1,W2)|, X in D^T
    double r316 = 0.0;  // same with X in D^perp
    SffBlockNorms blocks;
};

// B' is the second fundamental form of the factor-3 leaf inside M.
EqualityDiagnostics equality_diagnostics(const GeometryAtPoint& geo, const WarpedStructure& ws);

// sum_{i<=p<s} (2|B(e_i,e_s)|^2 - <B(e_i,e_i), B(e_s,e_s)>) against p q c,
// over the tangent frame in factor order. Throws PreconditionError unless
// 1 <= p <= m-1.
InequalityGap lawson_simons_sum(const GeometryAtPoint& geo, const KaehlerAmbient& ambient, int p);
// Same over an explicit orthonormal frame (chart components).
InequalityGap lawson_simons_sum(const GeometryAtPoint& geo, const KaehlerAmbient& ambient,
                                const std::vector<Eigen::VectorXd>& frame, int p);

struct Theorem42Report {
    bool singular = false;
    double lhs = 0.0;  // four-sum second fundamental form expression
    double mixed_perp_theta = 0.0;  // sum (|B(e_perp,e_theta)|^2 - <B(e_theta,e_theta),B(e_perp,e_perp)>)
    double hessian_trace = 0.0;     // sum H^h(e_perp, e_perp)
    double leaf_laplacian_h = 0.0;
    double leaf_laplacian_ln_h = 0.0;
    double ambient_term = 0.0;      // sum <Rbar(e_theta,e_perp)e_perp, e_theta>

    // Building blocks.
    double eq43_residual = 0.0;          // |mixed - (m3/h) trace H - ambient_term|
    double eq43_printed_residual = 0.0;  // |(m3/h) trace H + mixed + m2 m3 c/4|
    double eq44_residual = 0.0;          // |tth - m3 (1 + csc^2) |grad^T ln h|^2|
    double eq44_derived_residual = 0.0;  // |tth_frame - m3 (2 csc^2 - 1) |grad^T ln h|^2|
    double eq44_frame_sum = 0.0;
    double eq45_residual = 0.0;          // |tp - m2 |grad ln f|^2|
    double eq46_rhs = 0.0;
    double eq46_residual = 0.0;          // |lhs - eq46_rhs|

    // Displayed inequality lhs >= m3 (S/h - m2 c/4) under three readings of S.
    InequalityGap gap_hessian_trace;
    InequalityGap gap_leaf_h;
    InequalityGap gap_leaf_ln_h;
};

Theorem42Report theorem42_check(const GeometryAtPoint& geo, const KaehlerAmbient& ambient,
                                const WarpedStructure& ws, double theta, double sin_floor = 0.1);

struct NonexistenceProbe {
    bool applicable = false;
    std::string message;
    double lhs31 = 0.0, rhs31 = 0.0;  // worst-case pair over the frame
    double lhs32 = 0.0, rhs32 = 0.0;
    double residual31 = 0.0;
    double residual32 = 0.0;
    double asymmetry = 0.0;      // max |B(X,TX) - B(TX,X)|
    double forced_value = 0.0;   // max |(lhs31 + lhs32) / (2 g(X,X))|
    double measured_dlnh = 0.0;  // max |Z(ln h)| over the D^perp frame
    bool proper = false;         // measured_dlnh above the properness threshold
    bool counterexample = false; // proper and both identities within tol
};

NonexistenceProbe nonexistence_probe(const GeometryAtPoint& geo, const KaehlerAmbient& ambient,
                                     const WarpedStructure& ws, double tol = 1e-8,
                                     double proper_threshold = 1e-8);

}  // namespace seqwarp
