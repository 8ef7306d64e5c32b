#pragma once

#include <string>

#include <Eigen/Dense>

#include "seqwarp/immersion.hpp"
#include "seqwarp/kaehler.hpp"

namespace seqwarp {

// JX = TX + FX with TX tangent and FX normal.
struct SplitVector {
    Eigen::VectorXd tangent;  // chart components of TX
    Eigen::VectorXd tangent_ambient;
    Eigen::VectorXd normal;   // FX, ambient components
};

SplitVector split_J(const GeometryAtPoint& geo, const KaehlerAmbient& ambient, const Eigen::VectorXd& X);

// Which part of JX measures the Wirtinger angle. The full tangent component
// TX and the component inside the slant distribution agree only when D^T and
// D^perp are J-compatible with D^theta.
enum class SlantReference { full_tangent, slant_distribution };

enum class PointType { proper_slant, complex_point, totally_real_point };

const char* slant_reference_name(SlantReference r);
bool parse_slant_reference(const std::string& text, SlantReference& out);
const char* point_type_name(PointType t);

struct SlantReport {
    double theta = 0.0;
    double cos_theta = 0.0;
    SlantReference reference = SlantReference::slant_distribution;
    double spread = 0.0;  // max - min of theta over the probes
    PointType point_type = PointType::proper_slant;
};

// Angle between JX and the reference subspace for one unit vector X.
double wirtinger_cos(const GeometryAtPoint& geo, const KaehlerAmbient& ambient, const Eigen::VectorXd& X,
                     SlantReference reference);

// Slant angle of D^theta over `extra` quasi-random probes plus the frame.
SlantReport slant_angle(const GeometryAtPoint& geo, const KaehlerAmbient& ambient, SlantReference reference,
                        int extra_probes = 16);

struct DistributionDefects {
    double holomorphic_defect = 0.0;     // max |FX|, X unit in D^T
    double anti_invariance_defect = 0.0;  // max |TZ|, Z unit in D^perp
    double perp_slant_pairing = 0.0;      // max |<JZ, W>|, Z in D^perp, W in D^theta unit
    // Unnormalised coordinate pairing max |<J dx/du_a, dx/du_b>| with u_a a
    // D^perp coordinate and u_b any other chart coordinate.
    double perp_coordinate_pairing = 0.0;
    SlantReport slant;
    bool has_slant = false;
};

DistributionDefects classify_distributions(const GeometryAtPoint& geo, const KaehlerAmbient& ambient,
                                           SlantReference reference, int extra_probes = 16);

// Point classification thresholds on sin and cos of the slant angle.
PointType classify_point(double theta, double tol = 1e-6);

}  // namespace seqwarp
