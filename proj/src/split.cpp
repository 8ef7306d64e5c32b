#include "seqwarp/split.hpp"

#include <algorithm>
#include <cmath>

#include "seqwarp/errors.hpp"
#include "seqwarp/sampling.hpp"

namespace seqwarp {

const char* slant_reference_name(SlantReference r) {
    return r == SlantReference::full_tangent ? "full_tangent" : "slant_distribution";
}

bool parse_slant_reference(const std::string& text, SlantReference& out) {
    if (text == "full_tangent") {
        out = SlantReference::full_tangent;
        return true;
    }
    if (text == "slant_distribution") {
        out = SlantReference::slant_distribution;
        return true;
    }
    return false;
}

const char* point_type_name(PointType t) {
    switch (t) {
        case PointType::proper_slant: return "proper_slant";
        case PointType::complex_point: return "complex_point";
        case PointType::totally_real_point: return "totally_real_point";
    }
    return "?";
}

PointType classify_point(double theta, double tol) {
    if (std::sin(theta) < tol) return PointType::complex_point;
    if (std::cos(theta) < tol) return PointType::totally_real_point;
    return PointType::proper_slant;
}

SplitVector split_J(const GeometryAtPoint& geo, const KaehlerAmbient& ambient, const Eigen::VectorXd& X) {
    const Eigen::VectorXd JX = ambient.apply_J(geo.push(X));
    SplitVector s;
    s.tangent_ambient = geo.tangent_projector * JX;
    s.tangent = geo.tangent_part(JX);
    s.normal = JX - s.tangent_ambient;
    return s;
}

double wirtinger_cos(const GeometryAtPoint& geo, const KaehlerAmbient& ambient, const Eigen::VectorXd& X,
                     SlantReference reference) {
    const double len = geo.norm(X);
    if (!(len > 0.0)) throw PreconditionError("Wirtinger angle of a zero vector");
    const Eigen::VectorXd JX = ambient.apply_J(geo.push(X));
    double proj = 0.0;
    if (reference == SlantReference::full_tangent) {
        proj = (geo.tangent_projector * JX).norm();
    } else {
        double s = 0.0;
        for (const auto& w : geo.frame.of(Role::slant)) {
            const double c = geo.push(w).dot(JX);
            s += c * c;
        }
        proj = std::sqrt(s);
    }
    return std::clamp(proj / len, 0.0, 1.0);
}

SlantReport slant_angle(const GeometryAtPoint& geo, const KaehlerAmbient& ambient, SlantReference reference,
                        int extra_probes) {
    SlantReport r;
    r.reference = reference;
    const auto probes = subspace_probes(geo.frame.of(Role::slant), extra_probes);
    double lo = 1e300, hi = -1e300, sum_cos = 0.0;
    for (const auto& X : probes) {
        const double c = wirtinger_cos(geo, ambient, X, reference);
        const double th = std::acos(c);
        lo = std::min(lo, th);
        hi = std::max(hi, th);
        sum_cos += c;
    }
    if (probes.empty()) return r;
    r.cos_theta = sum_cos / static_cast<double>(probes.size());
    r.theta = std::acos(std::clamp(r.cos_theta, 0.0, 1.0));
    r.spread = hi - lo;
    r.point_type = classify_point(r.theta);
    return r;
}

DistributionDefects classify_distributions(const GeometryAtPoint& geo, const KaehlerAmbient& ambient,
                                           SlantReference reference, int extra_probes) {
    DistributionDefects d;
    for (const auto& X : subspace_probes(geo.frame.of(Role::holomorphic), extra_probes))
        d.holomorphic_defect = std::max(d.holomorphic_defect, split_J(geo, ambient, X).normal.norm());
    const auto& slant_frame = geo.frame.of(Role::slant);
    for (const auto& Z : subspace_probes(geo.frame.of(Role::totally_real), extra_probes)) {
        const SplitVector s = split_J(geo, ambient, Z);
        d.anti_invariance_defect = std::max(d.anti_invariance_defect, s.tangent_ambient.norm());
        double pair2 = 0.0;
        for (const auto& W : slant_frame) {
            const double c = geo.g(s.tangent, W);
            pair2 += c * c;
        }
        d.perp_slant_pairing = std::max(d.perp_slant_pairing, std::sqrt(pair2));
    }
    for (int a : geo.partition.totally_real) {
        const Eigen::VectorXd Jxa = ambient.apply_J(geo.jacobian.col(a));
        for (int b = 0; b < geo.m; ++b)
            if (b != a)
                d.perp_coordinate_pairing = std::max(d.perp_coordinate_pairing, std::abs(Jxa.dot(geo.jacobian.col(b))));
    }
    if (!slant_frame.empty()) {
        d.has_slant = true;
        d.slant = slant_angle(geo, ambient, reference, extra_probes);
    }
    return d;
}

}  // namespace seqwarp
