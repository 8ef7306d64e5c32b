#include "seqwarp/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqwarp/errors.hpp"
#include "seqwarp/split.hpp"

namespace seqwarp {

namespace {

using Frame = std::vector<Eigen::VectorXd>;

struct Frames {
    const Frame& t;
    const Frame& p;
    const Frame& s;
};

Frames frames(const GeometryAtPoint& geo) {
    return {geo.frame.of(Role::holomorphic), geo.frame.of(Role::totally_real), geo.frame.of(Role::slant)};
}

double block_sum(const GeometryAtPoint& geo, const Frame& a, const Frame& b) {
    double s = 0.0;
    for (const auto& x : a)
        for (const auto& y : b) s += geo.B(x, y).squaredNorm();
    return s;
}

double grad_T_norm2(const GeometryAtPoint& geo, const WarpedStructure& ws) {
    double s = 0.0;
    for (const auto& e : geo.frame.of(Role::holomorphic)) {
        const double d = ws.warping.dln_h.dot(e);
        s += d * d;
    }
    return s;
}

double grad_ln_f_norm2(const WarpedStructure& ws) { return ws.warping.dln_f.dot(ws.warping.grad_ln_f); }

// sum over rows of sum_beta <B, J e_perp_beta>^2 + csc^2 sum_l <B, F e_theta_l>^2
double frame_sum(const GeometryAtPoint& geo, const KaehlerAmbient& amb, const Frame& rows, const Frame& cols,
                 double csc2) {
    const Frames f = frames(geo);
    std::vector<Eigen::VectorXd> Jp, Fs;
    for (const auto& z : f.p) Jp.push_back(amb.apply_J(geo.push(z)));
    for (const auto& w : f.s) Fs.push_back(split_J(geo, amb, w).normal);
    double s = 0.0;
    for (const auto& x : rows)
        for (const auto& y : cols) {
            const Eigen::VectorXd b = geo.B(x, y);
            for (const auto& v : Jp) s += std::pow(b.dot(v), 2);
            for (const auto& v : Fs) s += csc2 * std::pow(b.dot(v), 2);
        }
    return s;
}

}  // namespace

LemmaResiduals lemma_residuals(const GeometryAtPoint& geo, const KaehlerAmbient& amb, const WarpedStructure& ws) {
    const Frames f = frames(geo);
    const auto& dlf = ws.warping.dln_f;
    const auto& dlh = ws.warping.dln_h;
    std::vector<Eigen::VectorXd> Jp, Fs, Tt, Ts;
    for (const auto& z : f.p) Jp.push_back(amb.apply_J(geo.push(z)));
    for (const auto& w : f.s) {
        const SplitVector sv = split_J(geo, amb, w);
        Fs.push_back(sv.normal);
        Ts.push_back(sv.tangent);
    }
    for (const auto& x : f.t) Tt.push_back(split_J(geo, amb, x).tangent);

    LemmaResiduals r;
    auto upd = [](double& slot, double v) { slot = std::max(slot, std::abs(v)); };
    for (std::size_t i = 0; i < f.t.size(); ++i) {
        const auto& X = f.t[i];
        for (const auto& Y : f.t) {
            const Eigen::VectorXd b = geo.B(X, Y);
            for (const auto& v : Jp) upd(r.r34, b.dot(v));
            for (const auto& v : Fs) upd(r.r35, b.dot(v));
        }
        for (std::size_t a = 0; a < f.p.size(); ++a) {
            const Eigen::VectorXd b = geo.B(X, f.p[a]);
            for (const auto& v : Fs) upd(r.r36, b.dot(v));
            for (std::size_t c = 0; c < f.p.size(); ++c)
                upd(r.r37, b.dot(Jp[c]) + dlf.dot(Tt[i]) * geo.g(f.p[a], f.p[c]));
        }
        for (std::size_t k = 0; k < f.s.size(); ++k) {
            const Eigen::VectorXd b = geo.B(X, f.s[k]);
            for (const auto& v : Jp) upd(r.r38, b.dot(v));
            for (std::size_t l = 0; l < f.s.size(); ++l)
                upd(r.r39, b.dot(Fs[l]) + dlh.dot(Tt[i]) * geo.g(f.s[k], f.s[l]) +
                               dlh.dot(X) * geo.g(f.s[k], Ts[l]));
        }
    }
    for (std::size_t a = 0; a < f.p.size(); ++a)
        for (std::size_t c = 0; c < f.p.size(); ++c) {
            const Eigen::VectorXd bpp = geo.B(f.p[a], f.p[c]);
            for (std::size_t k = 0; k < f.s.size(); ++k)
                upd(r.r310, bpp.dot(Fs[k]) - geo.B(f.p[a], f.s[k]).dot(Jp[c]));
        }
    return r;
}

SffBlockNorms sff_block_norms(const GeometryAtPoint& geo) {
    const Frames f = frames(geo);
    SffBlockNorms n;
    n.tt = block_sum(geo, f.t, f.t);
    n.pp = block_sum(geo, f.p, f.p);
    n.thth = block_sum(geo, f.s, f.s);
    n.tp = block_sum(geo, f.t, f.p);
    n.tth = block_sum(geo, f.t, f.s);
    n.pth = block_sum(geo, f.p, f.s);
    n.total = block_sum(geo, geo.frame.tangent, geo.frame.tangent);
    return n;
}

ChenReport chen_inequality(const GeometryAtPoint& geo, const KaehlerAmbient& amb, const WarpedStructure& ws,
                           double theta, double sin_floor) {
    ChenReport r;
    const Frames f = frames(geo);
    const double m2 = static_cast<double>(f.p.size());
    const double m3 = static_cast<double>(f.s.size());
    r.sin_theta = std::sin(theta);
    r.gap.singular = m3 > 0 && r.sin_theta < sin_floor;
    const double csc2 = m3 > 0 ? 1.0 / (r.sin_theta * r.sin_theta) : 0.0;
    r.blocks = sff_block_norms(geo);
    const double gf = grad_ln_f_norm2(ws);
    const double gt = grad_T_norm2(geo, ws);
    r.gap.lhs = r.blocks.total;
    r.gap.rhs = 2.0 * (m2 * gf + (m3 > 0 ? m3 * (1.0 + csc2) * gt : 0.0));
    r.gap.gap = r.gap.lhs - r.gap.rhs;
    r.tp_frame = frame_sum(geo, amb, f.t, f.p, csc2);
    r.tth_frame = frame_sum(geo, amb, f.t, f.s, csc2);
    r.tp_outside = r.blocks.tp - r.tp_frame;
    r.tth_outside = r.blocks.tth - r.tth_frame;
    const auto& b = r.blocks;
    r.proof_remainder = r.gap.gap - (b.tt + b.pp + b.thth + 2.0 * b.pth + 2.0 * r.tp_outside + 2.0 * r.tth_outside);
    return r;
}

EqualityDiagnostics equality_diagnostics(const GeometryAtPoint& geo, const WarpedStructure& ws) {
    EqualityDiagnostics d;
    const Frames f = frames(geo);
    d.blocks = sff_block_norms(geo);
    d.mixed_geodesic_pth = d.blocks.pth;
    Eigen::VectorXd trace = Eigen::VectorXd::Zero(geo.N);
    for (const auto& e : geo.frame.tangent) trace += geo.B(e, e);
    d.minimality = trace.norm();
    const std::size_t m3 = f.s.size();
    if (m3 == 0) return d;

    auto leaf_sff = [&](const Eigen::VectorXd& W1, const Eigen::VectorXd& W2) {
        Eigen::VectorXd v = geo.connection(W1, W2);
        for (const auto& w : f.s) v -= geo.g(v, w) * w;
        return v;
    };
    std::vector<Eigen::VectorXd> Bp(m3 * m3);
    Eigen::VectorXd H = Eigen::VectorXd::Zero(geo.m);
    for (std::size_t k = 0; k < m3; ++k)
        for (std::size_t l = 0; l < m3; ++l) {
            Bp[k * m3 + l] = leaf_sff(f.s[k], f.s[l]);
            if (k == l) H += Bp[k * m3 + l];
        }
    H /= static_cast<double>(m3);
    for (std::size_t k = 0; k < m3; ++k)
        for (std::size_t l = 0; l < m3; ++l) {
            const double delta = k == l ? 1.0 : 0.0;
            d.umbilicity_defect = std::max(d.umbilicity_defect, geo.norm(Bp[k * m3 + l] - delta * H));
            for (const auto& X : f.t)
                d.r315 = std::max(d.r315, std::abs(geo.g(Bp[k * m3 + l], X) + ws.warping.dln_h.dot(X) * delta));
            for (const auto& Z : f.p)
                d.r316 = std::max(d.r316, std::abs(geo.g(Bp[k * m3 + l], Z) + ws.warping.dln_h.dot(Z) * delta));
        }
    d.mean_curvature_match = geo.norm(H + ws.warping.grad_ln_h);
    return d;
}

InequalityGap lawson_simons_sum(const GeometryAtPoint& geo, const KaehlerAmbient& amb, const Frame& frame, int p) {
    const int n = static_cast<int>(frame.size());
    if (p < 1 || p > n - 1)
        throw PreconditionError("Lawson-Simons split p must satisfy 1 <= p <= m-1, got " + std::to_string(p));
    InequalityGap g;
    for (int i = 0; i < p; ++i) {
        const Eigen::VectorXd bii = geo.B(frame[i], frame[i]);
        for (int s = p; s < n; ++s)
            g.lhs += 2.0 * geo.B(frame[i], frame[s]).squaredNorm() - bii.dot(geo.B(frame[s], frame[s]));
    }
    g.rhs = static_cast<double>(p) * (n - p) * amb.c();
    g.gap = g.lhs - g.rhs;
    return g;
}

InequalityGap lawson_simons_sum(const GeometryAtPoint& geo, const KaehlerAmbient& amb, int p) {
    return lawson_simons_sum(geo, amb, geo.frame.tangent, p);
}

Theorem42Report theorem42_check(const GeometryAtPoint& geo, const KaehlerAmbient& amb, const WarpedStructure& ws,
                                double theta, double sin_floor) {
    const Frames f = frames(geo);
    if (f.t.empty() || f.p.empty() || f.s.empty())
        throw PreconditionError("the second-fundamental-form inequality needs all three factors non-trivial");
    Theorem42Report r;
    const double m2 = static_cast<double>(f.p.size());
    const double m3 = static_cast<double>(f.s.size());
    const double c = amb.c();
    const double h = ws.warping.h_value;
    const double sin_t = std::sin(theta);
    r.singular = sin_t < sin_floor;
    const double csc2 = 1.0 / (sin_t * sin_t);

    for (const auto& Z : f.p) {
        const Eigen::VectorXd bzz = geo.B(Z, Z);
        const Eigen::VectorXd zbar = geo.push(Z);
        for (const auto& W : f.s) {
            r.mixed_perp_theta += geo.B(Z, W).squaredNorm() - geo.B(W, W).dot(bzz);
            const Eigen::VectorXd wbar = geo.push(W);
            r.ambient_term += amb.curvature4(wbar, zbar, zbar, wbar);
        }
    }
    const SffBlockNorms blocks = sff_block_norms(geo);
    r.lhs = r.mixed_perp_theta + blocks.tp + blocks.tth;
    r.hessian_trace = laplacian_perp(geo, ws, WarpScalar::h, LaplacianKind::base_hessian_trace);
    r.leaf_laplacian_h = laplacian_perp(geo, ws, WarpScalar::h, LaplacianKind::leaf_intrinsic);
    r.leaf_laplacian_ln_h = laplacian_perp(geo, ws, WarpScalar::ln_h, LaplacianKind::leaf_intrinsic);

    const double gt = grad_T_norm2(geo, ws);
    const double gf = grad_ln_f_norm2(ws);
    r.eq43_residual = std::abs(r.mixed_perp_theta - (m3 / h) * r.hessian_trace - r.ambient_term);
    r.eq43_printed_residual = std::abs((m3 / h) * r.hessian_trace + r.mixed_perp_theta + m2 * m3 * c / 4.0);
    r.eq44_residual = std::abs(blocks.tth - m3 * (1.0 + csc2) * gt);
    r.eq44_frame_sum = frame_sum(geo, amb, f.t, f.s, csc2);
    r.eq44_derived_residual = std::abs(r.eq44_frame_sum - m3 * (2.0 * csc2 - 1.0) * gt);
    r.eq45_residual = std::abs(blocks.tp - m2 * gf);
    r.eq46_rhs = m3 * ((1.0 + csc2) * gt + r.hessian_trace / h - m2 * c / 4.0) + m2 * gf;
    r.eq46_residual = std::abs(r.lhs - r.eq46_rhs);

    auto gap = [&](double scalar) {
        InequalityGap g;
        g.lhs = r.lhs;
        g.rhs = m3 * (scalar / h - m2 * c / 4.0);
        g.gap = g.lhs - g.rhs;
        g.singular = r.singular;
        return g;
    };
    r.gap_hessian_trace = gap(r.hessian_trace);
    r.gap_leaf_h = gap(r.leaf_laplacian_h);
    r.gap_leaf_ln_h = gap(r.leaf_laplacian_ln_h);
    return r;
}

NonexistenceProbe nonexistence_probe(const GeometryAtPoint& geo, const KaehlerAmbient& amb,
                                     const WarpedStructure& ws, double tol, double proper_threshold) {
    NonexistenceProbe p;
    const Ordering o = geo.partition.ordering;
    if (o != Ordering::theta_perp_t && o != Ordering::perp_theta_t) {
        p.message = "ordering not in forbidden list";
        return p;
    }
    p.applicable = true;
    const Frames f = frames(geo);
    const auto& dlh = ws.warping.dln_h;
    for (const auto& Z : f.p) p.measured_dlnh = std::max(p.measured_dlnh, std::abs(dlh.dot(Z)));
    for (const auto& X : f.t) {
        const Eigen::VectorXd TX = split_J(geo, amb, X).tangent;
        const Eigen::VectorXd b1 = geo.B(X, TX);
        const Eigen::VectorXd b2 = geo.B(TX, X);
        p.asymmetry = std::max(p.asymmetry, (b1 - b2).norm());
        const double gxx = geo.g(X, X);
        for (const auto& Z : f.p) {
            const Eigen::VectorXd JZ = amb.apply_J(geo.push(Z));
            const double rhs = dlh.dot(Z) * gxx;
            const double l31 = b1.dot(JZ);
            const double l32 = -b2.dot(JZ);
            if (std::abs(l31 - rhs) >= p.residual31) {
                p.residual31 = std::abs(l31 - rhs);
                p.lhs31 = l31;
                p.rhs31 = rhs;
            }
            if (std::abs(l32 - rhs) >= p.residual32) {
                p.residual32 = std::abs(l32 - rhs);
                p.lhs32 = l32;
                p.rhs32 = rhs;
            }
            p.forced_value = std::max(p.forced_value, std::abs((l31 + l32) / (2.0 * gxx)));
        }
    }
    p.proper = p.measured_dlnh > proper_threshold;
    p.counterexample = p.proper && p.residual31 < tol && p.residual32 < tol;
    p.message = p.counterexample ? "both identities hold at a proper point" : "no counterexample at this point";
    return p;
}

}  // namespace seqwarp
