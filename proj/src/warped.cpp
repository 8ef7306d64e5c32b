#include "seqwarp/warped.hpp"

#include <algorithm>
#include <cmath>

#include "seqwarp/errors.hpp"

namespace seqwarp {

const char* warp_source_name(WarpSource s) { return s == WarpSource::declared ? "declared" : "extracted"; }

const char* laplacian_kind_name(LaplacianKind k) {
    return k == LaplacianKind::base_hessian_trace ? "base_hessian_trace" : "leaf_intrinsic";
}

Jet jet_from_derivatives(int nvars, double value, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess) {
    const JetLayout& layout = JetLayout::get(nvars, 2);
    Jet j(layout);
    j.coeffs()[0] = value;
    for (int a = 0; a < nvars; ++a) {
        j.coeffs()[layout.unit(a)] = grad[a];
        for (int b = a; b < nvars; ++b) {
            std::vector<std::uint8_t> alpha(nvars, 0);
            ++alpha[a];
            ++alpha[b];
            j.coeffs()[layout.index_of(alpha)] = a == b ? 0.5 * hess(a, a) : hess(a, b);
        }
    }
    return j;
}

namespace {

Jet metric_entry_jet(const GeometryAtPoint& geo, int a, int b) {
    const int m = geo.m;
    Eigen::VectorXd grad(m);
    Eigen::MatrixXd hess(m, m);
    for (int c = 0; c < m; ++c) {
        grad[c] = geo.dmetric[c](a, b);
        for (int d = 0; d < m; ++d) hess(c, d) = geo.d2metric[c * m + d](a, b);
    }
    return jet_from_derivatives(m, geo.metric(a, b), grad, hess);
}

Jet base_jet(const GeometryAtPoint& geo, const WarpingSpec& spec, int a) {
    if (a < static_cast<int>(spec.base_diag.size()) && spec.base_diag[a])
        return evaluate_jet(*spec.base_diag[a], geo.point, 2);
    return Jet::constant(JetLayout::get(geo.m, 2), 1.0);
}

// Mean of g_aa / base_a over a factor, with the worst deviation of the whole
// block from (mean) * base.
struct Extracted {
    Jet squared;
    double consistency = 0.0;
};

Extracted extract(const GeometryAtPoint& geo, const WarpingSpec& spec, const std::vector<int>& factor,
                  const char* name) {
    Extracted out;
    const JetLayout& layout = JetLayout::get(geo.m, 2);
    if (factor.empty()) {
        out.squared = Jet::constant(layout, 1.0);
        return out;
    }
    Jet sum(layout);
    std::vector<double> base_values;
    for (int a : factor) {
        const Jet base = base_jet(geo, spec, a);
        if (!(base.value() > 0))
            throw PreconditionError(std::string("base metric entry for ") + name + " is not positive");
        sum += metric_entry_jet(geo, a, a) / base;
        base_values.push_back(base.value());
    }
    out.squared = sum * (1.0 / static_cast<double>(factor.size()));
    const double w2 = out.squared.value();
    if (!(w2 > 0)) throw PreconditionError(std::string("extracted ") + name + "^2 is not positive");
    for (std::size_t i = 0; i < factor.size(); ++i)
        for (std::size_t j = 0; j < factor.size(); ++j) {
            const double target = i == j ? base_values[i] : 0.0;
            out.consistency =
                std::max(out.consistency, std::abs(geo.metric(factor[i], factor[j]) / w2 - target));
        }
    return out;
}

Eigen::VectorXd gradient(const Jet& j) {
    Eigen::VectorXd d(j.nvars());
    for (int a = 0; a < j.nvars(); ++a) d[a] = j.partial({a});
    return d;
}

Eigen::VectorXd component_along(const GeometryAtPoint& geo, const Eigen::VectorXd& differential, Role r) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(geo.m);
    for (const auto& e : geo.frame.of(r)) out += differential.dot(e) * e;
    return out;
}

std::vector<int> base_indices(const FactorPartition& p) {
    std::vector<int> idx = p.factor(0);
    idx.insert(idx.end(), p.factor(1).begin(), p.factor(1).end());
    std::sort(idx.begin(), idx.end());
    return idx;
}

// Christoffel symbols of the metric restricted to the coordinates in idx,
// indexed by positions within idx.
std::vector<double> block_christoffel(const GeometryAtPoint& geo, const std::vector<int>& idx,
                                      Eigen::MatrixXd* inverse_out = nullptr) {
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd gb(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) gb(i, j) = geo.metric(idx[i], idx[j]);
    const Eigen::MatrixXd gi = gb.inverse();
    std::vector<double> gam(k * k * k, 0.0);
    for (int c = 0; c < k; ++c)
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) {
                double s = 0.0;
                for (int d = 0; d < k; ++d) {
                    const int A = idx[a], B = idx[b], D = idx[d];
                    s += gi(c, d) * 0.5 * (geo.dmetric[A](B, D) + geo.dmetric[B](A, D) - geo.dmetric[D](A, B));
                }
                gam[(c * k + a) * k + b] = s;
            }
    if (inverse_out) *inverse_out = gi;
    return gam;
}

const Jet& scalar_jet(const WarpedStructure& ws, WarpScalar s) {
    return s == WarpScalar::h ? ws.warping.h : ws.warping.ln_h;
}

void require_block(const WarpedStructure& ws, double tol) {
    if (!(ws.report.off_block_norm < tol))
        throw PreconditionError("metric is not block diagonal over the factors (off-block norm " +
                                std::to_string(ws.report.off_block_norm) + ")");
}

}  // namespace

WarpedStructure verify_block_metric(const GeometryAtPoint& geo, const WarpingSpec& spec,
                                    const BlockMetricOptions& opts) {
    if (!geo.has_curvature()) throw PreconditionError("warped structure needs an order-3 geometry");
    WarpedStructure ws;
    auto& rep = ws.report;
    auto& wf = ws.warping;
    const auto& part = geo.partition;
    const int m = geo.m;

    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (part.position_of(a) != part.position_of(b))
                rep.off_block_norm = std::max(rep.off_block_norm, std::abs(geo.metric(a, b)));

    const Extracted fx = extract(geo, spec, part.factor(1), "f");
    const Extracted hx = extract(geo, spec, part.factor(2), "h");
    rep.f_consistency = fx.consistency;
    rep.h_consistency = hx.consistency;
    const Jet f_extracted = sqrt(fx.squared);
    const Jet h_extracted = sqrt(hx.squared);

    wf.f = f_extracted;
    wf.h = h_extracted;
    if (spec.f) {
        wf.f = evaluate_jet(*spec.f, geo.point, 2);
        wf.f_source = WarpSource::declared;
        rep.f_declared_mismatch = std::abs(wf.f.value() - f_extracted.value());
    }
    if (spec.h) {
        wf.h = evaluate_jet(*spec.h, geo.point, 2);
        wf.h_source = WarpSource::declared;
        rep.h_declared_mismatch = std::abs(wf.h.value() - h_extracted.value());
    }
    if (!(wf.f.value() > 0) || !(wf.h.value() > 0))
        throw PreconditionError("warping functions must be positive");
    wf.f_value = wf.f.value();
    wf.h_value = wf.h.value();
    wf.ln_f = ln(wf.f);
    wf.ln_h = ln(wf.h);
    wf.dln_f = gradient(wf.ln_f);
    wf.dln_h = gradient(wf.ln_h);
    wf.grad_ln_f = geo.inverse_metric * wf.dln_f;
    wf.grad_ln_h = geo.inverse_metric * wf.dln_h;
    wf.grad_T_ln_h = component_along(geo, wf.dln_h, Role::holomorphic);
    wf.grad_perp_ln_h = component_along(geo, wf.dln_h, Role::totally_real);

    for (int pos = 1; pos < 3; ++pos)
        for (int a : part.factor(pos)) rep.ln_f_leak = std::max(rep.ln_f_leak, std::abs(wf.dln_f[a]));
    for (int a : part.factor(2)) rep.ln_h_leak = std::max(rep.ln_h_leak, std::abs(wf.dln_h[a]));

    auto exceeds = [&](const Eigen::VectorXd& d, int pos) {
        for (int a : part.factor(pos))
            if (std::abs(d[a]) > opts.proper_threshold) return true;
        return false;
    };
    rep.properness.f_on_first = exceeds(wf.dln_f, 0);
    rep.properness.h_on_first = exceeds(wf.dln_h, 0);
    rep.properness.h_on_second = exceeds(wf.dln_h, 1);

    rep.warped = rep.off_block_norm < opts.block_tol && rep.f_consistency < opts.block_tol &&
                 rep.h_consistency < opts.block_tol;
    return ws;
}

ConnectionResiduals connection_identity_residuals(const GeometryAtPoint& geo, const WarpedStructure& ws,
                                                  double block_tol) {
    require_block(ws, block_tol);
    const auto& part = geo.partition;
    const int m = geo.m;
    auto worst = [&](int pa, int pb, const Eigen::VectorXd& dln) {
        double r = 0.0;
        for (int a : part.factor(pa))
            for (int b : part.factor(pb)) {
                Eigen::VectorXd v(m);
                for (int c = 0; c < m; ++c) v[c] = geo.gamma(c, a, b);
                v[b] -= dln[a];
                r = std::max(r, geo.norm(v));
            }
        return r;
    };
    ConnectionResiduals out;
    out.first = worst(0, 1, ws.warping.dln_f);
    out.second = worst(0, 2, ws.warping.dln_h);
    out.third = worst(1, 2, ws.warping.dln_h);
    return out;
}

double hessian_on_base(const GeometryAtPoint& geo, const WarpedStructure& ws, WarpScalar scalar, int a, int b) {
    const std::vector<int> idx = base_indices(geo.partition);
    auto pos = [&](int c) {
        const auto it = std::find(idx.begin(), idx.end(), c);
        if (it == idx.end()) throw PreconditionError("Hessian index outside factors 1 and 2");
        return static_cast<int>(it - idx.begin());
    };
    const int pa = pos(a), pb = pos(b);
    const int k = static_cast<int>(idx.size());
    const std::vector<double> gam = block_christoffel(geo, idx);
    const Jet& phi = scalar_jet(ws, scalar);
    double s = phi.partial({a, b});
    for (int c = 0; c < k; ++c) s -= gam[(c * k + pa) * k + pb] * phi.partial({idx[c]});
    return s;
}

double hessian_on_base(const GeometryAtPoint& geo, const WarpedStructure& ws, WarpScalar scalar,
                       const Eigen::VectorXd& X, const Eigen::VectorXd& Z) {
    const std::vector<int> idx = base_indices(geo.partition);
    const int k = static_cast<int>(idx.size());
    const std::vector<double> gam = block_christoffel(geo, idx);
    const Jet& phi = scalar_jet(ws, scalar);
    Eigen::VectorXd dphi(k);
    for (int c = 0; c < k; ++c) dphi[c] = phi.partial({idx[c]});
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
        if (X[idx[i]] == 0.0) continue;
        for (int j = 0; j < k; ++j) {
            double hij = phi.partial({idx[i], idx[j]});
            for (int c = 0; c < k; ++c) hij -= gam[(c * k + i) * k + j] * dphi[c];
            s += X[idx[i]] * Z[idx[j]] * hij;
        }
    }
    return s;
}

CurvatureIdentityResidual curvature_identity_residual(const GeometryAtPoint& geo, const WarpedStructure& ws,
                                                      double block_tol) {
    require_block(ws, block_tol);
    const auto& part = geo.partition;
    std::vector<Eigen::VectorXd> base = geo.frame.of(part.role_at(0));
    for (const auto& v : geo.frame.of(part.role_at(1))) base.push_back(v);
    const auto& fibre = geo.frame.of(part.role_at(2));
    const double h = ws.warping.h_value;
    CurvatureIdentityResidual out;
    for (const auto& X : base)
        for (const auto& Z : base) {
            const double H = hessian_on_base(geo, ws, WarpScalar::h, X, Z);
            for (const auto& Y : fibre) {
                const Eigen::VectorXd R = geo.curvature(X, Y, Z);
                out.residual = std::max(out.residual, geo.norm(R - (H / h) * Y));
                out.opposite_sign_residual = std::max(out.opposite_sign_residual, geo.norm(R + (H / h) * Y));
            }
        }
    return out;
}

double laplacian_perp(const GeometryAtPoint& geo, const WarpedStructure& ws, WarpScalar scalar,
                      LaplacianKind kind) {
    const auto& part = geo.partition;
    const auto& leaf = part.factor(1);
    if (leaf.empty()) throw PreconditionError("Laplacian on an empty second factor");
    if (kind == LaplacianKind::base_hessian_trace) {
        double s = 0.0;
        for (const auto& e : geo.frame.of(part.role_at(1))) s += hessian_on_base(geo, ws, scalar, e, e);
        return s;
    }
    std::vector<int> idx = leaf;
    std::sort(idx.begin(), idx.end());
    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd gi;
    const std::vector<double> gam = block_christoffel(geo, idx, &gi);
    const Jet& phi = scalar_jet(ws, scalar);
    double s = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double hab = phi.partial({idx[a], idx[b]});
            for (int c = 0; c < k; ++c) hab -= gam[(c * k + a) * k + b] * phi.partial({idx[c]});
            s += gi(a, b) * hab;
        }
    return s;
}

}  // namespace seqwarp
