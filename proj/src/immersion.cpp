#include "seqwarp/immersion.hpp"

#include <algorithm>
#include <cmath>

#include "seqwarp/errors.hpp"
#include "seqwarp/jet.hpp"

namespace seqwarp {

const char* ordering_name(Ordering o) {
    switch (o) {
        case Ordering::t_perp_theta: return "T-perp-theta";
        case Ordering::theta_perp_t: return "theta-perp-T";
        case Ordering::perp_theta_t: return "perp-theta-T";
    }
    return "?";
}

bool parse_ordering(const std::string& text, Ordering& out) {
    for (Ordering o : {Ordering::t_perp_theta, Ordering::theta_perp_t, Ordering::perp_theta_t}) {
        if (text == ordering_name(o)) {
            out = o;
            return true;
        }
    }
    return false;
}

const char* role_name(Role r) {
    switch (r) {
        case Role::holomorphic: return "holomorphic";
        case Role::totally_real: return "totally_real";
        case Role::slant: return "slant";
    }
    return "?";
}

const std::vector<int>& FactorPartition::indices(Role r) const {
    switch (r) {
        case Role::holomorphic: return holomorphic;
        case Role::totally_real: return totally_real;
        default: return slant;
    }
}

Role FactorPartition::role_at(int position) const {
    static constexpr Role table[3][3] = {
        {Role::holomorphic, Role::totally_real, Role::slant},
        {Role::slant, Role::totally_real, Role::holomorphic},
        {Role::totally_real, Role::slant, Role::holomorphic},
    };
    return table[static_cast<int>(ordering)][position];
}

int FactorPartition::dim() const {
    return static_cast<int>(holomorphic.size() + totally_real.size() + slant.size());
}

int FactorPartition::position_of(int chart_index) const {
    for (int pos = 0; pos < 3; ++pos) {
        const auto& f = factor(pos);
        if (std::find(f.begin(), f.end(), chart_index) != f.end()) return pos;
    }
    return -1;
}

double GeometryAtPoint::norm(const Eigen::VectorXd& X) const { return std::sqrt(std::max(0.0, g(X, X))); }

Eigen::VectorXd GeometryAtPoint::B(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(N);
    for (int a = 0; a < m; ++a) {
        if (X[a] == 0.0) continue;
        for (int b = 0; b < m; ++b) out += (X[a] * Y[b]) * sff[a * m + b];
    }
    return out;
}

Eigen::VectorXd GeometryAtPoint::connection(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) out[c] += gamma(c, a, b) * X[a] * Y[b];
    return out;
}

Eigen::VectorXd GeometryAtPoint::curvature(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                           const Eigen::VectorXd& Z) const {
    if (!has_curvature()) throw PreconditionError("curvature requested from an order-2 geometry");
    // R(X,Y)Z = R_abcd X^a Y^b Z^c g^{de} d_e.
    Eigen::VectorXd lowered = Eigen::VectorXd::Zero(m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const double xy = X[a] * Y[b];
            if (xy == 0.0) continue;
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) lowered[d] += riemann4(a, b, c, d) * xy * Z[c];
        }
    return inverse_metric * lowered;
}

double GeometryAtPoint::curvature4(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                   const Eigen::VectorXd& Z, const Eigen::VectorXd& W) const {
    return g(curvature(X, Y, Z), W);
}

Eigen::VectorXd GeometryAtPoint::tangent_part(const Eigen::VectorXd& ambient) const {
    return inverse_metric * (jacobian.transpose() * ambient);
}

namespace {

AdaptedFrame build_frame(const GeometryAtPoint& geo, const FactorPartition& part) {
    AdaptedFrame fr;
    const int m = geo.m;
    for (int pos = 0; pos < 3; ++pos) {
        const Role role = part.role_at(pos);
        auto& block = fr.by_role[static_cast<int>(role)];
        for (int idx : part.factor(pos)) {
            Eigen::VectorXd v = Eigen::VectorXd::Unit(m, idx);
            // Two passes of modified Gram-Schmidt against everything so far.
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& u : fr.tangent) v -= geo.g(u, v) * u;
            v /= geo.norm(v);
            block.push_back(v);
            fr.tangent.push_back(v);
        }
    }
    // Normal frame: complete the pushed-forward tangent frame by greedily
    // taking the standard basis vector with the largest residual.
    const int N = geo.N;
    std::vector<Eigen::VectorXd> basis;
    for (const auto& t : fr.tangent) basis.push_back(geo.push(t));
    std::vector<Eigen::VectorXd> normals;
    std::vector<Eigen::VectorXd> residual(N);
    for (int i = 0; i < N; ++i) {
        Eigen::VectorXd r = Eigen::VectorXd::Unit(N, i);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) r -= q.dot(r) * q;
        residual[i] = r;
    }
    std::vector<bool> used(N, false);
    while (static_cast<int>(normals.size()) < N - m) {
        int best = -1;
        double best_norm = -1.0;
        for (int i = 0; i < N; ++i) {
            if (used[i]) continue;
            const double nrm = residual[i].norm();
            if (nrm > best_norm + 1e-12) {
                best = i;
                best_norm = nrm;
            }
        }
        used[best] = true;
        Eigen::VectorXd q = residual[best] / best_norm;
        for (int pass = 0; pass < 1; ++pass)
            for (const auto& p : normals) q -= p.dot(q) * p;
        q.normalize();
        normals.push_back(q);
        for (int i = 0; i < N; ++i)
            if (!used[i]) residual[i] -= q.dot(residual[i]) * q;
    }
    fr.normal.resize(N, N - m);
    for (int k = 0; k < N - m; ++k) fr.normal.col(k) = normals[k];
    return fr;
}

}  // namespace

GeometryAtPoint geometry_at(const ImmersionSpec& spec, const std::vector<double>& p,
                            const GeometryOptions& opts) {
    GeometryAtPoint geo;
    const int m = spec.dim();
    const int N = spec.ambient_dim();
    if (static_cast<int>(p.size()) != m)
        throw PreconditionError("point has " + std::to_string(p.size()) + " coordinates, chart has " +
                                std::to_string(m));
    geo.point = p;
    geo.m = m;
    geo.N = N;
    geo.order = std::clamp(opts.order, 2, 3);
    geo.partition = spec.partition;

    geo.jacobian.resize(N, m);
    geo.d2x.assign(m * m, Eigen::VectorXd::Zero(N));
    if (geo.order >= 3) geo.d3x.assign(m * m * m, Eigen::VectorXd::Zero(N));
    for (int i = 0; i < N; ++i) {
        const Jet x = evaluate_jet(spec.coords[i], p, geo.order);
        for (int a = 0; a < m; ++a) {
            geo.jacobian(i, a) = x.partial({a});
            for (int b = 0; b < m; ++b) {
                geo.d2x[a * m + b][i] = x.partial({a, b});
                if (geo.order >= 3)
                    for (int c = 0; c < m; ++c) geo.d3x[(a * m + b) * m + c][i] = x.partial({a, b, c});
            }
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(geo.jacobian);
    geo.singular_values = svd.singularValues();
    const double min_sv = m > 0 ? geo.singular_values[m - 1] : 0.0;
    if (!(min_sv > opts.rank_tol)) {
        std::vector<double> svs(geo.singular_values.data(), geo.singular_values.data() + m);
        throw RankDeficiency(min_sv, std::move(svs));
    }

    const auto& J = geo.jacobian;
    geo.metric = J.transpose() * J;
    geo.inverse_metric = geo.metric.inverse();
    geo.tangent_projector = J * geo.inverse_metric * J.transpose();

    geo.dmetric.assign(m, Eigen::MatrixXd::Zero(m, m));
    for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                geo.dmetric[c](a, b) = geo.d2x[a * m + c].dot(J.col(b)) + J.col(a).dot(geo.d2x[b * m + c]);

    // Christoffel symbols from first derivatives of the metric only.
    const auto& gi = geo.inverse_metric;
    auto first_kind = [&](int a, int b, int d) {  // Gamma_{d,ab}
        return 0.5 * (geo.dmetric[a](b, d) + geo.dmetric[b](a, d) - geo.dmetric[d](a, b));
    };
    geo.christoffel.assign(m * m * m, 0.0);
    for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double s = 0.0;
                for (int d = 0; d < m; ++d) s += gi(c, d) * first_kind(a, b, d);
                geo.christoffel[(c * m + a) * m + b] = s;
            }

    geo.sff.resize(m * m);
    const Eigen::MatrixXd normal_proj = Eigen::MatrixXd::Identity(N, N) - geo.tangent_projector;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) geo.sff[a * m + b] = normal_proj * geo.d2x[a * m + b];

    if (geo.order >= 3) {
        const auto& x3 = geo.d3x;
        auto X2 = [&](int a, int b) -> const Eigen::VectorXd& { return geo.d2x[a * m + b]; };
        auto X3 = [&](int a, int b, int c) -> const Eigen::VectorXd& { return x3[(a * m + b) * m + c]; };
        geo.d2metric.assign(m * m, Eigen::MatrixXd::Zero(m, m));
        for (int c = 0; c < m; ++c)
            for (int d = 0; d < m; ++d)
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b)
                        geo.d2metric[c * m + d](a, b) = X3(a, c, d).dot(J.col(b)) + X2(a, c).dot(X2(b, d)) +
                                                        X2(a, d).dot(X2(b, c)) + J.col(a).dot(X3(b, c, d));
        auto d_first_kind = [&](int e, int a, int b, int d) {
            const auto& H = geo.d2metric;
            return 0.5 * (H[e * m + a](b, d) + H[e * m + b](a, d) - H[e * m + d](a, b));
        };
        geo.dchristoffel.assign(m * m * m * m, 0.0);
        for (int e = 0; e < m; ++e) {
            const Eigen::MatrixXd dgi = -gi * geo.dmetric[e] * gi;
            for (int c = 0; c < m; ++c)
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) {
                        double s = 0.0;
                        for (int d = 0; d < m; ++d)
                            s += dgi(c, d) * first_kind(a, b, d) + gi(c, d) * d_first_kind(e, a, b, d);
                        geo.dchristoffel[((e * m + c) * m + a) * m + b] = s;
                    }
        }
        // R^d_cab = d_a Gamma^d_bc - d_b Gamma^d_ac + Gamma^d_ae Gamma^e_bc - Gamma^d_be Gamma^e_ac
        // so that R(d_a, d_b) d_c = R^d_cab d_d; then lower onto the fourth slot.
        std::vector<double> up(m * m * m * m, 0.0);  // [((d*m + c)*m + a)*m + b]
        for (int d = 0; d < m; ++d)
            for (int c = 0; c < m; ++c)
                for (int a = 0; a < m; ++a)
                    for (int b = 0; b < m; ++b) {
                        double s = geo.dgamma(a, d, b, c) - geo.dgamma(b, d, a, c);
                        for (int e = 0; e < m; ++e)
                            s += geo.gamma(d, a, e) * geo.gamma(e, b, c) - geo.gamma(d, b, e) * geo.gamma(e, a, c);
                        up[((d * m + c) * m + a) * m + b] = s;
                    }
        geo.riemann.assign(m * m * m * m, 0.0);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d) {
                        double s = 0.0;
                        for (int e = 0; e < m; ++e) s += geo.metric(d, e) * up[((e * m + c) * m + a) * m + b];
                        geo.riemann[((a * m + b) * m + c) * m + d] = s;
                    }
    }

    geo.frame = build_frame(geo, spec.partition);
    return geo;
}

Eigen::VectorXd weingarten(const GeometryAtPoint& geo, const Eigen::VectorXd& xi, const Eigen::VectorXd& X) {
    if ((geo.tangent_projector * xi).norm() > 1e-10 * std::max(1.0, xi.norm()))
        throw PreconditionError("weingarten: the vector is not normal to the submanifold");
    Eigen::VectorXd lowered(geo.m);
    for (int b = 0; b < geo.m; ++b) lowered[b] = geo.B(X, Eigen::VectorXd::Unit(geo.m, b)).dot(xi);
    return geo.inverse_metric * lowered;
}

Eigen::VectorXd mean_curvature(const GeometryAtPoint& geo) {
    Eigen::VectorXd H = Eigen::VectorXd::Zero(geo.N);
    for (const auto& e : geo.frame.tangent) H += geo.B(e, e);
    return H / geo.m;
}

GaussResidual gauss_equation_residual(const GeometryAtPoint& geo, const KaehlerAmbient& ambient) {
    if (!geo.has_curvature()) throw PreconditionError("Gauss residual needs an order-3 geometry");
    const int m = geo.m;
    const auto& E = geo.frame.tangent;
    // Riemann tensor in the orthonormal frame, one index at a time.
    Eigen::MatrixXd F(m, m);
    for (int i = 0; i < m; ++i) F.col(i) = E[i];
    std::vector<double> cur = geo.riemann, nxt(cur.size());
    for (int slot = 0; slot < 4; ++slot) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        int stride = 1;
        for (int s = slot + 1; s < 4; ++s) stride *= m;
        for (std::size_t idx = 0; idx < cur.size(); ++idx) {
            const int k = static_cast<int>(idx / stride) % m;
            const std::size_t base = idx - static_cast<std::size_t>(k) * stride;
            for (int i = 0; i < m; ++i) nxt[base + static_cast<std::size_t>(i) * stride] += F(k, i) * cur[idx];
        }
        std::swap(cur, nxt);
    }
    std::vector<Eigen::VectorXd> amb(m);
    for (int i = 0; i < m; ++i) amb[i] = geo.push(E[i]);
    std::vector<Eigen::VectorXd> Bf(m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) Bf[i * m + j] = geo.B(E[i], E[j]);

    GaussResidual out;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const Eigen::VectorXd Rb = ambient.curvature(amb[i], amb[j], amb[k]);
                for (int l = 0; l < m; ++l) {
                    const double intrinsic = cur[((i * m + j) * m + k) * m + l];
                    const double rhs = intrinsic - Bf[i * m + l].dot(Bf[j * m + k]) + Bf[j * m + l].dot(Bf[i * m + k]);
                    const double r = std::abs(Rb.dot(amb[l]) - rhs);
                    if (r > out.max_residual) {
                        out.max_residual = r;
                        out.argmax = {i, j, k, l};
                    }
                }
            }
    return out;
}

}  // namespace seqwarp
