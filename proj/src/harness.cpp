#include "seqwarp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "seqwarp/errors.hpp"
#include "seqwarp/sampling.hpp"
#include "seqwarp/theorems.hpp"


namespace seqwarp {

using nlohmann::json;

const std::vector<CheckInfo>& check_registry() {
    static const std::vector<CheckInfo> reg = {
        {"gauss_eq", CheckKind::identity, 1e-6, "Gauss equation over orthonormal frame quadruples"},
        {"prop21_1", CheckKind::identity, 1e-8, "nabla_{X1} X2 = X1(ln f) X2"},
        {"prop21_2", CheckKind::identity, 1e-8, "nabla_{X1} X3 = X1(ln h) X3"},
        {"prop21_3", CheckKind::identity, 1e-8, "nabla_{X2} X3 = X2(ln h) X3"},
        {"prop21_4", CheckKind::identity, 1e-6, "R(X,Y3)Z = (1/h) H^h(X,Z) Y3"},
        {"lemma_3_4", CheckKind::identity, 1e-8, "g(B(X,Y), JZ) = 0"},
        {"lemma_3_5", CheckKind::identity, 1e-8, "g(B(X,Y), FW) = 0"},
        {"lemma_3_6", CheckKind::identity, 1e-8, "g(B(X,Z1), FW) = 0"},
        {"lemma_3_7", CheckKind::identity, 1e-6, "g(B(X,Z1), JZ2) = -JX(ln f) g(Z1,Z2)"},
        {"lemma_3_8", CheckKind::identity, 1e-8, "g(B(X,W), JZ) = 0"},
        {"lemma_3_9", CheckKind::identity, 1e-8, "g(B(X,W1), FW2) = -JX(ln h) g(W1,W2) - X(ln h) g(W1,TW2)"},
        {"lemma_3_10", CheckKind::identity, 1e-8, "g(B(Z1,Z2), FW) = g(B(Z1,W), JZ2)"},
        {"chen_3_11", CheckKind::inequality, 1e-8, "|B|^2 >= 2(m2 |grad ln f|^2 + m3 (1 + csc^2) |grad^T ln h|^2)"},
        {"equality_3_13", CheckKind::informational, 0.0, "|B(D^theta,D^theta)|^2 + |B(D^perp,D^perp)|^2"},
        {"equality_3_14", CheckKind::informational, 0.0, "|B(D^perp,D^theta)|^2 + |B(D^T,D^perp)|^2"},
        {"equality_3_15", CheckKind::identity, 1e-8, "g(B'(W1,W2), X) = -X(ln h) g(W1,W2), X in D^T"},
        {"equality_3_16", CheckKind::identity, 1e-8, "g(B'(W1,W2), Z) = -Z(ln h) g(W1,W2), Z in D^perp"},
        {"ls_2_8", CheckKind::informational, 0.0, "Lawson-Simons sum minus p q c, split D^T | rest"},
        {"eq_4_3", CheckKind::identity, 1e-6, "mixed perp-theta sum = (m3/h) trace H^h + ambient curvature sum"},
        {"eq_4_4", CheckKind::identity, 1e-8, "sum |B(e,e_theta)|^2 = m3 (1 + csc^2) |grad^T ln h|^2"},
        {"eq_4_5", CheckKind::identity, 1e-8, "sum |B(e,e_perp)|^2 = m2 |grad ln f|^2"},
        {"eq_4_6", CheckKind::identity, 1e-6, "four-sum identity with the H^h trace"},
        {"thm42", CheckKind::inequality, 1e-8, "four-sum >= m3 (trace H^h / h - m2 c/4)"},
        {"nonexist_3_1", CheckKind::probe, 1e-8, "holomorphic-last orderings force h constant on D^perp"},
    };
    return reg;
}

const CheckInfo* find_check(const std::string& name) {
    for (const auto& c : check_registry())
        if (name == c.name) return &c;
    return nullptr;
}

const char* check_kind_name(CheckKind k) {
    switch (k) {
        case CheckKind::identity: return "identity";
        case CheckKind::inequality: return "inequality";
        case CheckKind::probe: return "probe";
        case CheckKind::informational: return "informational";
    }
    return "?";
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double resolve_tolerance(const Manifest& manifest, const CheckOptions& opts, const CheckInfo& info) {
    if (opts.tol) return *opts.tol;
    if (auto it = manifest.tolerances.find(info.name); it != manifest.tolerances.end()) return it->second;
    if (auto it = manifest.tolerances.find("default"); it != manifest.tolerances.end()) return it->second;
    return info.default_tolerance;
}

double resolve_sin_floor(const Manifest& manifest, const CheckOptions& opts) {
    if (opts.sin_floor) return *opts.sin_floor;
    if (manifest.sin_floor) return *manifest.sin_floor;
    return 0.1;
}

namespace {

constexpr double kBlockTol = 1e-8;
constexpr const char* kVersion = "0.1.0";

const char* const kWarpedChecks[] = {"prop21_1", "prop21_2", "prop21_3", "prop21_4"};
const char* const kSplitChecks[] = {"lemma_3_4",     "lemma_3_5",     "lemma_3_6",     "lemma_3_7",
                                    "lemma_3_8",     "lemma_3_9",     "lemma_3_10",    "chen_3_11",
                                    "equality_3_13", "equality_3_14", "equality_3_15", "equality_3_16",
                                    "ls_2_8",        "eq_4_3",        "eq_4_4",        "eq_4_5",
                                    "eq_4_6",        "thm42"};

void exclude_all(PointEvaluation& ev, const std::string& reason) {
    for (const auto& c : check_registry())
        if (!ev.values.count(c.name)) ev.exclusions.emplace(c.name, reason);
}

}  // namespace

PointEvaluation evaluate_point(const Manifest& manifest, const std::vector<double>& point, const CheckOptions& opts,
                               double sin_floor) {
    PointEvaluation ev;
    ev.point = point;
    auto& v = ev.values;
    const KaehlerAmbient amb = manifest.ambient();
    GeometryAtPoint geo;
    try {
        geo = geometry_at(manifest.immersion, point);
    } catch (const RankDeficiency& e) {
        ev.degenerate = true;
        ev.degenerate_reason = e.what();
    } catch (const DomainError& e) {
        ev.degenerate = true;
        ev.degenerate_reason = std::string("domain error: ") + e.what();
    }
    if (ev.degenerate) {
        exclude_all(ev, "degenerate point");
        return ev;
    }
    const auto& part = geo.partition;
    v["min_singular_value"] = geo.singular_values[geo.m - 1];
    v["gauss_eq"] = gauss_equation_residual(geo, amb).max_residual;

    const DistributionDefects defects = classify_distributions(geo, amb, opts.slant_reference, opts.probes);
    v["holomorphic_defect"] = defects.holomorphic_defect;
    v["anti_invariance_defect"] = defects.anti_invariance_defect;
    v["perp_slant_pairing"] = defects.perp_slant_pairing;
    v["perp_coordinate_pairing"] = defects.perp_coordinate_pairing;
    double theta = std::numbers::pi / 2;
    if (defects.has_slant) {
        theta = defects.slant.theta;
        v["slant_theta"] = theta;
        v["cos_slant_theta"] = defects.slant.cos_theta;
        v["slant_spread"] = defects.slant.spread;
        const SlantReference other = opts.slant_reference == SlantReference::full_tangent
                                         ? SlantReference::slant_distribution
                                         : SlantReference::full_tangent;
        const SlantReport alt = slant_angle(geo, amb, other, opts.probes);
        v[std::string("cos_slant_theta_") + slant_reference_name(other)] = alt.cos_theta;
    }

    WarpedStructure ws;
    try {
        ws = verify_block_metric(geo, manifest.warping);
    } catch (const PreconditionError& e) {
        exclude_all(ev, std::string("warped structure: ") + e.what());
        return ev;
    }
    const auto& rep = ws.report;
    v["off_block_norm"] = rep.off_block_norm;
    v["f_consistency"] = rep.f_consistency;
    v["h_consistency"] = rep.h_consistency;
    v["f"] = ws.warping.f_value;
    v["h"] = ws.warping.h_value;
    v["f_declared_mismatch"] = rep.f_declared_mismatch;
    v["h_declared_mismatch"] = rep.h_declared_mismatch;
    v["ln_f_leak"] = rep.ln_f_leak;
    v["ln_h_leak"] = rep.ln_h_leak;
    v["proper"] = rep.properness.all() ? 1.0 : 0.0;
    v["grad_ln_f_norm2"] = ws.warping.dln_f.dot(ws.warping.grad_ln_f);
    v["grad_T_ln_h_norm2"] = geo.g(ws.warping.grad_T_ln_h, ws.warping.grad_T_ln_h);

    if (!(rep.off_block_norm < kBlockTol)) {
        exclude_all(ev, "metric is not block diagonal over the factors");
        return ev;
    }
    const ConnectionResiduals conn = connection_identity_residuals(geo, ws);
    v["prop21_1"] = conn.first;
    v["prop21_2"] = conn.second;
    v["prop21_3"] = conn.third;
    const CurvatureIdentityResidual curv = curvature_identity_residual(geo, ws);
    v["prop21_4"] = curv.residual;
    v["prop21_4.opposite_sign_residual"] = curv.opposite_sign_residual;

    const NonexistenceProbe probe = nonexistence_probe(geo, amb, ws, 1e-8);
    if (probe.applicable) {
        v["nonexist_3_1"] = probe.counterexample ? 1.0 : 0.0;
        v["nonexist_3_1.lhs31"] = probe.lhs31;
        v["nonexist_3_1.rhs31"] = probe.rhs31;
        v["nonexist_3_1.lhs32"] = probe.lhs32;
        v["nonexist_3_1.rhs32"] = probe.rhs32;
        v["nonexist_3_1.residual31"] = probe.residual31;
        v["nonexist_3_1.residual32"] = probe.residual32;
        v["nonexist_3_1.asymmetry"] = probe.asymmetry;
        v["nonexist_3_1.forced_value"] = probe.forced_value;
        v["nonexist_3_1.measured_dlnh"] = probe.measured_dlnh;
        v["nonexist_3_1.proper"] = probe.proper ? 1.0 : 0.0;
    } else {
        ev.exclusions.emplace("nonexist_3_1", probe.message);
    }

    if (part.ordering != Ordering::t_perp_theta) {
        for (const char* c : kSplitChecks)
            ev.exclusions.emplace(c, std::string("ordering is ") + ordering_name(part.ordering));
        return ev;
    }

    const LemmaResiduals lem = lemma_residuals(geo, amb, ws);
    v["lemma_3_4"] = lem.r34;
    v["lemma_3_5"] = lem.r35;
    v["lemma_3_6"] = lem.r36;
    v["lemma_3_7"] = lem.r37;
    v["lemma_3_8"] = lem.r38;
    v["lemma_3_9"] = lem.r39;
    v["lemma_3_10"] = lem.r310;

    const bool singular = defects.has_slant && std::sin(theta) < sin_floor;
    const std::string singular_reason = "sin(theta) below sin_floor";
    const ChenReport chen = chen_inequality(geo, amb, ws, theta, sin_floor);
    v["chen_gap"] = chen.gap.gap;
    v["chen_3_11.lhs"] = chen.gap.lhs;
    v["chen_3_11.rhs"] = chen.gap.rhs;
    v["chen_3_11.sin_theta"] = chen.sin_theta;
    v["chen_3_11.tp_frame"] = chen.tp_frame;
    v["chen_3_11.tth_frame"] = chen.tth_frame;
    v["chen_3_11.tp_outside"] = chen.tp_outside;
    v["chen_3_11.tth_outside"] = chen.tth_outside;
    v["chen_3_11.proof_remainder"] = chen.proof_remainder;
    const auto& b = chen.blocks;
    v["sff_norm2"] = b.total;
    v["sff.tt"] = b.tt;
    v["sff.pp"] = b.pp;
    v["sff.thth"] = b.thth;
    v["sff.tp"] = b.tp;
    v["sff.tth"] = b.tth;
    v["sff.pth"] = b.pth;
    if (singular) ev.exclusions.emplace("chen_3_11", singular_reason);
    else v["chen_3_11"] = chen.gap.gap;

    v["equality_3_13"] = b.thth + b.pp;
    v["equality_3_14"] = b.pth + b.tp;
    const EqualityDiagnostics eq = equality_diagnostics(geo, ws);
    v["umbilicity_defect"] = eq.umbilicity_defect;
    v["mean_curvature_match"] = eq.mean_curvature_match;
    v["minimality"] = eq.minimality;
    if (geo.frame.of(Role::slant).empty()) {
        ev.exclusions.emplace("equality_3_15", "no slant factor");
        ev.exclusions.emplace("equality_3_16", "no slant factor");
    } else {
        v["equality_3_15"] = eq.r315;
        v["equality_3_16"] = eq.r316;
        v["equality_3_15.umbilicity_defect"] = eq.umbilicity_defect;
        v["equality_3_15.mean_curvature_match"] = eq.mean_curvature_match;
    }

    const int m1 = part.size(Role::holomorphic);
    if (m1 >= 1 && m1 <= geo.m - 1) {
        const InequalityGap ls = lawson_simons_sum(geo, amb, m1);
        v["ls_2_8"] = ls.gap;
        v["ls_2_8.lhs"] = ls.lhs;
        v["ls_2_8.rhs"] = ls.rhs;
    } else {
        ev.exclusions.emplace("ls_2_8", "D^T does not split the tangent space");
    }

    if (part.size(Role::holomorphic) && part.size(Role::totally_real) && part.size(Role::slant)) {
        const Theorem42Report t = theorem42_check(geo, amb, ws, theta, sin_floor);
        v["eq_4_3"] = t.eq43_residual;
        v["eq_4_3.printed_sign_residual"] = t.eq43_printed_residual;
        v["eq_4_3.mixed_perp_theta"] = t.mixed_perp_theta;
        v["eq_4_3.hessian_trace"] = t.hessian_trace;
        v["eq_4_3.ambient_term"] = t.ambient_term;
        v["eq_4_5"] = t.eq45_residual;
        v["eq_4_4.frame_sum"] = t.eq44_frame_sum;
        v["eq_4_4.derived_coefficient_residual"] = t.eq44_derived_residual;
        v["eq_4_4.raw_residual"] = t.eq44_residual;
        v["eq_4_6.rhs"] = t.eq46_rhs;
        v["eq_4_6.lhs"] = t.lhs;
        v["eq_4_6.raw_residual"] = t.eq46_residual;
        v["thm42.lhs"] = t.lhs;
        v["thm42.rhs"] = t.gap_hessian_trace.rhs;
        v["thm42.gap_leaf_h"] = t.gap_leaf_h.gap;
        v["thm42.gap_leaf_ln_h"] = t.gap_leaf_ln_h.gap;
        v["thm42.leaf_laplacian_h"] = t.leaf_laplacian_h;
        v["thm42.leaf_laplacian_ln_h"] = t.leaf_laplacian_ln_h;
        v["thm42_gap"] = t.gap_hessian_trace.gap;
        if (singular) {
            for (const char* c : {"eq_4_4", "eq_4_6", "thm42"}) ev.exclusions.emplace(c, singular_reason);
        } else {
            v["eq_4_4"] = t.eq44_residual;
            v["eq_4_6"] = t.eq46_residual;
            v["thm42"] = t.gap_hessian_trace.gap;
        }
    } else {
        for (const char* c : {"eq_4_3", "eq_4_4", "eq_4_5", "eq_4_6", "thm42"})
            ev.exclusions.emplace(c, "needs all three factors non-trivial");
    }
    return ev;
}

bool VerificationReport::all_pass() const {
    for (const auto& c : checks)
        if (c.pass && !*c.pass) return false;
    return true;
}

namespace {

json point_json(const std::vector<std::string>& chart, const std::vector<double>& p) {
    json j = json::object();
    for (std::size_t i = 0; i < chart.size() && i < p.size(); ++i) j[chart[i]] = p[i];
    return j;
}

json number(double v) {
    if (!std::isfinite(v)) return json(nullptr);
    return json(v);
}

}  // namespace

json VerificationReport::to_json(const std::vector<std::string>& chart) const {
    json out;
    out["schema_version"] = 1;
    out["metadata"] = metadata;
    out["structure"] = structure;
    out["degenerate_points"] = degenerate_points;
    json arr = json::array();
    for (const auto& c : checks) {
        json j;
        j["name"] = c.name;
        j["kind"] = check_kind_name(c.kind);
        j["status"] = c.status;
        if (!c.note.empty()) j["note"] = c.note;
        j["tolerance"] = c.tolerance;
        j["samples_evaluated"] = c.samples_evaluated;
        j["singular_points_excluded"] = c.singular_points_excluded;
        j["precondition_points_excluded"] = c.precondition_excluded;
        const char* key = c.kind == CheckKind::inequality ? "min_gap"
                          : c.kind == CheckKind::informational ? "max_value"
                          : c.kind == CheckKind::probe ? "counterexamples_found"
                                                              : "max_residual";
        const char* at = c.kind == CheckKind::inequality ? "argmin" : "argmax";
        if (c.samples_evaluated > 0) {
            j[key] = number(c.worst);
            j[at] = point_json(chart, c.worst_point);
            json d = json::object();
            for (const auto& [k, val] : c.detail) d[k] = number(val);
            j["detail"] = d;
        } else {
            j[key] = nullptr;
        }
        j["pass"] = c.pass ? json(*c.pass) : json(nullptr);
        arr.push_back(j);
    }
    out["checks"] = arr;
    out["all_pass"] = all_pass();
    return out;
}

VerificationReport run_check(const Manifest& manifest, const CheckOptions& opts) {
    if (opts.samples <= 0) throw PreconditionError("--samples must be positive");
    for (const auto& name : opts.checks)
        if (!find_check(name)) throw PreconditionError("unknown check '" + name + "'");
    const double sin_floor = resolve_sin_floor(manifest, opts);
    const auto& spec = manifest.immersion;

    std::vector<std::vector<double>> points(opts.samples);
    for (int k = 0; k < opts.samples; ++k) points[k] = domain_sample(spec.domain, opts.seed, k);

    std::vector<PointEvaluation> evals(opts.samples);
    int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, opts.samples);
    if (threads == 1) {
        for (int k = 0; k < opts.samples; ++k) evals[k] = evaluate_point(manifest, points[k], opts, sin_floor);
    } else {
        std::vector<std::future<void>> jobs;
        for (int t = 0; t < threads; ++t)
            jobs.push_back(std::async(std::launch::async, [&, t] {
                for (int k = t; k < opts.samples; k += threads)
                    evals[k] = evaluate_point(manifest, points[k], opts, sin_floor);
            }));
        for (auto& j : jobs) j.get();
    }

    VerificationReport rep;
    for (const auto& e : evals)
        if (e.degenerate) ++rep.degenerate_points;

    for (const auto& info : check_registry()) {
        if (!opts.checks.empty() &&
            std::find(opts.checks.begin(), opts.checks.end(), info.name) == opts.checks.end())
            continue;
        CheckResult r;
        r.name = info.name;
        r.kind = info.kind;
        r.tolerance = info.kind == CheckKind::informational ? 0.0 : resolve_tolerance(manifest, opts, info);
        bool have = false;
        double tiebreak = -1.0;
        std::string first_reason;
        const std::string prefix = std::string(info.name) + ".";
        for (const auto& e : evals) {
            auto it = e.values.find(info.name);
            if (it == e.values.end()) {
                auto ex = e.exclusions.find(info.name);
                const std::string reason = ex == e.exclusions.end() ? "not evaluated" : ex->second;
                if (first_reason.empty()) first_reason = reason;
                if (reason.rfind("sin(theta)", 0) == 0) ++r.singular_points_excluded;
                else ++r.precondition_excluded;
                continue;
            }
            ++r.samples_evaluated;
            const double val = it->second;
            bool better;
            if (!have) {
                better = true;
            } else if (info.kind == CheckKind::inequality) {
                better = val < r.worst || std::isnan(val);
            } else if (info.kind == CheckKind::probe) {
                const auto d = e.values.find("nonexist_3_1.measured_dlnh");
                const double tb = d == e.values.end() ? 0.0 : d->second;
                better = val > r.worst || (val == r.worst && tb > tiebreak);
            } else {
                better = val > r.worst || std::isnan(val);
            }
            if (better) {
                have = true;
                r.worst = val;
                r.worst_point = e.point;
                r.detail.clear();
                for (const auto& [k, x] : e.values)
                    if (k.rfind(prefix, 0) == 0) r.detail[k.substr(prefix.size())] = x;
                if (info.kind == CheckKind::probe) {
                    const auto d = e.values.find("nonexist_3_1.measured_dlnh");
                    tiebreak = d == e.values.end() ? 0.0 : d->second;
                }
            }
        }
        if (r.samples_evaluated == 0) {
            r.status = std::string(info.name) == "nonexist_3_1" && first_reason == "ordering not in forbidden list"
                           ? "declined"
                           : "skipped";
            r.note = first_reason;
        } else {
            r.status = "evaluated";
            if (r.singular_points_excluded + r.precondition_excluded > 0 && !first_reason.empty())
                r.note = "excluded points: " + first_reason;
            switch (info.kind) {
                case CheckKind::identity: r.pass = r.worst <= r.tolerance; break;
                case CheckKind::inequality: r.pass = r.worst >= -r.tolerance; break;
                case CheckKind::probe: r.pass = r.worst == 0.0; break;
                case CheckKind::informational: break;
            }
        }
        rep.checks.push_back(std::move(r));
    }

    // Structure diagnostics: range of each per-point quantity.
    static const char* const structure_keys[] = {
        "min_singular_value", "holomorphic_defect", "anti_invariance_defect", "perp_slant_pairing",
        "perp_coordinate_pairing", "slant_theta", "cos_slant_theta", "slant_spread", "off_block_norm",
        "f_consistency", "h_consistency", "f_declared_mismatch", "h_declared_mismatch", "ln_f_leak", "ln_h_leak",
        "proper", "umbilicity_defect", "mean_curvature_match", "minimality", "chen_3_11.proof_remainder",
        "eq_4_4.derived_coefficient_residual", "eq_4_3.printed_sign_residual", "prop21_4.opposite_sign_residual",
        "thm42.gap_leaf_h", "thm42.gap_leaf_ln_h"};
    json st = json::object();
    for (const char* key : structure_keys) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        int n = 0;
        for (const auto& e : evals) {
            auto it = e.values.find(key);
            if (it == e.values.end() || !std::isfinite(it->second)) continue;
            lo = std::min(lo, it->second);
            hi = std::max(hi, it->second);
            ++n;
        }
        if (n == 0) continue;
        st[key] = {{"min", lo}, {"max", hi}, {"points", n}};
    }
    rep.structure = st;

    json tol = json::object();
    for (const auto& info : check_registry())
        if (info.kind != CheckKind::informational) tol[info.name] = resolve_tolerance(manifest, opts, info);
    rep.metadata = {
        {"tool", "seqwarp"},
        {"version", kVersion},
        {"manifest", manifest.name.empty() ? manifest.origin : manifest.name},
        {"manifest_hash", hex64(manifest.hash)},
        {"ordering", ordering_name(spec.partition.ordering)},
        {"factor_dims",
         {spec.partition.size(Role::holomorphic), spec.partition.size(Role::totally_real),
          spec.partition.size(Role::slant)}},
        {"ambient_dim", spec.ambient_dim()},
        {"holomorphic_curvature", manifest.holomorphic_curvature},
        {"complex_structure", manifest.complex_structure},
        {"seed", opts.seed},
        {"samples", opts.samples},
        {"sampler", "halton"},
        {"sin_floor", sin_floor},
        {"slant_reference", slant_reference_name(opts.slant_reference)},
        {"probes", opts.probes},
        {"tolerances", tol},
        {"rank_tolerance", 1e-8},
        {"block_tolerance", kBlockTol},
        {"properness_threshold", 1e-8},
    };
    return rep;
}

std::vector<GridAxis> parse_grid(const std::string& text) {
    std::vector<GridAxis> axes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw PreconditionError("grid axis '" + item + "' must look like name=lo:hi:count");
        GridAxis a;
        a.coord = item.substr(0, eq);
        const std::string range = item.substr(eq + 1);
        char extra;
        if (std::sscanf(range.c_str(), "%lf:%lf:%d%c", &a.lo, &a.hi, &a.count, &extra) != 3 || a.count < 1)
            throw PreconditionError("grid axis '" + item + "' must look like name=lo:hi:count");
        axes.push_back(a);
    }
    if (axes.empty()) throw PreconditionError("empty grid");
    return axes;
}

std::map<std::string, double> parse_assignments(const std::string& text) {
    std::map<std::string, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw PreconditionError("expected name=value, got '" + item + "'");
        const std::string value = item.substr(eq + 1);
        char* end = nullptr;
        const double d = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0') throw PreconditionError("bad number in '" + item + "'");
        out[item.substr(0, eq)] = d;
    }
    return out;
}

std::vector<double> point_from_assignments(const Manifest& manifest, const std::map<std::string, double>& values) {
    const auto& chart = manifest.immersion.chart;
    std::vector<double> p(chart.size());
    for (const auto& [name, val] : values)
        if (std::find(chart.begin(), chart.end(), name) == chart.end())
            throw PreconditionError("'" + name + "' is not a chart coordinate");
    for (std::size_t i = 0; i < chart.size(); ++i) {
        auto it = values.find(chart[i]);
        if (it == values.end()) throw PreconditionError("missing coordinate '" + chart[i] + "'");
        p[i] = it->second;
    }
    return p;
}

std::vector<std::string> sweep_quantities() {
    std::vector<std::string> q = {"slant_theta",         "cos_slant_theta",   "slant_spread",
                                  "holomorphic_defect",  "anti_invariance_defect", "perp_coordinate_pairing",
                                  "perp_slant_pairing",  "chen_gap",          "thm42_gap",
                                  "sff_norm2",           "off_block_norm",    "f",
                                  "h",                   "min_singular_value", "grad_ln_f_norm2",
                                  "grad_T_ln_h_norm2"};
    for (const auto& c : check_registry()) q.push_back(c.name);
    return q;
}

std::string run_sweep(const Manifest& manifest, const std::vector<GridAxis>& grid, const std::string& quantity,
                      const std::map<std::string, double>& fixed, const CheckOptions& opts) {
    const auto names = sweep_quantities();
    if (std::find(names.begin(), names.end(), quantity) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw PreconditionError("unknown quantity '" + quantity + "'; available: " + list);
    }
    const auto& chart = manifest.immersion.chart;
    const auto& domain = manifest.immersion.domain;
    std::vector<double> base(chart.size());
    for (std::size_t i = 0; i < chart.size(); ++i) base[i] = 0.5 * (domain[i].lo + domain[i].hi);
    for (const auto& [name, val] : fixed) {
        const auto it = std::find(chart.begin(), chart.end(), name);
        if (it == chart.end()) throw PreconditionError("'" + name + "' is not a chart coordinate");
        base[it - chart.begin()] = val;
    }
    std::vector<int> axis_index;
    for (const auto& a : grid) {
        const auto it = std::find(chart.begin(), chart.end(), a.coord);
        if (it == chart.end()) throw PreconditionError("grid coordinate '" + a.coord + "' is not in the chart");
        axis_index.push_back(static_cast<int>(it - chart.begin()));
    }
    const double sin_floor = resolve_sin_floor(manifest, opts);
    std::ostringstream out;
    for (const auto& a : grid) out << a.coord << ",";
    out << quantity << ",singular\n";
    std::vector<int> idx(grid.size(), 0);
    while (true) {
        std::vector<double> p = base;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const auto& a = grid[j];
            p[axis_index[j]] = a.count == 1 ? a.lo : a.lo + (a.hi - a.lo) * idx[j] / (a.count - 1);
        }
        const PointEvaluation ev = evaluate_point(manifest, p, opts, sin_floor);
        double value = std::numeric_limits<double>::quiet_NaN();
        bool singular = ev.degenerate;
        if (auto it = ev.values.find(quantity); it != ev.values.end()) {
            value = it->second;
        } else {
            singular = true;
        }
        if (ev.exclusions.count(quantity)) singular = true;
        // Values of excluded checks are still reported through their aliases.
        if (quantity == "chen_3_11" && std::isnan(value) && ev.values.count("chen_gap")) value = ev.values.at("chen_gap");
        if (quantity == "thm42" && std::isnan(value) && ev.values.count("thm42_gap")) value = ev.values.at("thm42_gap");
        if ((quantity == "chen_gap" && ev.exclusions.count("chen_3_11")) ||
            (quantity == "thm42_gap" && ev.exclusions.count("thm42")))
            singular = true;
        for (std::size_t j = 0; j < grid.size(); ++j) out << format_double(p[axis_index[j]]) << ",";
        out << format_double(value) << "," << (singular ? 1 : 0) << "\n";
        std::size_t j = 0;
        for (; j < grid.size(); ++j) {
            if (++idx[j] < grid[j].count) break;
            idx[j] = 0;
        }
        if (j == grid.size()) break;
    }
    return out.str();
}

namespace {

json vec_json(const Eigen::VectorXd& v) {
    json j = json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

json mat_json(const Eigen::MatrixXd& m) {
    json j = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        j.push_back(row);
    }
    return j;
}

}  // namespace

json frame_report(const Manifest& manifest, const std::vector<double>& point, const CheckOptions& opts) {
    const double sin_floor = resolve_sin_floor(manifest, opts);
    const auto& chart = manifest.immersion.chart;
    json out;
    out["schema_version"] = 1;
    out["point"] = point_json(chart, point);
    const GeometryAtPoint geo = geometry_at(manifest.immersion, point);
    out["jacobian"] = mat_json(geo.jacobian);
    out["metric"] = mat_json(geo.metric);
    out["singular_values"] = vec_json(geo.singular_values);
    json frames;
    for (Role r : {Role::holomorphic, Role::totally_real, Role::slant}) {
        json fr = json::array();
        for (const auto& e : geo.frame.of(r)) fr.push_back(vec_json(e));
        frames[role_name(r)] = fr;
    }
    out["tangent_frame"] = frames;
    out["normal_rank"] = geo.frame.normal.cols();
    const PointEvaluation ev = evaluate_point(manifest, point, opts, sin_floor);
    json vals = json::object();
    for (const auto& [k, v] : ev.values) vals[k] = number(v);
    out["values"] = vals;
    json ex = json::object();
    for (const auto& [k, v] : ev.exclusions) ex[k] = v;
    out["exclusions"] = ex;
    const KaehlerAmbient amb = manifest.ambient();
    if (!geo.frame.of(Role::slant).empty()) {
        const SlantReport s = slant_angle(geo, amb, opts.slant_reference, opts.probes);
        out["slant"] = {{"theta", s.theta},
                        {"cos_theta", s.cos_theta},
                        {"spread", s.spread},
                        {"reference", slant_reference_name(s.reference)},
                        {"point_type", point_type_name(s.point_type)}};
    }
    return out;
}

}  // namespace seqwarp
