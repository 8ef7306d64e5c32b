#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seqwarp/errors.hpp"
#include "seqwarp/expr.hpp"
#include "seqwarp/harness.hpp"
#include "seqwarp/immersion.hpp"
#include "seqwarp/jet.hpp"
#include "seqwarp/manifest.hpp"
#include "seqwarp/split.hpp"

namespace py = pybind11;
using namespace seqwarp;

namespace {

CheckOptions make_options(int samples, std::uint64_t seed, std::optional<double> tol,
                          std::optional<double> sin_floor, std::vector<std::string> checks,
                          const std::string& slant_reference, int threads) {
    CheckOptions o;
    o.samples = samples;
    o.seed = seed;
    o.tol = tol;
    o.sin_floor = sin_floor;
    o.checks = std::move(checks);
    o.threads = threads;
    if (!parse_slant_reference(slant_reference, o.slant_reference))
        throw PreconditionError("bad slant reference '" + slant_reference + "'");
    return o;
}

py::dict geometry_dict(const GeometryAtPoint& geo) {
    py::dict d;
    d["m"] = geo.m;
    d["N"] = geo.N;
    d["jacobian"] = geo.jacobian;
    d["metric"] = geo.metric;
    d["singular_values"] = geo.singular_values;
    std::vector<Eigen::VectorXd> sff(geo.sff.begin(), geo.sff.end());
    d["sff"] = sff;
    std::vector<double> riemann(geo.riemann.begin(), geo.riemann.end());
    d["riemann"] = riemann;
    d["tangent_frame"] = geo.frame.tangent;
    d["normal_frame"] = geo.frame.normal;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sequential warped product submanifold verifier";

    auto base = py::register_exception<std::runtime_error>(m, "SeqwarpError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<UnknownIdentifier>(m, "UnknownIdentifier", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<RankDeficiency>(m, "RankDeficiency", base.ptr());
    py::register_exception<ManifestError>(m, "ManifestError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

    m.def(
        "canonical",
        [](const std::string& source, const std::vector<std::string>& chart) {
            return to_string(parse_expression(source, chart), chart);
        },
        py::arg("source"), py::arg("chart"), "Parse and print in canonical fully parenthesized form.");
    m.def(
        "evaluate",
        [](const std::string& source, const std::vector<std::string>& chart, const std::vector<double>& point) {
            return eval_scalar(parse_expression(source, chart), point);
        },
        py::arg("source"), py::arg("chart"), py::arg("point"));
    m.def(
        "partial",
        [](const std::string& source, const std::vector<std::string>& chart, const std::vector<double>& point,
           const std::vector<int>& indices, bool finite_difference) {
            const ExprNode e = parse_expression(source, chart);
            const int order = static_cast<int>(indices.size());
            const Jet j = finite_difference ? finite_difference_jet(e, point, order) : evaluate_jet(e, point, order);
            return j.partial(std::span<const int>(indices));
        },
        py::arg("source"), py::arg("chart"), py::arg("point"), py::arg("indices"),
        py::arg("finite_difference") = false, "Mixed partial derivative by forward-mode jets or finite differences.");

    py::class_<Manifest>(m, "Manifest")
        .def_readonly("name", &Manifest::name)
        .def_readonly("description", &Manifest::description)
        .def_readonly("holomorphic_curvature", &Manifest::holomorphic_curvature)
        .def_property_readonly("chart", [](const Manifest& mf) { return mf.immersion.chart; })
        .def_property_readonly("ambient_dim", [](const Manifest& mf) { return mf.immersion.ambient_dim(); })
        .def_property_readonly("hash", [](const Manifest& mf) { return hex64(mf.hash); })
        .def_property_readonly("ordering",
                               [](const Manifest& mf) { return ordering_name(mf.immersion.partition.ordering); })
        .def_property_readonly("factor_dims", [](const Manifest& mf) {
            const auto& p = mf.immersion.partition;
            return std::vector<int>{p.size(Role::holomorphic), p.size(Role::totally_real), p.size(Role::slant)};
        });

    m.def("load_manifest", &load_manifest, py::arg("path"));
    m.def(
        "parse_manifest", [](const std::string& text) { return parse_manifest(text); }, py::arg("text"));

    m.def(
        "run_check_json",
        [](const Manifest& mf, int samples, std::uint64_t seed, std::optional<double> tol,
           std::optional<double> sin_floor, std::vector<std::string> checks, const std::string& slant_reference,
           int threads) {
            const CheckOptions o = make_options(samples, seed, tol, sin_floor, std::move(checks), slant_reference,
                                                threads);
            VerificationReport rep;
            {
                py::gil_scoped_release release;
                rep = run_check(mf, o);
            }
            return rep.to_json(mf.immersion.chart).dump(2);
        },
        py::arg("manifest"), py::arg("samples") = 100, py::arg("seed") = 42, py::arg("tol") = py::none(),
        py::arg("sin_floor") = py::none(), py::arg("checks") = std::vector<std::string>{},
        py::arg("slant_reference") = "slant_distribution", py::arg("threads") = 0);

    m.def(
        "run_sweep",
        [](const Manifest& mf, const std::string& grid, const std::string& quantity, const std::string& at,
           std::optional<double> sin_floor) {
            CheckOptions o;
            o.sin_floor = sin_floor;
            return run_sweep(mf, parse_grid(grid), quantity, parse_assignments(at), o);
        },
        py::arg("manifest"), py::arg("grid"), py::arg("quantity"), py::arg("at") = "",
        py::arg("sin_floor") = py::none(), "CSV text: grid coordinates, value, singular flag.");

    m.def(
        "frame_report_json",
        [](const Manifest& mf, const std::vector<double>& point) {
            return frame_report(mf, point, CheckOptions{}).dump(2);
        },
        py::arg("manifest"), py::arg("point"));

    m.def(
        "evaluate_point",
        [](const Manifest& mf, const std::vector<double>& point) {
            CheckOptions o;
            return evaluate_point(mf, point, o, resolve_sin_floor(mf, o)).values;
        },
        py::arg("manifest"), py::arg("point"), "Every per-point quantity by name.");

    m.def(
        "geometry",
        [](const Manifest& mf, const std::vector<double>& point) {
            return geometry_dict(geometry_at(mf.immersion, point));
        },
        py::arg("manifest"), py::arg("point"));

    m.def("check_names", [] {
        std::vector<std::string> names;
        for (const auto& c : check_registry()) names.emplace_back(c.name);
        return names;
    });
}
