// seqwarp command line: check, sweep, validate, frame.
//
// Exit codes: 0 every enabled check passes, 1 at least one violation,
// 2 input error (unreadable or invalid manifest, bad options).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "seqwarp/errors.hpp"
#include "seqwarp/harness.hpp"
#include "seqwarp/manifest.hpp"

namespace {

constexpr int kInputError = 2;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw seqwarp::PreconditionError("cannot write '" + path + "'");
    out << text;
}

void print_summary(const seqwarp::VerificationReport& rep) {
    for (const auto& c : rep.checks) {
        const char* verdict = !c.pass ? "----" : (*c.pass ? "PASS" : "FAIL");
        std::printf("%-14s %-4s %-10s n=%-5d worst=%s", c.name.c_str(), verdict, c.status.c_str(),
                    c.samples_evaluated, seqwarp::format_double(c.worst).c_str());
        if (c.singular_points_excluded) std::printf(" singular=%d", c.singular_points_excluded);
        std::printf("\n");
    }
    if (rep.degenerate_points) std::printf("degenerate points: %d\n", rep.degenerate_points);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verifier for sequential warped product submanifolds of Kaehler space forms"};
    app.require_subcommand(1);

    seqwarp::CheckOptions opts;
    std::string manifest_path, report_path, checks_list, slant_ref = "slant_distribution";
    double tol = 0, sin_floor = 0;

    auto* check = app.add_subcommand("check", "sample the chart domain and evaluate every check");
    check->add_option("manifest", manifest_path, "manifest file")->required();
    check->add_option("--samples", opts.samples, "number of Halton samples")->check(CLI::PositiveNumber);
    check->add_option("--seed", opts.seed, "Halton index offset");
    auto* tol_opt = check->add_option("--tol", tol, "tolerance for every check");
    auto* floor_opt = check->add_option("--sin-floor", sin_floor, "exclude points with sin(theta) below this");
    check->add_option("--checks", checks_list, "comma-separated check names");
    check->add_option("--report", report_path, "write the JSON report here instead of stdout");
    check->add_option("--slant-reference", slant_ref, "slant_distribution or full_tangent")
        ->check(CLI::IsMember({"slant_distribution", "full_tangent"}));
    check->add_option("--probes", opts.probes, "extra slant probe directions");
    check->add_option("--threads", opts.threads, "worker threads, 0 for all cores");

    std::string grid, quantity, out_path = "-", at;
    auto* sweep = app.add_subcommand("sweep", "evaluate one quantity over a rectangular grid");
    sweep->add_option("manifest", manifest_path, "manifest file")->required();
    sweep->add_option("--grid", grid, "e.g. u1=0:2:50,t1=0.1:1.5:50")->required();
    sweep->add_option("--quantity", quantity, "quantity name")->required();
    sweep->add_option("--out", out_path, "CSV output file");
    sweep->add_option("--at", at, "fixed values of the other coordinates (default: domain midpoint)");
    sweep->add_option("--sin-floor", sin_floor, "singular threshold for csc-bearing quantities");

    auto* validate = app.add_subcommand("validate", "parse and validate a manifest");
    validate->add_option("manifest", manifest_path, "manifest file")->required();

    std::string point;
    auto* frame = app.add_subcommand("frame", "print the adapted frame and every per-point quantity");
    frame->add_option("manifest", manifest_path, "manifest file")->required();
    frame->add_option("--point", point, "e.g. u1=1,u2=2,t1=1.0472,t2=0.7854,t3=0.5236")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        const seqwarp::Manifest manifest = seqwarp::load_manifest(manifest_path);
        if (*validate) {
            const auto& p = manifest.immersion.partition;
            std::printf("ok %s: N=%d m=(%d,%d,%d) ordering=%s hash=%s\n", manifest_path.c_str(),
                        manifest.immersion.ambient_dim(), p.size(seqwarp::Role::holomorphic),
                        p.size(seqwarp::Role::totally_real), p.size(seqwarp::Role::slant),
                        seqwarp::ordering_name(p.ordering), seqwarp::hex64(manifest.hash).c_str());
            return 0;
        }
        if (sweep->count("--sin-floor") || *floor_opt) opts.sin_floor = sin_floor;
        if (*tol_opt) opts.tol = tol;
        if (!seqwarp::parse_slant_reference(slant_ref, opts.slant_reference))
            throw seqwarp::PreconditionError("bad slant reference '" + slant_ref + "'");
        if (*check) {
            std::stringstream ss(checks_list);
            for (std::string item; std::getline(ss, item, ',');)
                if (!item.empty()) opts.checks.push_back(item);
            const auto rep = seqwarp::run_check(manifest, opts);
            const std::string text = rep.to_json(manifest.immersion.chart).dump(2) + "\n";
            if (report_path.empty()) {
                std::cout << text;
            } else {
                write_text(report_path, text);
                print_summary(rep);
            }
            return rep.exit_code();
        }
        if (*sweep) {
            const auto axes = seqwarp::parse_grid(grid);
            const auto fixed = seqwarp::parse_assignments(at);
            write_text(out_path, seqwarp::run_sweep(manifest, axes, quantity, fixed, opts));
            return 0;
        }
        if (*frame) {
            const auto p = seqwarp::point_from_assignments(manifest, seqwarp::parse_assignments(point));
            std::cout << seqwarp::frame_report(manifest, p, opts).dump(2) << "\n";
            return 0;
        }
    } catch (const seqwarp::ManifestError& e) {
        std::fprintf(stderr, "%s: invalid manifest\n%s\n", manifest_path.c_str(), e.what());
        return kInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInputError;
    }
    return kInputError;
}
