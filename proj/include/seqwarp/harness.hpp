#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqwarp/manifest.hpp"
#include "seqwarp/split.hpp"

namespace seqwarp {

// identity: residual <= tol. inequality: gap >= -tol. probe: passes when no
// counterexample is found. informational: reported, never gates the exit code.
enum class CheckKind { identity, inequality, probe, informational };

struct CheckInfo {
    const char* name;
    CheckKind kind;
    double default_tolerance;
    const char* description;
};

// Every check in report order.
const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& name);

struct CheckOptions {
    int samples = 100;
    std::uint64_t seed = 42;
    std::optional<double> tol;        // overrides every tolerance
    std::optional<double> sin_floor;  // default: manifest value, then 0.1
    std::vector<std::string> checks;  // empty: all
    SlantReference slant_reference = SlantReference::slant_distribution;
    int probes = 16;
    int threads = 0;  // 0: hardware concurrency
};

// Everything computed at one chart point. `values` holds the per-check
// residual (identity), gap (inequality) or value (informational) together
// with auxiliary quantities under dotted names such as "chen_3_11.lhs".
struct PointEvaluation {
    std::vector<double> point;
    bool degenerate = false;
    std::string degenerate_reason;
    std::map<std::string, double> values;
    std::map<std::string, std::string> exclusions;  // check -> reason
};

PointEvaluation evaluate_point(const Manifest& manifest, const std::vector<double>& point,
                               const CheckOptions& opts, double sin_floor);

struct CheckResult {
    std::string name;
    CheckKind kind = CheckKind::identity;
    std::string status;  // evaluated, skipped, declined
    std::string note;
    double tolerance = 0.0;
    int samples_evaluated = 0;
    int singular_points_excluded = 0;
    int precondition_excluded = 0;
    double worst = 0.0;  // max residual, min gap, or max value
    std::vector<double> worst_point;
    std::map<std::string, double> detail;  // auxiliary values at the worst point
    std::optional<bool> pass;              // empty for skipped and informational checks
};

struct VerificationReport {
    nlohmann::json metadata;
    std::vector<CheckResult> checks;
    nlohmann::json structure;
    int degenerate_points = 0;

    bool all_pass() const;
    int exit_code() const { return all_pass() ? 0 : 1; }
    nlohmann::json to_json(const std::vector<std::string>& chart) const;
};

double resolve_tolerance(const Manifest& manifest, const CheckOptions& opts, const CheckInfo& info);
double resolve_sin_floor(const Manifest& manifest, const CheckOptions& opts);

VerificationReport run_check(const Manifest& manifest, const CheckOptions& opts);

struct GridAxis {
    std::string coord;
    double lo = 0.0, hi = 0.0;
    int count = 0;
};

// "u1=0:2:50,t1=0.1:1.5:50"
std::vector<GridAxis> parse_grid(const std::string& text);
// "u1=1,u2=2"
std::map<std::string, double> parse_assignments(const std::string& text);

// Names accepted by run_sweep besides the check names.
std::vector<std::string> sweep_quantities();

// CSV with one row per grid point: grid coordinates, value, singular flag.
std::string run_sweep(const Manifest& manifest, const std::vector<GridAxis>& grid, const std::string& quantity,
                      const std::map<std::string, double>& fixed, const CheckOptions& opts);

// Full geometric data at one point.
nlohmann::json frame_report(const Manifest& manifest, const std::vector<double>& point, const CheckOptions& opts);

// Coordinates of a point given by name; every chart coordinate is required.
std::vector<double> point_from_assignments(const Manifest& manifest, const std::map<std::string, double>& values);

std::string format_double(double v);

const char* check_kind_name(CheckKind k);

}  // namespace seqwarp
