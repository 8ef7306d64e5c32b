#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "seqwarp/immersion.hpp"
#include "seqwarp/kaehler.hpp"
#include "seqwarp/warped.hpp"

namespace seqwarp {

// A parsed and validated immersion manifest.
//
//   [meta]         name, description
//   [ambient]      real_dim, holomorphic_curvature, complex_structure
//                  ("consecutive-pairs" or an N x N matrix)
//   [chart]        coords, holomorphic, totally_real, slant, ordering,
//                  domain.<coord> = [lo, hi]
//   [immersion]    x1 ... xN
//   [warping]      f, h (optional)
//   [base_metrics] <coord> = "<expr>" for factor-2 and factor-3 coordinates
//   [tolerances]   <check name> = value, default = value, sin_floor = value
struct Manifest {
    std::string name;
    std::string description;
    std::string origin;
    std::uint64_t hash = 0;  // FNV-1a of the source text

    ImmersionSpec immersion;
    std::string complex_structure = "consecutive-pairs";
    Eigen::MatrixXd J;
    double holomorphic_curvature = 0.0;
    WarpingSpec warping;
    bool has_ordering_tag = false;
    std::map<std::string, double> tolerances;
    std::optional<double> sin_floor;

    KaehlerAmbient ambient() const { return KaehlerAmbient(J, holomorphic_curvature); }
};

// Every problem is collected into a single ManifestError.
Manifest parse_manifest(std::string_view text, const std::string& origin = "<string>");
Manifest load_manifest(const std::string& path);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace seqwarp
