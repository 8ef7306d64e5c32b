#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "seqwarp/immersion.hpp"

namespace seqwarp {

// Radical inverse of `index` in `base`.
double radical_inverse(std::uint64_t index, int base);

// Point of the Halton sequence in [0,1)^dims, bases 2, 3, 5, 7, ...
std::vector<double> halton_point(std::uint64_t index, int dims);

// k-th domain sample for a given seed: Halton index seed + k + 1 mapped
// affinely onto the domain box.
std::vector<double> domain_sample(const std::vector<Interval>& domain, std::uint64_t seed, std::uint64_t k);

// Unit vectors (w.r.t. the orthonormal `basis`) used to probe a subspace:
// the basis vectors themselves followed by `extra` quasi-random
// combinations.
std::vector<Eigen::VectorXd> subspace_probes(const std::vector<Eigen::VectorXd>& basis, int extra);

}  // namespace seqwarp
