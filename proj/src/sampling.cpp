#include "seqwarp/sampling.hpp"

#include <stdexcept>

namespace seqwarp {

namespace {

int nth_prime(int n) {
    static std::vector<int> primes{2};
    for (int c = primes.back() + 1; static_cast<int>(primes.size()) <= n; ++c) {
        bool prime = true;
        for (int p : primes) {
            if (p * p > c) break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(c);
    }
    return primes[n];
}

}  // namespace

double radical_inverse(std::uint64_t index, int base) {
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= base;
    }
    return result;
}

std::vector<double> halton_point(std::uint64_t index, int dims) {
    std::vector<double> p(dims);
    for (int d = 0; d < dims; ++d) p[d] = radical_inverse(index, nth_prime(d));
    return p;
}

std::vector<double> domain_sample(const std::vector<Interval>& domain, std::uint64_t seed, std::uint64_t k) {
    const int dims = static_cast<int>(domain.size());
    std::vector<double> u = halton_point(seed + k + 1, dims);
    for (int d = 0; d < dims; ++d) u[d] = domain[d].lo + u[d] * (domain[d].hi - domain[d].lo);
    return u;
}

std::vector<Eigen::VectorXd> subspace_probes(const std::vector<Eigen::VectorXd>& basis, int extra) {
    std::vector<Eigen::VectorXd> out(basis.begin(), basis.end());
    const int d = static_cast<int>(basis.size());
    if (d < 2) return out;
    std::uint64_t index = 1;
    while (static_cast<int>(out.size()) < d + extra) {
        std::vector<double> c = halton_point(index++, d);
        double norm2 = 0.0;
        for (auto& x : c) {
            x = 2.0 * x - 1.0;
            norm2 += x * x;
        }
        if (norm2 < 1e-6) continue;
        Eigen::VectorXd v = Eigen::VectorXd::Zero(basis[0].size());
        for (int j = 0; j < d; ++j) v += (c[j] / std::sqrt(norm2)) * basis[j];
        out.push_back(v);
    }
    return out;
}

}  // namespace seqwarp
