#include "shp/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "shp/errors.hpp"

namespace shp {
namespace metrics {

double caf(int bitlength, int rehash_bits, int oood_bits) {
    if (bitlength < 1) throw InvalidParameter("caf: bitlength must be >= 1");
    if (rehash_bits < 0 || oood_bits < 0) throw InvalidParameter("caf: negative pointer bits");
    return static_cast<double>(bitlength) / std::max(1, rehash_bits + oood_bits);
}

double expected_attempts(int n) {
    if (n < 0) throw InvalidParameter("expected_attempts: n must be >= 0");
    return std::ldexp(1.0, n);
}

double expected_bits_per_attempt(int n) {
    if (n < 1) throw InvalidParameter("expected_bits_per_attempt: n must be >= 1");
    return n * std::ldexp(1.0, -n);
}

double phi_ratio(double measured_bits_per_attempt, int n) {
    return measured_bits_per_attempt / expected_bits_per_attempt(n);
}

double fitness(double caf_value, double bps, std::uint64_t n_ecc, std::uint64_t n_pr) {
    if (caf_value <= 1.0 || n_pr == 0) return 0.0;
    return bps * static_cast<double>(n_ecc) / static_cast<double>(n_pr);
}

std::optional<double> sbw(std::uint64_t legit_bits, double mean_distance) {
    if (mean_distance <= 0.0) return std::nullopt;
    return static_cast<double>(legit_bits) / mean_distance;
}

} // namespace metrics
} // namespace shp
