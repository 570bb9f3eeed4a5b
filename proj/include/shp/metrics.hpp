#pragma once

#include <cstdint>
#include <optional>

namespace shp {
namespace metrics {

// Covert amplification factor: message bits conveyed per pointer bit. The
// pointer cost is max(1, m+s): a pointer always spends at least one bit of
// signal, and rehash/sequence fields add m+s when present.
double caf(int bitlength, int rehash_bits, int oood_bits);

// Expected POIs until a match for an n-bit fragment (geometric, p = 2^-n).
double expected_attempts(int n);

// n / 2^n.
double expected_bits_per_attempt(int n);

// Measured bits-per-attempt over the theoretical n/2^n.
double phi_ratio(double measured_bits_per_attempt, int n);

// 0 when CAF <= 1 or no pointers were received, else bps * n_ecc / n_pr.
double fitness(double caf_value, double bps, std::uint64_t n_ecc, std::uint64_t n_pr);

// Legitimate traffic bits per match interval; absent when there were no
// matches (mean_distance = 0).
std::optional<double> sbw(std::uint64_t legit_bits, double mean_distance);

} // namespace metrics
} // namespace shp
