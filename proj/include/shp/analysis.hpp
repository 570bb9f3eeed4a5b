#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shp/trace.hpp"

namespace shp {
namespace analysis {

// Plug-in Shannon entropy (bits) of the empirical distribution.
double shannon_entropy(const std::vector<std::int64_t>& samples);

struct KsResult {
    double d = 0; // sup |F - G| over the pooled sample points
    double p = 1; // asymptotic two-sample p-value (effective-n corrected)
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Canonical IPD string form for compressibility scoring: fixed six decimal
// places of a second, comma-joined. kappa is compressor-relative; we pin
// DEFLATE (zlib) at its default level.
extern const char* const kCompressorId;
std::string serialize_ipds(const std::vector<double>& ipds_seconds);
double kappa_of_string(const std::string& s);

// One kappa per complete window of `window` IPDs; the trailing partial
// window is discarded. Fewer than one window yields an empty list.
std::vector<double> compressibility_windows(const std::vector<double>& ipds_seconds,
                                            std::size_t window = 1000);

// Per-source-address counts of requests of the given protocol class.
std::map<std::string, std::uint64_t> request_frequency(const Trace& trace,
                                                       EtherType protocol = EtherType::Arp);

struct RocCurve {
    std::vector<std::pair<double, double>> points; // (fpr, tpr) per threshold
    double auc = 0;                                // Mann-Whitney, ties count 1/2
};
RocCurve roc_auc(const std::vector<double>& scores_positive,
                 const std::vector<double>& scores_negative);

// Inter-packet delays (seconds) of the given protocol class.
std::vector<double> ipds_of(const Trace& trace, std::optional<EtherType> only = std::nullopt);

// Context-aware variation encoding: clip to the fitting set's
// [0.5%, 99.5%] quantiles, derive forward/backward derivatives on aligned
// center points, and emit 4-bit codes 8*[f>0] + 4*[b>0] + 2*[|f|>m_f]
// + 1*[|b|>m_b] with medians m_f, m_b frozen on the fitting set.
struct GasThresholds {
    double m_f = 0;
    double m_b = 0;
    double clip_lo = 0;
    double clip_hi = 0;
};

struct SymbolStream {
    std::vector<std::uint8_t> symbols; // alphabet {0..15}
    GasThresholds thresholds;
};

SymbolStream gas_discretize(const std::vector<double>& ipds,
                            std::optional<GasThresholds> thresholds = std::nullopt);

// Frequency-based surrogate for a learned next-state predictor: an order-k
// Markov table over the 16-state alphabet scored by mean per-symbol
// surprisal (-log2 P(next | context)) with additive smoothing.
class MarkovModel {
public:
    explicit MarkovModel(int order = 1, double smoothing = 1.0);
    void train(const std::vector<std::uint8_t>& symbols);
    bool trained() const { return trained_; }
    int order() const { return order_; }
    double surprisal_bits(const std::vector<std::uint8_t>& symbols) const; // whole stream
    // Mean surprisal per complete window of `window_len` symbols.
    std::vector<double> score_windows(const std::vector<std::uint8_t>& symbols,
                                      std::size_t window_len) const;

private:
    int order_;
    double smoothing_;
    bool trained_ = false;
    std::vector<std::uint32_t> counts_; // [context][symbol], context base-16
    std::vector<std::uint64_t> totals_;
};

} // namespace analysis
} // namespace shp
