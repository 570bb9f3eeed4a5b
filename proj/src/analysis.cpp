#include "shp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <zlib.h>

#include "shp/errors.hpp"

namespace shp {
namespace analysis {

const char* const kCompressorId = "deflate(zlib)/default-level";

double shannon_entropy(const std::vector<std::int64_t>& samples) {
    if (samples.empty()) throw InvalidParameter("shannon_entropy: empty sample");
    std::unordered_map<std::int64_t, std::uint64_t> counts;
    for (auto v : samples) ++counts[v];
    const double n = static_cast<double>(samples.size());
    double h = 0;
    for (const auto& [value, count] : counts) {
        (void)value;
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double ks_q(double lambda) {
    if (lambda < 1e-9) return 1.0;
    double sum = 0;
    double sign = 1;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 1e-300, 1.0);
}

} // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InvalidParameter("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        d = std::max(d, std::fabs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    KsResult r;
    r.d = d;
    const double ne = na * nb / (na + nb);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    r.p = ks_q(lambda);
    return r;
}

std::string serialize_ipds(const std::vector<double>& ipds_seconds) {
    std::string out;
    out.reserve(ipds_seconds.size() * 9);
    char buf[64];
    for (std::size_t i = 0; i < ipds_seconds.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f", ipds_seconds[i]);
        if (i) out += ',';
        out += buf;
    }
    return out;
}

double kappa_of_string(const std::string& s) {
    if (s.empty()) throw InvalidParameter("kappa_of_string: empty string");
    uLongf bound = compressBound(static_cast<uLong>(s.size()));
    std::vector<Bytef> buf(bound);
    const int rc = compress2(buf.data(), &bound, reinterpret_cast<const Bytef*>(s.data()),
                             static_cast<uLong>(s.size()), Z_DEFAULT_COMPRESSION);
    if (rc != Z_OK) throw Error("zlib compress failed");
    return 1.0 - static_cast<double>(bound) / static_cast<double>(s.size());
}

std::vector<double> compressibility_windows(const std::vector<double>& ipds_seconds,
                                            std::size_t window) {
    if (window == 0) throw InvalidParameter("compressibility_windows: window must be >= 1");
    std::vector<double> kappas;
    for (std::size_t off = 0; off + window <= ipds_seconds.size(); off += window) {
        std::vector<double> w(ipds_seconds.begin() + static_cast<std::ptrdiff_t>(off),
                              ipds_seconds.begin() + static_cast<std::ptrdiff_t>(off + window));
        kappas.push_back(kappa_of_string(serialize_ipds(w)));
    }
    return kappas;
}

std::map<std::string, std::uint64_t> request_frequency(const Trace& trace, EtherType protocol) {
    std::map<std::string, std::uint64_t> hist;
    for (const auto& r : trace.records) {
        if (r.ether_type != protocol) continue;
        const std::string key = r.src_ip.len > 0 ? r.src_ip.to_string() : r.src_mac.to_string();
        ++hist[key];
    }
    return hist;
}

RocCurve roc_auc(const std::vector<double>& scores_positive,
                 const std::vector<double>& scores_negative) {
    if (scores_positive.empty() || scores_negative.empty())
        throw InvalidParameter("roc_auc: both classes must be non-empty");
    // Mann-Whitney with ties counted 1/2.
    double wins = 0;
    for (double p : scores_positive)
        for (double n : scores_negative) {
            if (p > n) wins += 1;
            else if (p == n) wins += 0.5;
        }
    RocCurve curve;
    curve.auc = wins / (static_cast<double>(scores_positive.size()) *
                        static_cast<double>(scores_negative.size()));

    // Threshold sweep over the pooled score values, descending.
    std::vector<double> thresholds;
    thresholds.reserve(scores_positive.size() + scores_negative.size());
    thresholds.insert(thresholds.end(), scores_positive.begin(), scores_positive.end());
    thresholds.insert(thresholds.end(), scores_negative.begin(), scores_negative.end());
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    curve.points.emplace_back(0.0, 0.0);
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (double p : scores_positive) tp += p >= t;
        for (double n : scores_negative) fp += n >= t;
        curve.points.emplace_back(fp / static_cast<double>(scores_negative.size()),
                                  tp / static_cast<double>(scores_positive.size()));
    }
    curve.points.emplace_back(1.0, 1.0);
    return curve;
}

std::vector<double> ipds_of(const Trace& trace, std::optional<EtherType> only) {
    std::vector<double> ipds;
    Microseconds last = -1;
    for (const auto& r : trace.records) {
        if (only && r.ether_type != *only) continue;
        if (last >= 0) ipds.push_back(seconds_from_us(r.timestamp - last));
        last = r.timestamp;
    }
    return ipds;
}

namespace {

// Nearest-rank quantile: smallest sample at cumulative probability >= p.
double quantile_nearest_rank(std::vector<double> sorted, double p) {
    const auto n = static_cast<double>(sorted.size());
    auto idx = static_cast<std::size_t>(std::ceil(p * n));
    if (idx > 0) --idx;
    if (idx >= sorted.size()) idx = sorted.size() - 1;
    return sorted[idx];
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

SymbolStream gas_discretize(const std::vector<double>& ipds,
                            std::optional<GasThresholds> thresholds) {
    if (ipds.size() < 3) throw InvalidParameter("gas_discretize: need at least 3 IPDs");

    GasThresholds th;
    if (thresholds) {
        th = *thresholds;
    } else {
        std::vector<double> sorted = ipds;
        std::sort(sorted.begin(), sorted.end());
        th.clip_lo = quantile_nearest_rank(sorted, 0.005);
        th.clip_hi = quantile_nearest_rank(sorted, 0.995);
    }

    std::vector<double> clipped(ipds.size());
    for (std::size_t i = 0; i < ipds.size(); ++i)
        clipped[i] = std::clamp(ipds[i], th.clip_lo, th.clip_hi);

    std::vector<double> f(ipds.size() - 2), b(ipds.size() - 2);
    for (std::size_t i = 1; i + 1 < clipped.size(); ++i) {
        f[i - 1] = clipped[i + 1] - clipped[i];
        b[i - 1] = clipped[i - 1] - clipped[i];
    }
    if (!thresholds) {
        std::vector<double> af(f.size()), ab(b.size());
        for (std::size_t i = 0; i < f.size(); ++i) af[i] = std::fabs(f[i]);
        for (std::size_t i = 0; i < b.size(); ++i) ab[i] = std::fabs(b[i]);
        th.m_f = median(af);
        th.m_b = median(ab);
    }

    SymbolStream out;
    out.thresholds = th;
    out.symbols.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::uint8_t code = 0;
        if (f[i] > 0) code |= 8;
        if (b[i] > 0) code |= 4;
        if (std::fabs(f[i]) > th.m_f) code |= 2;
        if (std::fabs(b[i]) > th.m_b) code |= 1;
        out.symbols[i] = code;
    }
    return out;
}

MarkovModel::MarkovModel(int order, double smoothing) : order_(order), smoothing_(smoothing) {
    if (order_ < 1 || order_ > 4) throw InvalidParameter("MarkovModel: order must be in [1,4]");
    if (smoothing_ <= 0) throw InvalidParameter("MarkovModel: smoothing must be > 0");
    std::size_t contexts = 1;
    for (int i = 0; i < order_; ++i) contexts *= 16;
    counts_.assign(contexts * 16, 0);
    totals_.assign(contexts, 0);
}

void MarkovModel::train(const std::vector<std::uint8_t>& symbols) {
    const auto k = static_cast<std::size_t>(order_);
    for (std::size_t i = k; i < symbols.size(); ++i) {
        std::size_t ctx = 0;
        for (std::size_t j = i - k; j < i; ++j) ctx = ctx * 16 + (symbols[j] & 0xf);
        ++counts_[ctx * 16 + (symbols[i] & 0xf)];
        ++totals_[ctx];
    }
    if (symbols.size() > k) trained_ = true;
}

double MarkovModel::surprisal_bits(const std::vector<std::uint8_t>& symbols) const {
    if (!trained_) throw Error("MarkovModel: score requested before training");
    const auto k = static_cast<std::size_t>(order_);
    if (symbols.size() <= k) throw InvalidParameter("MarkovModel: stream shorter than order");
    double total = 0;
    std::size_t scored = 0;
    for (std::size_t i = k; i < symbols.size(); ++i) {
        std::size_t ctx = 0;
        for (std::size_t j = i - k; j < i; ++j) ctx = ctx * 16 + (symbols[j] & 0xf);
        const double c = counts_[ctx * 16 + (symbols[i] & 0xf)];
        const double tot = static_cast<double>(totals_[ctx]);
        total += -std::log2((c + smoothing_) / (tot + 16.0 * smoothing_));
        ++scored;
    }
    return total / static_cast<double>(scored);
}

std::vector<double> MarkovModel::score_windows(const std::vector<std::uint8_t>& symbols,
                                               std::size_t window_len) const {
    if (window_len == 0) throw InvalidParameter("MarkovModel: window_len must be >= 1");
    std::vector<double> scores;
    const auto k = static_cast<std::size_t>(order_);
    for (std::size_t off = 0; off + window_len <= symbols.size(); off += window_len) {
        if (window_len <= k) break;
        std::vector<std::uint8_t> w(symbols.begin() + static_cast<std::ptrdiff_t>(off),
                                    symbols.begin() + static_cast<std::ptrdiff_t>(off + window_len));
        scores.push_back(surprisal_bits(w));
    }
    return scores;
}

} // namespace analysis
} // namespace shp
