#include "shp/impair.hpp"

#include <algorithm>

#include "shp/errors.hpp"
#include "shp/rng.hpp"

namespace shp {

void ImpairmentConfig::validate() const {
    if (loss < 0.0 || loss > 1.0) throw ConfigError("impairment loss must be in [0,1]");
    if (jitter_us < 0) throw ConfigError("impairment jitter must be >= 0");
}

namespace {

Microseconds uniform_jitter(std::uint64_t draw, Microseconds half_width) {
    if (half_width == 0) return 0;
    // Uniform integer in [-J, +J].
    const auto span = static_cast<std::uint64_t>(2 * half_width + 1);
    return static_cast<Microseconds>(draw % span) - half_width;
}

} // namespace

Trace impair(const Trace& trace, const ImpairmentConfig& cfg) {
    cfg.validate();
    Trace out;
    out.source = trace.source;
    out.epoch_us = trace.epoch_us;
    if (cfg.is_identity()) {
        out.records = trace.records;
        return out;
    }
    out.records.reserve(trace.records.size());
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        if (cfg.loss > 0.0 &&
            unit_double(stream_draw(cfg.seed, 0, i)) < cfg.loss)
            continue;
        PduRecord r = trace.records[i];
        r.timestamp += cfg.delay_us + uniform_jitter(stream_draw(cfg.seed, 1, i), cfg.jitter_us);
        out.records.push_back(std::move(r));
    }
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const PduRecord& a, const PduRecord& b) { return a.timestamp < b.timestamp; });
    for (std::size_t i = 0; i < out.records.size(); ++i) out.records[i].seq_index = i;
    return out;
}

bool impair_signal(Microseconds emit_ts, const ImpairmentConfig& cfg, std::uint64_t signal_index,
                   Microseconds& arrival_ts) {
    if (cfg.loss > 0.0 && unit_double(stream_draw(cfg.seed, 2, signal_index)) < cfg.loss)
        return false;
    arrival_ts = emit_ts + cfg.delay_us +
                 uniform_jitter(stream_draw(cfg.seed, 3, signal_index), cfg.jitter_us);
    return true;
}

} // namespace shp
