#include "shp/characterize.hpp"

#include "shp/errors.hpp"
#include "shp/poi.hpp"

namespace shp {
namespace analysis {

std::vector<std::int64_t> input_value_series(const Trace& trace, InputSource source,
                                             int epsilon_places, PoiFilter filter,
                                             const std::string& subnet) {
    if (source == InputSource::Isd || source == InputSource::Ispn)
        throw ConfigError("entropy of signal-relative sources (ISD/ISPN) is not derivable "
                          "from a capture alone");
    ChannelConfig cfg;
    cfg.inputsource = source;
    cfg.epsilon_places = epsilon_places;
    cfg.poi_filter = filter;
    cfg.subnet = subnet;

    const Ipv4Subnet prefix = cfg.subnet_prefix();
    HistoryState state;
    std::vector<std::int64_t> values;
    bool anchored = false;
    for (const auto& pdu : trace.records) {
        if (!classify_poi(pdu, filter, prefix)) continue;
        if (!anchored) { // first POI anchors the connection
            state.on_start(pdu.timestamp);
            anchored = true;
        }
        if (auto v = input_value(state, pdu, cfg)) values.push_back(v->rounded);
        state.record_poi(pdu, subchannel_of(pdu, cfg, state.last_global_poi_ts));
    }
    return values;
}

} // namespace analysis
} // namespace shp
