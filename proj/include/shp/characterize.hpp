#pragma once

#include <vector>

#include "shp/config.hpp"
#include "shp/history.hpp"
#include "shp/trace.hpp"

namespace shp {
namespace analysis {

// Rounded input values a passive observer derives from a capture, for
// entropy characterization. Signal-relative sources (ISD/ISPN) cannot be
// derived from a capture alone and are rejected with ConfigError; the
// connection anchor for ICD/ICPN is the first POI.
std::vector<std::int64_t> input_value_series(const Trace& trace, InputSource source,
                                             int epsilon_places, PoiFilter filter,
                                             const std::string& subnet);

} // namespace analysis
} // namespace shp
