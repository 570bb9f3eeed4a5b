#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shp/analysis.hpp"
#include "shp/bits.hpp"
#include "shp/characterize.hpp"
#include "shp/config.hpp"
#include "shp/ecc.hpp"
#include "shp/hashing.hpp"
#include "shp/impair.hpp"
#include "shp/metrics.hpp"
#include "shp/poi.hpp"
#include "shp/rounding.hpp"
#include "shp/search.hpp"
#include "shp/session.hpp"
#include "shp/synthetic.hpp"
#include "shp/trace.hpp"

namespace py = pybind11;
using namespace shp;

namespace {

Bits bits_arg(const std::string& s) { return bits_from_string(s); }

} // namespace

PYBIND11_MODULE(shpsim, m) {
    m.doc() = "SHP history covert channel: simulator, metrics, and detection suite";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<ProtocolError>(m, "ProtocolError");
    py::register_exception<IoError>(m, "IoError");

    // ---- core types -----------------------------------------------------
    py::class_<ChannelConfig>(m, "ChannelConfig")
        .def(py::init<>())
        .def_static("from_json", &ChannelConfig::from_json)
        .def("to_json", &ChannelConfig::to_json)
        .def("validate", &ChannelConfig::validate)
        .def_readwrite("bitlength", &ChannelConfig::bitlength)
        .def_readwrite("epsilon_places", &ChannelConfig::epsilon_places)
        .def_readwrite("subchanneling_bits", &ChannelConfig::subchanneling_bits)
        .def_readwrite("rehash_bits", &ChannelConfig::rehash_bits)
        .def_readwrite("oood_bits", &ChannelConfig::oood_bits)
        .def_readwrite("silence_ms", &ChannelConfig::silence_ms)
        .def_readwrite("shared_key", &ChannelConfig::shared_key)
        .def_readwrite("subnet", &ChannelConfig::subnet)
        .def_property(
            "inputsource", [](const ChannelConfig& c) { return to_string(c.inputsource); },
            [](ChannelConfig& c, const std::string& s) { c.inputsource = input_source_from_string(s); })
        .def_property(
            "poi_filter", [](const ChannelConfig& c) { return to_string(c.poi_filter); },
            [](ChannelConfig& c, const std::string& s) { c.poi_filter = poi_filter_from_string(s); })
        .def_property(
            "subchanneling_mode",
            [](const ChannelConfig& c) { return to_string(c.subchanneling_mode); },
            [](ChannelConfig& c, const std::string& s) {
                c.subchanneling_mode = subchannel_mode_from_string(s);
            })
        .def_property(
            "ecc", [](const ChannelConfig& c) { return to_string(c.ecc); },
            [](ChannelConfig& c, const std::string& s) { c.ecc = ecc_variant_from_string(s); });

    py::class_<PduRecord>(m, "PduRecord")
        .def(py::init<>())
        .def_readwrite("timestamp", &PduRecord::timestamp)
        .def_readwrite("length", &PduRecord::length)
        .def_readwrite("seq_index", &PduRecord::seq_index)
        .def_property(
            "src_mac", [](const PduRecord& p) { return p.src_mac.to_string(); },
            [](PduRecord& p, const std::string& s) { p.src_mac = MacAddr::parse(s); })
        .def_property(
            "dst_mac", [](const PduRecord& p) { return p.dst_mac.to_string(); },
            [](PduRecord& p, const std::string& s) { p.dst_mac = MacAddr::parse(s); })
        .def_property(
            "src_ip", [](const PduRecord& p) { return p.src_ip.to_string(); },
            [](PduRecord& p, const std::string& s) { p.src_ip = IpAddr::parse(s); })
        .def_property(
            "dst_ip", [](const PduRecord& p) { return p.dst_ip.to_string(); },
            [](PduRecord& p, const std::string& s) { p.dst_ip = IpAddr::parse(s); })
        .def_property(
            "ether_type", [](const PduRecord& p) { return to_string(p.ether_type); },
            [](PduRecord& p, const std::string& s) { p.ether_type = ether_type_from_string(s); });

    py::class_<Trace>(m, "Trace")
        .def(py::init<>())
        .def_readwrite("records", &Trace::records)
        .def_readonly("source", &Trace::source)
        .def("duration_us", &Trace::duration_us)
        .def("total_bits", &Trace::total_bits)
        .def("__len__", [](const Trace& t) { return t.records.size(); });

    py::class_<ImpairmentConfig>(m, "ImpairmentConfig")
        .def(py::init<>())
        .def_readwrite("delay_us", &ImpairmentConfig::delay_us)
        .def_readwrite("jitter_us", &ImpairmentConfig::jitter_us)
        .def_readwrite("loss", &ImpairmentConfig::loss)
        .def_readwrite("seed", &ImpairmentConfig::seed);

    // ---- core operations ------------------------------------------------
    m.def("round_epsilon", &round_epsilon, py::arg("seconds"), py::arg("places"));
    m.def("ispn_bucket", &ispn_bucket, py::arg("n"), py::arg("epsilon"));
    m.def(
        "classify_poi",
        [](const PduRecord& pdu, const std::string& filter, const std::string& subnet) {
            return classify_poi(pdu, poi_filter_from_string(filter), Ipv4Subnet::parse(subnet));
        },
        py::arg("pdu"), py::arg("filter") = "broadcast_domain",
        py::arg("subnet") = "192.168.1.0/24");
    m.def(
        "deskew_bits",
        [](std::int64_t value, std::uint32_t subchannel, const std::string& key, std::size_t n,
           std::uint32_t iteration) {
            return bits_to_string(deskew_hash_bits(value, subchannel, key, n, iteration));
        },
        py::arg("value"), py::arg("subchannel"), py::arg("key"), py::arg("n"),
        py::arg("iteration") = 0);
    m.def(
        "watchdog_checksum",
        [](const std::string& fragment, const std::string& key) {
            return watchdog_checksum(bits_arg(fragment), key);
        },
        py::arg("fragment_bits"), py::arg("key"));

    // ---- ECC --------------------------------------------------------------
    m.def("hamming_parity_count", &ecc::hamming_parity_count);
    m.def(
        "overhead_fraction",
        [](int n, const std::string& variant) {
            return ecc::overhead_fraction(n, ecc_variant_from_string(variant));
        },
        py::arg("n"), py::arg("variant"));
    m.def(
        "encode_fragment",
        [](const std::string& data, const std::string& variant) {
            return bits_to_string(ecc::encode_fragment(bits_arg(data), ecc_variant_from_string(variant)));
        },
        py::arg("data_bits"), py::arg("variant"));
    m.def(
        "decode_fragment",
        [](const std::string& codeword, int n, const std::string& variant) {
            const auto [data, status] =
                ecc::decode_fragment(bits_arg(codeword), n, ecc_variant_from_string(variant));
            const char* kind = status.ok() ? "ok"
                               : status.corrected() ? "corrected"
                                                    : "uncorrectable";
            return py::make_tuple(bits_to_string(data), kind, status.position);
        },
        py::arg("codeword_bits"), py::arg("n"), py::arg("variant"));
    m.def(
        "inline_expand",
        [](const std::string& message, int n) {
            return bits_to_string(ecc::inline_expand(bits_arg(message), n));
        },
        py::arg("message_bits"), py::arg("n"));

    // ---- metrics ----------------------------------------------------------
    m.def("caf", &metrics::caf, py::arg("bitlength"), py::arg("rehash_bits") = 0,
          py::arg("oood_bits") = 0);
    m.def("expected_attempts", &metrics::expected_attempts);
    m.def("expected_bits_per_attempt", &metrics::expected_bits_per_attempt);
    m.def("phi_ratio", &metrics::phi_ratio);
    m.def("fitness", &metrics::fitness, py::arg("caf"), py::arg("bps"), py::arg("n_ecc"),
          py::arg("n_pr"));

    // ---- simulator ----------------------------------------------------------
    m.def(
        "generate_synthetic_trace",
        [](double rate, double duration, const std::string& subnet, std::uint64_t seed,
           Microseconds quantum_us) {
            SyntheticConfig cfg;
            cfg.rate_pps = rate;
            cfg.duration_s = duration;
            cfg.subnet = subnet;
            cfg.seed = seed;
            cfg.quantum_us = quantum_us;
            return generate_synthetic_trace(cfg);
        },
        py::arg("rate_pps") = 120.0, py::arg("duration_s") = 60.0,
        py::arg("subnet") = "192.168.1.0/24", py::arg("seed") = 1, py::arg("quantum_us") = 1);
    m.def("impair", &impair, py::arg("trace"), py::arg("config"));
    m.def("load_trace", [](const std::string& path) { return load_trace(path); }, py::arg("path"));
    m.def("save_trace_csv", &save_trace_csv, py::arg("trace"), py::arg("path"));
    m.def(
        "run_session",
        [](const ChannelConfig& config, const Trace& trace, const ImpairmentConfig& sender_impair,
           const ImpairmentConfig& receiver_impair, const std::string& message_bits,
           Microseconds processing_delay_us, bool build_wire_trace) {
            SessionOptions options;
            options.processing_delay_us = processing_delay_us;
            options.build_wire_trace = build_wire_trace;
            const auto result = run_session(config, trace, sender_impair, receiver_impair,
                                            bits_arg(message_bits), options);
            py::dict out;
            out["report"] = py::module_::import("json").attr("loads")(result.report.to_json());
            if (build_wire_trace) out["wire_trace"] = result.wire_trace;
            if (result.received.message)
                out["message"] = bits_to_string(*result.received.message);
            return out;
        },
        py::arg("config"), py::arg("trace"), py::arg("sender_impair") = ImpairmentConfig{},
        py::arg("receiver_impair") = ImpairmentConfig{}, py::arg("message_bits") = std::string(),
        py::arg("processing_delay_us") = 0, py::arg("build_wire_trace") = false);

    // ---- analysis ------------------------------------------------------------
    m.def("shannon_entropy", &analysis::shannon_entropy);
    m.def(
        "ks_two_sample",
        [](std::vector<double> a, std::vector<double> b) {
            const auto r = analysis::ks_two_sample(std::move(a), std::move(b));
            return py::make_tuple(r.d, r.p);
        },
        py::arg("a"), py::arg("b"));
    m.def("compressibility_windows", &analysis::compressibility_windows, py::arg("ipds_seconds"),
          py::arg("window") = 1000);
    m.def("request_frequency",
          [](const Trace& t) { return analysis::request_frequency(t, EtherType::Arp); });
    m.def(
        "roc_auc",
        [](const std::vector<double>& pos, const std::vector<double>& neg) {
            const auto curve = analysis::roc_auc(pos, neg);
            return py::make_tuple(curve.points, curve.auc);
        },
        py::arg("scores_positive"), py::arg("scores_negative"));
    m.def(
        "gas_discretize",
        [](const std::vector<double>& ipds) {
            const auto stream = analysis::gas_discretize(ipds);
            py::dict out;
            out["symbols"] = stream.symbols;
            out["m_f"] = stream.thresholds.m_f;
            out["m_b"] = stream.thresholds.m_b;
            return out;
        },
        py::arg("ipds"));
    m.def("arp_ipds", [](const Trace& t) { return analysis::ipds_of(t, EtherType::Arp); });
    m.def(
        "input_value_series",
        [](const Trace& trace, const std::string& source, int eps, const std::string& filter,
           const std::string& subnet) {
            return analysis::input_value_series(trace, input_source_from_string(source), eps,
                                                poi_filter_from_string(filter), subnet);
        },
        py::arg("trace"), py::arg("source"), py::arg("epsilon_places") = 6,
        py::arg("filter") = "all", py::arg("subnet") = "192.168.1.0/24");

    py::class_<analysis::MarkovModel>(m, "MarkovModel")
        .def(py::init<int, double>(), py::arg("order") = 1, py::arg("smoothing") = 1.0)
        .def("train", &analysis::MarkovModel::train)
        .def("surprisal_bits", &analysis::MarkovModel::surprisal_bits)
        .def("score_windows", &analysis::MarkovModel::score_windows);

    // ---- search ------------------------------------------------------------
    m.def("enumerate_space_size", []() {
        return search::enumerate_space(search::ParameterSpace{}).size();
    });
    m.def(
        "run_search",
        [](std::size_t budget, std::uint64_t seed, std::size_t population, double rate,
           double duration, std::size_t message_bits, int workers) {
            search::ParameterSpace space;
            SyntheticConfig syn;
            syn.rate_pps = rate;
            syn.duration_s = duration;
            syn.seed = seed;
            const Trace trace = generate_synthetic_trace(syn);
            std::mt19937_64 rng(seed ^ 0x6d657373ull);
            const Bits message = random_bits(message_bits, rng);
            search::SearchOptions options;
            options.population = population;
            options.workers = workers;
            auto fitness = [&](const ChannelConfig& cfg) {
                return run_session(cfg, trace, ImpairmentConfig{}, ImpairmentConfig{}, message)
                    .report.fitness;
            };
            const auto records = search::run_search(space, budget, fitness, seed, options);
            py::list out;
            for (const auto& r : records) {
                py::dict d;
                d["config"] = py::module_::import("json").attr("loads")(r.config.to_json());
                d["fitness"] = r.fitness;
                d["generation"] = r.generation;
                out.append(d);
            }
            return out;
        },
        py::arg("budget") = 64, py::arg("seed") = 1, py::arg("population") = 16,
        py::arg("rate_pps") = 120.0, py::arg("duration_s") = 20.0, py::arg("message_bits") = 256,
        py::arg("workers") = 1);

    m.attr("__version__") = "0.1.0";
}
