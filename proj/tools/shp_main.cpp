#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "shp/analysis.hpp"
#include "shp/bits.hpp"
#include "shp/characterize.hpp"
#include "shp/config.hpp"
#include "shp/errors.hpp"
#include "shp/hashing.hpp"
#include "shp/manifest.hpp"
#include "shp/metrics.hpp"
#include "shp/search.hpp"
#include "shp/session.hpp"
#include "shp/synthetic.hpp"
#include "shp/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "json";
    std::uint64_t seed = 1;
    int workers = 1;
};

shp::ChannelConfig load_config(const std::string& explicit_path) {
    std::string path = explicit_path;
    if (path.empty()) {
        if (const char* env = std::getenv("SHP_CONFIG")) path = env;
    }
    if (path.empty()) return shp::ChannelConfig{}; // defaults
    std::ifstream in(path, std::ios::binary);
    if (!in) throw shp::IoError("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return shp::ChannelConfig::from_json(text);
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw shp::IoError("cannot create output directory: " + dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw shp::IoError("cannot write: " + path);
    out << text;
    if (!out) throw shp::IoError("write failed: " + path);
}

shp::Bits load_message(const std::string& file, std::uint64_t random_bits_n, std::uint64_t seed) {
    if (!file.empty()) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw shp::IoError("cannot open message file: " + file);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        if (bytes.empty()) throw shp::ConfigError("message file is empty: " + file);
        return shp::bits_unpack(bytes, bytes.size() * 8);
    }
    std::mt19937_64 rng(seed ^ 0x6d657373ull); // distinct stream from impairments
    return shp::random_bits(random_bits_n, rng);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quartile_of(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0;
    const double idx = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (idx - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// ---------------------------------------------------------------- simulate
int cmd_simulate(const CommonArgs& common, const std::string& trace_path, double syn_rate,
                 double syn_duration, std::int64_t syn_quantum, const std::string& message_file,
                 std::uint64_t message_bits, const shp::ImpairmentConfig& sender_imp,
                 const shp::ImpairmentConfig& receiver_imp, std::int64_t processing_delay_us,
                 bool export_trace, bool events_csv) {
    const auto t0 = std::chrono::steady_clock::now();
    shp::ChannelConfig config = load_config(common.config_path);

    shp::RunManifest manifest;
    manifest.command = "simulate";
    manifest.config_json = config.to_json();
    manifest.seeds["seed"] = common.seed;
    manifest.seeds["sender_impair"] = sender_imp.seed;
    manifest.seeds["receiver_impair"] = receiver_imp.seed;

    shp::Trace trace;
    if (!trace_path.empty()) {
        trace = shp::load_trace(trace_path);
        manifest.add_input(trace_path);
    } else {
        shp::SyntheticConfig syn;
        syn.rate_pps = syn_rate;
        syn.duration_s = syn_duration;
        syn.quantum_us = syn_quantum;
        syn.seed = common.seed;
        syn.subnet = config.subnet;
        trace = shp::generate_synthetic_trace(syn);
    }
    if (!message_file.empty()) manifest.add_input(message_file);
    const shp::Bits message = load_message(message_file, message_bits, common.seed);

    shp::SessionOptions options;
    options.processing_delay_us = processing_delay_us;
    options.build_wire_trace = export_trace;
    options.log_events = events_csv;
    const shp::SessionResult result =
        shp::run_session(config, trace, sender_imp, receiver_imp, message, options);

    ensure_out_dir(common.out_dir);
    const std::string report_path = common.out_dir + "/report.json";
    write_text(report_path, result.report.to_json() + "\n");
    manifest.outputs.push_back(report_path);

    if (export_trace) {
        const std::string wire_path = common.out_dir + "/wire_trace.csv";
        shp::save_trace_csv(result.wire_trace, wire_path);
        manifest.outputs.push_back(wire_path);
    }
    if (events_csv) {
        std::string rows = "ts_us,node,event,detail\n";
        for (const auto& e : result.events)
            rows += std::to_string(e.ts) + "," + e.node + "," + e.event + "," + e.detail + "\n";
        const std::string events_path = common.out_dir + "/events.csv";
        write_text(events_path, rows);
        manifest.outputs.push_back(events_path);
    }

    manifest.wall_clock_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count());
    const std::string manifest_path = common.out_dir + "/manifest.json";
    manifest.outputs.push_back(manifest_path);
    manifest.write(manifest_path);

    if (common.format == "csv") {
        std::cout << "matches,fragments_ok,fragments_failed,bits_delivered,bps,fitness\n"
                  << result.report.matches << ',' << result.report.fragments_ok << ','
                  << result.report.fragments_failed << ',' << result.report.message_bits_delivered
                  << ',' << result.report.bps << ',' << result.report.fitness << '\n';
    } else {
        std::cout << result.report.to_json() << '\n';
    }
    return 0;
}

// ----------------------------------------------------------------- entropy
int cmd_entropy(const CommonArgs& common, const std::string& trace_path,
                const std::vector<std::string>& sources, const std::vector<int>& epsilons,
                const std::string& filter_name, const std::string& subnet) {
    const auto t0 = std::chrono::steady_clock::now();
    if (sources.empty() || epsilons.empty())
        throw shp::ConfigError("entropy: need at least one source and one epsilon");
    const shp::PoiFilter filter = shp::poi_filter_from_string(filter_name);
    const shp::Trace trace = shp::load_trace(trace_path);

    std::string csv = "source,epsilon_places,samples,entropy_bits\n";
    for (const auto& sname : sources) {
        const shp::InputSource source = shp::input_source_from_string(sname);
        for (int eps : epsilons) {
            const auto values =
                shp::analysis::input_value_series(trace, source, eps, filter, subnet);
            const double h = values.empty() ? 0.0 : shp::analysis::shannon_entropy(values);
            csv += sname + "," + std::to_string(eps) + "," + std::to_string(values.size()) + "," +
                   std::to_string(h) + "\n";
        }
    }

    ensure_out_dir(common.out_dir);
    const std::string out_path = common.out_dir + "/entropy.csv";
    write_text(out_path, csv);

    shp::RunManifest manifest;
    manifest.command = "entropy";
    manifest.add_input(trace_path);
    manifest.outputs.push_back(out_path);
    manifest.wall_clock_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count());
    const std::string manifest_path = common.out_dir + "/manifest.json";
    manifest.outputs.push_back(manifest_path);
    manifest.write(manifest_path);

    std::cout << csv;
    return 0;
}

// ------------------------------------------------------------------ detect
std::vector<shp::Trace> load_corpus(const std::string& dir, shp::RunManifest& manifest) {
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".csv" || ext == ".pcap") files.push_back(entry.path().string());
    }
    if (ec) throw shp::IoError("cannot read corpus directory: " + dir);
    std::sort(files.begin(), files.end());
    std::vector<shp::Trace> corpus;
    for (const auto& f : files) {
        corpus.push_back(shp::load_trace(f));
        manifest.add_input(f);
    }
    if (corpus.size() < 2) throw shp::ConfigError("corpus needs at least 2 traces: " + dir);
    return corpus;
}

struct KsSetSummary {
    double mean_d = 0, sigma_d = 0, mean_p = 0;
    std::size_t pairs = 0;
};

KsSetSummary summarize_ks(const std::vector<shp::analysis::KsResult>& results) {
    KsSetSummary s;
    s.pairs = results.size();
    if (results.empty()) return s;
    for (const auto& r : results) {
        s.mean_d += r.d;
        s.mean_p += r.p;
    }
    s.mean_d /= static_cast<double>(results.size());
    s.mean_p /= static_cast<double>(results.size());
    double var = 0;
    for (const auto& r : results) var += (r.d - s.mean_d) * (r.d - s.mean_d);
    s.sigma_d = results.size() > 1 ? std::sqrt(var / static_cast<double>(results.size() - 1)) : 0.0;
    return s;
}

int cmd_detect(const CommonArgs& common, const std::string& clean_dir,
               const std::string& suspect_dir, const std::vector<std::string>& methods,
               std::size_t kappa_window, int markov_order, std::size_t symbol_window,
               const std::string& covert_src) {
    const auto t0 = std::chrono::steady_clock::now();
    if (methods.empty()) throw shp::ConfigError("detect: methods list is empty");

    shp::RunManifest manifest;
    manifest.command = "detect";
    const auto clean = load_corpus(clean_dir, manifest);
    const auto suspect = load_corpus(suspect_dir, manifest);
    const bool self_compare = fs::weakly_canonical(clean_dir) == fs::weakly_canonical(suspect_dir);
    if (self_compare)
        std::cerr << "warning: clean and suspect corpora are the same directory; "
                     "SHP-non comparisons are empty\n";

    std::vector<std::vector<double>> clean_ipds, suspect_ipds;
    for (const auto& t : clean) clean_ipds.push_back(shp::analysis::ipds_of(t, shp::EtherType::Arp));
    for (const auto& t : suspect)
        suspect_ipds.push_back(shp::analysis::ipds_of(t, shp::EtherType::Arp));

    ordered_json scorecard;
    scorecard["compressor"] = shp::analysis::kCompressorId;
    ensure_out_dir(common.out_dir);

    for (const auto& method : methods) {
        if (method == "ks") {
            std::vector<shp::analysis::KsResult> nn, ss, sn;
            for (std::size_t i = 0; i < clean_ipds.size(); ++i)
                for (std::size_t j = i + 1; j < clean_ipds.size(); ++j)
                    nn.push_back(shp::analysis::ks_two_sample(clean_ipds[i], clean_ipds[j]));
            for (std::size_t i = 0; i < suspect_ipds.size(); ++i)
                for (std::size_t j = i + 1; j < suspect_ipds.size(); ++j)
                    ss.push_back(shp::analysis::ks_two_sample(suspect_ipds[i], suspect_ipds[j]));
            if (!self_compare)
                for (const auto& a : suspect_ipds)
                    for (const auto& b : clean_ipds)
                        sn.push_back(shp::analysis::ks_two_sample(a, b));
            auto to_json = [](const KsSetSummary& s) {
                ordered_json j;
                j["pairs"] = s.pairs;
                j["mean_d"] = s.mean_d;
                j["sigma_d"] = s.sigma_d;
                j["mean_p"] = s.mean_p;
                return j;
            };
            ordered_json ks;
            ks["non_non"] = to_json(summarize_ks(nn));
            ks["shp_shp"] = to_json(summarize_ks(ss));
            ks["shp_non"] = to_json(summarize_ks(sn));
            scorecard["ks"] = ks;

            // CDF plot data: pooled ARP IPDs per corpus, decimated.
            std::string cdf = "corpus,value,cum_prob\n";
            auto emit_cdf = [&cdf](const char* name, std::vector<std::vector<double>> sets) {
                std::vector<double> pool;
                for (auto& s : sets) pool.insert(pool.end(), s.begin(), s.end());
                std::sort(pool.begin(), pool.end());
                const std::size_t step = std::max<std::size_t>(1, pool.size() / 1000);
                for (std::size_t i = 0; i < pool.size(); i += step)
                    cdf += std::string(name) + "," + std::to_string(pool[i]) + "," +
                           std::to_string(static_cast<double>(i + 1) /
                                          static_cast<double>(pool.size())) +
                           "\n";
            };
            emit_cdf("clean", clean_ipds);
            emit_cdf("suspect", suspect_ipds);
            write_text(common.out_dir + "/ipd_cdf.csv", cdf);
            manifest.outputs.push_back(common.out_dir + "/ipd_cdf.csv");
        } else if (method == "kappa") {
            auto kappas_of = [&](const std::vector<std::vector<double>>& sets) {
                std::vector<double> all;
                for (const auto& s : sets) {
                    auto k = shp::analysis::compressibility_windows(s, kappa_window);
                    all.insert(all.end(), k.begin(), k.end());
                }
                return all;
            };
            const auto kc = kappas_of(clean_ipds);
            const auto ks2 = kappas_of(suspect_ipds);
            ordered_json kj;
            kj["window"] = kappa_window;
            kj["clean_windows"] = kc.size();
            kj["suspect_windows"] = ks2.size();
            kj["clean_median"] = median_of(kc);
            kj["suspect_median"] = median_of(ks2);
            scorecard["kappa"] = kj;

            std::string summary = "corpus,windows,q1,median,q3\n";
            summary += "clean," + std::to_string(kc.size()) + "," +
                       std::to_string(quartile_of(kc, 0.25)) + "," + std::to_string(median_of(kc)) +
                       "," + std::to_string(quartile_of(kc, 0.75)) + "\n";
            summary += "suspect," + std::to_string(ks2.size()) + "," +
                       std::to_string(quartile_of(ks2, 0.25)) + "," + std::to_string(median_of(ks2)) +
                       "," + std::to_string(quartile_of(ks2, 0.75)) + "\n";
            write_text(common.out_dir + "/kappa_summary.csv", summary);
            manifest.outputs.push_back(common.out_dir + "/kappa_summary.csv");
        } else if (method == "frequency") {
            auto freq = [&](const std::vector<shp::Trace>& corpus) {
                std::map<std::string, std::uint64_t> hist;
                for (const auto& t : corpus)
                    for (const auto& [src, count] : shp::analysis::request_frequency(t))
                        hist[src] += count;
                return hist;
            };
            ordered_json fj;
            fj["clean"] = freq(clean);
            auto sus = freq(suspect);
            fj["suspect"] = sus;
            if (!covert_src.empty()) {
                fj["covert_src"] = covert_src;
                fj["covert_requests"] = sus.count(covert_src) ? sus[covert_src] : 0;
            }
            scorecard["request_frequency"] = fj;
        } else if (method == "markov") {
            // Thresholds and the model are fit on the clean corpus only.
            std::vector<double> train_pool;
            for (const auto& s : clean_ipds) train_pool.insert(train_pool.end(), s.begin(), s.end());
            if (train_pool.size() < 3) throw shp::ConfigError("markov: clean corpus too small");
            const auto train_stream = shp::analysis::gas_discretize(train_pool);
            shp::analysis::MarkovModel model(markov_order);
            model.train(train_stream.symbols);

            auto scores_of = [&](const std::vector<std::vector<double>>& sets) {
                std::vector<double> scores;
                for (const auto& s : sets) {
                    if (s.size() < 3) continue;
                    const auto sym = shp::analysis::gas_discretize(s, train_stream.thresholds);
                    auto w = model.score_windows(sym.symbols, symbol_window);
                    scores.insert(scores.end(), w.begin(), w.end());
                }
                return scores;
            };
            const auto neg = scores_of(clean_ipds);
            const auto pos = scores_of(suspect_ipds);
            ordered_json mj;
            mj["order"] = markov_order;
            mj["symbol_window"] = symbol_window;
            mj["clean_windows"] = neg.size();
            mj["suspect_windows"] = pos.size();
            if (!neg.empty() && !pos.empty()) {
                const auto roc = shp::analysis::roc_auc(pos, neg);
                mj["auc"] = roc.auc;
                std::string points = "fpr,tpr\n";
                for (const auto& [fpr, tpr] : roc.points)
                    points += std::to_string(fpr) + "," + std::to_string(tpr) + "\n";
                write_text(common.out_dir + "/roc_points.csv", points);
                manifest.outputs.push_back(common.out_dir + "/roc_points.csv");
            } else {
                mj["auc"] = nullptr;
            }
            scorecard["markov"] = mj;
        } else {
            throw shp::ConfigError("unknown detect method: " + method);
        }
    }

    const std::string score_path = common.out_dir + "/scorecard.json";
    write_text(score_path, scorecard.dump(2) + "\n");
    manifest.outputs.push_back(score_path);
    manifest.wall_clock_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count());
    const std::string manifest_path = common.out_dir + "/manifest.json";
    manifest.outputs.push_back(manifest_path);
    manifest.write(manifest_path);

    std::cout << scorecard.dump(2) << '\n';
    return 0;
}

// ------------------------------------------------------------------ search
int cmd_search(const CommonArgs& common, std::size_t budget, std::size_t population, double elite,
               double mutation, double rate, double duration, std::uint64_t message_bits,
               std::size_t top_k, bool resume) {
    const auto t0 = std::chrono::steady_clock::now();
    shp::search::ParameterSpace space;
    space.base = load_config(common.config_path);

    shp::SyntheticConfig syn;
    syn.rate_pps = rate;
    syn.duration_s = duration;
    syn.seed = common.seed;
    syn.subnet = space.base.subnet;
    const shp::Trace trace = shp::generate_synthetic_trace(syn);
    std::mt19937_64 msg_rng(common.seed ^ 0x6d657373ull);
    const shp::Bits message = shp::random_bits(message_bits, msg_rng);

    ensure_out_dir(common.out_dir);
    const std::string log_path = common.out_dir + "/search_log.jsonl";

    // The evaluation log doubles as the resume state: replaying it seeds the
    // dedupe registry so prior work is never re-run.
    std::vector<shp::search::SearchRecord> preloaded;
    int generation_offset = 0;
    if (resume && fs::exists(log_path)) {
        std::ifstream in(log_path, std::ios::binary);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line);
            shp::search::SearchRecord rec;
            rec.config = shp::ChannelConfig::from_json(j.at("config").dump());
            rec.fitness = j.at("fitness").get<double>();
            rec.generation = j.at("generation").get<int>();
            generation_offset = std::max(generation_offset, rec.generation + 1);
            preloaded.push_back(std::move(rec));
        }
    }

    std::ofstream log(log_path, resume ? std::ios::binary | std::ios::app : std::ios::binary);
    if (!log) throw shp::IoError("cannot write search log: " + log_path);

    std::mutex digest_mutex;
    std::map<std::string, std::string> digests;
    auto fitness = [&](const shp::ChannelConfig& cfg) {
        const auto result =
            shp::run_session(cfg, trace, shp::ImpairmentConfig{}, shp::ImpairmentConfig{}, message);
        const std::string digest = shp::sha256_hex(result.report.to_json());
        {
            std::lock_guard<std::mutex> lock(digest_mutex);
            digests[shp::search::config_key(cfg)] = digest;
        }
        return result.report.fitness;
    };

    shp::search::SearchOptions options;
    options.population = population;
    options.elite_fraction = elite;
    options.mutation_rate = mutation;
    options.workers = common.workers;
    const auto records = shp::search::run_search(
        space, budget, fitness, common.seed, options,
        [&](const shp::search::SearchRecord& rec) {
            ordered_json j;
            j["generation"] = rec.generation + generation_offset;
            j["fitness"] = rec.fitness;
            j["report_digest"] = digests[shp::search::config_key(rec.config)];
            j["config"] = nlohmann::json::parse(rec.config.to_json());
            log << j.dump() << '\n';
        },
        preloaded);
    log.close();

    ordered_json top = ordered_json::array();
    for (std::size_t i = 0; i < records.size() && i < top_k; ++i) {
        ordered_json j;
        j["rank"] = i + 1;
        j["fitness"] = records[i].fitness;
        j["caf"] = shp::metrics::caf(records[i].config.bitlength, records[i].config.rehash_bits,
                                     records[i].config.oood_bits);
        j["config"] = nlohmann::json::parse(records[i].config.to_json());
        top.push_back(j);
    }
    const std::string top_path = common.out_dir + "/top.json";
    write_text(top_path, top.dump(2) + "\n");

    shp::RunManifest manifest;
    manifest.command = "search";
    manifest.config_json = space.base.to_json();
    manifest.seeds["seed"] = common.seed;
    manifest.outputs = {log_path, top_path};
    manifest.wall_clock_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count());
    const std::string manifest_path = common.out_dir + "/manifest.json";
    manifest.outputs.push_back(manifest_path);
    manifest.write(manifest_path);

    if (common.format == "csv") {
        std::cout << "rank,fitness,config_key\n";
        for (std::size_t i = 0; i < records.size() && i < top_k; ++i)
            std::cout << i + 1 << ',' << records[i].fitness << ','
                      << shp::search::config_key(records[i].config) << '\n';
    } else {
        std::cout << top.dump(2) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SHP: history covert channel simulator and analysis toolkit"};
    app.require_subcommand(1);

    CommonArgs common;

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a trace-driven covert transmission");
    std::string trace_path, message_file;
    double syn_rate = 120.0, syn_duration = 60.0;
    std::int64_t syn_quantum = 1;
    std::uint64_t message_bits = 64;
    shp::ImpairmentConfig sender_imp, receiver_imp;
    double s_delay_ms = 0, s_jitter_ms = 0, r_delay_ms = 0, r_jitter_ms = 0;
    std::int64_t processing_delay_us = 0;
    bool export_trace = false, events_csv = false;
    sim->add_option("--config", common.config_path, "channel config JSON (or $SHP_CONFIG)");
    sim->add_option("--trace", trace_path, "input trace (pcap or csv)");
    sim->add_option("--synthetic-rate", syn_rate, "synthetic trace rate (pps)");
    sim->add_option("--synthetic-duration", syn_duration, "synthetic trace duration (s)");
    sim->add_option("--synthetic-quantum-us", syn_quantum, "synthetic timestamp grid (us)");
    sim->add_option("--message-file", message_file, "message bytes to transmit");
    sim->add_option("--message-bits", message_bits, "random message length (bits)");
    sim->add_option("--sender-delay-ms", s_delay_ms, "sender-side constant delay");
    sim->add_option("--sender-jitter-ms", s_jitter_ms, "sender-side jitter half-width");
    sim->add_option("--sender-loss", sender_imp.loss, "sender-side loss probability");
    sim->add_option("--receiver-delay-ms", r_delay_ms, "receiver-side constant delay");
    sim->add_option("--receiver-jitter-ms", r_jitter_ms, "receiver-side jitter half-width");
    sim->add_option("--receiver-loss", receiver_imp.loss, "receiver-side loss probability");
    sim->add_option("--processing-delay-us", processing_delay_us, "signal emission delay");
    sim->add_flag("--export-trace", export_trace, "write wire_trace.csv (overt + signals)");
    sim->add_flag("--events-csv", events_csv, "write per-event log");
    sim->add_option("--seed", common.seed, "run seed");
    sim->add_option("--out", common.out_dir, "output directory");
    sim->add_option("--format", common.format, "stdout summary format")
        ->check(CLI::IsMember({"json", "csv"}));

    // entropy
    auto* ent = app.add_subcommand("entropy", "input-source entropy of a trace");
    std::string ent_trace, ent_filter = "all", ent_subnet = "192.168.1.0/24";
    std::vector<std::string> ent_sources{"ipd", "icd", "timestamp", "icpn"};
    std::vector<int> ent_epsilons{0, 1, 3, 4, 6};
    ent->add_option("--trace", ent_trace, "input trace")->required();
    ent->add_option("--sources", ent_sources, "input sources")->delimiter(',');
    ent->add_option("--epsilons", ent_epsilons, "epsilon decimal places")->delimiter(',');
    ent->add_option("--filter", ent_filter, "POI filter")
        ->check(CLI::IsMember({"all", "broadcast_domain"}));
    ent->add_option("--subnet", ent_subnet, "broadcast-domain subnet");
    ent->add_option("--out", common.out_dir, "output directory");

    // detect
    auto* det = app.add_subcommand("detect", "warden-side detection suite");
    std::string clean_dir, suspect_dir, covert_src;
    std::vector<std::string> methods{"ks", "kappa", "frequency", "markov"};
    std::size_t kappa_window = 1000, symbol_window = 200;
    int markov_order = 1;
    det->add_option("--clean", clean_dir, "clean corpus directory")->required();
    det->add_option("--suspect", suspect_dir, "suspect corpus directory")->required();
    det->add_option("--methods", methods, "methods to run")->delimiter(',');
    det->add_option("--kappa-window", kappa_window, "IPDs per compressibility window");
    det->add_option("--markov-order", markov_order, "Markov context length");
    det->add_option("--symbol-window", symbol_window, "symbols per anomaly-score window");
    det->add_option("--covert-src", covert_src, "ground-truth covert sender address");
    det->add_option("--out", common.out_dir, "output directory");

    // search
    auto* sea = app.add_subcommand("search", "SGA parameter search over the simulator");
    std::size_t budget = 128, population = 32, top_k = 10;
    double elite = 0.25, mutation = 0.1, search_rate = 120.0, search_duration = 20.0;
    std::uint64_t search_message_bits = 256;
    sea->add_option("--config", common.config_path, "base config JSON (key/subnet/silence)");
    sea->add_option("--budget", budget, "max unique evaluations");
    sea->add_option("--population", population, "population size");
    sea->add_option("--elite", elite, "elite fraction");
    sea->add_option("--mutation", mutation, "per-gene mutation rate");
    sea->add_option("--rate", search_rate, "synthetic trace rate (pps)");
    sea->add_option("--duration", search_duration, "synthetic trace duration (s)");
    sea->add_option("--message-bits", search_message_bits, "message length (bits)");
    bool resume = false;
    sea->add_flag("--resume", resume, "continue from an existing search_log.jsonl");
    sea->add_option("--top", top_k, "entries in the top table");
    sea->add_option("--workers", common.workers, "parallel fitness evaluations");
    sea->add_option("--seed", common.seed, "run seed");
    sea->add_option("--out", common.out_dir, "output directory");
    sea->add_option("--format", common.format, "stdout summary format")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (sim->parsed()) {
            sender_imp.delay_us = shp::us_from_seconds(s_delay_ms / 1000.0);
            sender_imp.jitter_us = shp::us_from_seconds(s_jitter_ms / 1000.0);
            sender_imp.seed = common.seed * 2 + 1;
            receiver_imp.delay_us = shp::us_from_seconds(r_delay_ms / 1000.0);
            receiver_imp.jitter_us = shp::us_from_seconds(r_jitter_ms / 1000.0);
            receiver_imp.seed = common.seed * 2 + 2;
            return cmd_simulate(common, trace_path, syn_rate, syn_duration, syn_quantum,
                                message_file, message_bits, sender_imp, receiver_imp,
                                processing_delay_us, export_trace, events_csv);
        }
        if (ent->parsed())
            return cmd_entropy(common, ent_trace, ent_sources, ent_epsilons, ent_filter,
                               ent_subnet);
        if (det->parsed())
            return cmd_detect(common, clean_dir, suspect_dir, methods, kappa_window, markov_order,
                              symbol_window, covert_src);
        if (sea->parsed())
            return cmd_search(common, budget, population, elite, mutation, search_rate,
                              search_duration, search_message_bits, top_k, resume);
    } catch (const shp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const shp::InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const shp::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
