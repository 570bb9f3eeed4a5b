#pragma once

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "shp/config.hpp"

namespace shp {
namespace search {

// Table-driven parameter space. Every emitted point satisfies the
// consistency constraints (subchanneling mode iff bits, ISPN needs an
// integer epsilon) and CAF > 1.
struct ParameterSpace {
    std::vector<int> bitlengths{2, 3, 4, 8};
    std::vector<int> epsilons{0, 1, 3};
    std::vector<PoiFilter> filters{PoiFilter::All, PoiFilter::BroadcastDomain};
    std::vector<InputSource> sources{InputSource::Ipd,  InputSource::Isd,
                                     InputSource::Icd,  InputSource::Ispn,
                                     InputSource::Timestamp, InputSource::Icpn};
    std::vector<SubchannelMode> modes{SubchannelMode::None, SubchannelMode::BaseIpd,
                                      SubchannelMode::IpHash, SubchannelMode::ClockHash};
    std::vector<int> subchannel_bits{0, 2, 4, 8};
    std::vector<EccVariant> eccs{EccVariant::None, EccVariant::Hamming, EccVariant::HammingPlus,
                                 EccVariant::InlineHammingPlus};
    std::vector<int> rehash{0, 2, 4, 7};
    std::vector<int> oood{0}; // held at 0 by default; extra dimension on demand
    ChannelConfig base;       // key, subnet, silence carried into every point

    bool valid(const ChannelConfig& c) const;
};

// Deterministic order: nested iteration in field declaration order.
std::vector<ChannelConfig> enumerate_space(const ParameterSpace& space);

struct Individual {
    ChannelConfig config;
    double fitness = 0;
    bool evaluated = false;
};

struct Population {
    std::vector<Individual> individuals;
    int generation = 0;
    std::set<std::string> evaluated_keys;        // every config ever scored
    std::map<std::string, double> fitness_cache; // score per evaluated key
    std::mt19937_64 rng;

    explicit Population(std::uint64_t seed) : rng(seed) {}
};

using FitnessFn = std::function<double(const ChannelConfig&)>;

// Canonical dedupe key (the gene dimensions only).
std::string config_key(const ChannelConfig& c);

// Seeds a population with pop_size unique random valid configs, evaluated.
Population init_population(const ParameterSpace& space, std::size_t pop_size, FitnessFn fitness,
                           std::uint64_t seed, int workers = 1);

// One SGA generation: keep the elite fraction, fill up with uniform
// per-gene crossover of two elites plus per-gene mutation, re-drawing
// offspring that violate constraints or were already evaluated. New
// individuals are scored with fitness (never re-scoring a known config).
// max_new_evaluations caps the offspring count (budget enforcement).
void sga_step(Population& pop, const ParameterSpace& space, FitnessFn fitness,
              double elite_fraction, double mutation_rate, int workers = 1,
              std::size_t max_new_evaluations = static_cast<std::size_t>(-1));

struct SearchRecord {
    ChannelConfig config;
    double fitness = 0;
    int generation = 0;
};

struct SearchOptions {
    std::size_t population = 32;
    double elite_fraction = 0.25;
    double mutation_rate = 0.1;
    int workers = 1;
};

// Evaluates at most `budget` unique configs; results sorted by fitness
// descending, ties by CAF descending then lexicographic config key.
// on_evaluated (optional) fires once per new evaluation in a deterministic
// order. `preloaded` seeds the dedupe registry and fitness cache from a
// previous run's log: those configs count against the budget, are never
// re-evaluated or re-announced, and appear in the final ranking.
std::vector<SearchRecord> run_search(const ParameterSpace& space, std::size_t budget,
                                     FitnessFn fitness, std::uint64_t seed,
                                     const SearchOptions& options = {},
                                     const std::function<void(const SearchRecord&)>& on_evaluated = {},
                                     const std::vector<SearchRecord>& preloaded = {});

} // namespace search
} // namespace shp
