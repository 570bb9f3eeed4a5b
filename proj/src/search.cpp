#include "shp/search.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "shp/errors.hpp"
#include "shp/metrics.hpp"

namespace shp {
namespace search {

bool ParameterSpace::valid(const ChannelConfig& c) const {
    if ((c.subchanneling_mode == SubchannelMode::None) != (c.subchanneling_bits == 0))
        return false;
    if (c.inputsource == InputSource::Ispn && c.epsilon_places < 1) return false;
    if (metrics::caf(c.bitlength, c.rehash_bits, c.oood_bits) <= 1.0) return false;
    return true;
}

std::string config_key(const ChannelConfig& c) {
    std::ostringstream os;
    os << c.bitlength << '|' << c.epsilon_places << '|' << to_string(c.poi_filter) << '|'
       << to_string(c.inputsource) << '|' << to_string(c.subchanneling_mode) << '|'
       << c.subchanneling_bits << '|' << to_string(c.ecc) << '|' << c.rehash_bits << '|'
       << c.oood_bits;
    return os.str();
}

std::vector<ChannelConfig> enumerate_space(const ParameterSpace& space) {
    std::vector<ChannelConfig> out;
    for (int n : space.bitlengths)
        for (int eps : space.epsilons)
            for (PoiFilter filter : space.filters)
                for (InputSource source : space.sources)
                    for (SubchannelMode mode : space.modes)
                        for (int bits : space.subchannel_bits)
                            for (EccVariant ecc : space.eccs)
                                for (int m : space.rehash)
                                    for (int s : space.oood) {
                                        ChannelConfig c = space.base;
                                        c.bitlength = n;
                                        c.epsilon_places = eps;
                                        c.poi_filter = filter;
                                        c.inputsource = source;
                                        c.subchanneling_mode = mode;
                                        c.subchanneling_bits = bits;
                                        c.ecc = ecc;
                                        c.rehash_bits = m;
                                        c.oood_bits = s;
                                        if (!space.valid(c)) continue;
                                        c.validate();
                                        out.push_back(c);
                                    }
    return out;
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& set, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> d(0, set.size() - 1);
    return set[d(rng)];
}

ChannelConfig random_config(const ParameterSpace& space, std::mt19937_64& rng) {
    for (int tries = 0; tries < 4096; ++tries) {
        ChannelConfig c = space.base;
        c.bitlength = pick(space.bitlengths, rng);
        c.epsilon_places = pick(space.epsilons, rng);
        c.poi_filter = pick(space.filters, rng);
        c.inputsource = pick(space.sources, rng);
        c.subchanneling_mode = pick(space.modes, rng);
        c.subchanneling_bits = c.subchanneling_mode == SubchannelMode::None
                                   ? 0
                                   : pick(space.subchannel_bits, rng);
        if (c.subchanneling_mode != SubchannelMode::None && c.subchanneling_bits == 0)
            continue;
        c.ecc = pick(space.eccs, rng);
        c.rehash_bits = pick(space.rehash, rng);
        c.oood_bits = pick(space.oood, rng);
        if (space.valid(c)) return c;
    }
    throw Error("random_config: could not draw a valid configuration");
}

// Uniform per-gene crossover of two parents followed by per-gene mutation.
ChannelConfig breed(const ParameterSpace& space, const ChannelConfig& a, const ChannelConfig& b,
                    double mutation_rate, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto coin = [&]() { return (rng() & 1u) != 0; };
    ChannelConfig c = space.base;
    c.bitlength = coin() ? a.bitlength : b.bitlength;
    c.epsilon_places = coin() ? a.epsilon_places : b.epsilon_places;
    c.poi_filter = coin() ? a.poi_filter : b.poi_filter;
    c.inputsource = coin() ? a.inputsource : b.inputsource;
    c.subchanneling_mode = coin() ? a.subchanneling_mode : b.subchanneling_mode;
    c.subchanneling_bits = coin() ? a.subchanneling_bits : b.subchanneling_bits;
    c.ecc = coin() ? a.ecc : b.ecc;
    c.rehash_bits = coin() ? a.rehash_bits : b.rehash_bits;
    c.oood_bits = coin() ? a.oood_bits : b.oood_bits;

    if (unit(rng) < mutation_rate) c.bitlength = pick(space.bitlengths, rng);
    if (unit(rng) < mutation_rate) c.epsilon_places = pick(space.epsilons, rng);
    if (unit(rng) < mutation_rate) c.poi_filter = pick(space.filters, rng);
    if (unit(rng) < mutation_rate) c.inputsource = pick(space.sources, rng);
    if (unit(rng) < mutation_rate) c.subchanneling_mode = pick(space.modes, rng);
    if (unit(rng) < mutation_rate) c.subchanneling_bits = pick(space.subchannel_bits, rng);
    if (unit(rng) < mutation_rate) c.ecc = pick(space.eccs, rng);
    if (unit(rng) < mutation_rate) c.rehash_bits = pick(space.rehash, rng);
    if (unit(rng) < mutation_rate) c.oood_bits = pick(space.oood, rng);
    // Keep the subchanneling pair consistent after independent gene moves.
    if (c.subchanneling_mode == SubchannelMode::None) c.subchanneling_bits = 0;
    else if (c.subchanneling_bits == 0) c.subchanneling_mode = SubchannelMode::None;
    return c;
}

// Evaluates not-yet-scored individuals, serving cached scores without a
// fitness call; parallel sessions share nothing, so a simple index-sliced
// pool keeps results deterministic.
void evaluate_batch(Population& pop, std::vector<Individual>& members, FitnessFn fitness,
                    int workers) {
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i].evaluated) continue;
        const auto cached = pop.fitness_cache.find(config_key(members[i].config));
        if (cached != pop.fitness_cache.end()) {
            members[i].fitness = cached->second;
            members[i].evaluated = true;
            continue;
        }
        todo.push_back(i);
    }
    workers = std::max(1, workers);
    if (workers == 1 || todo.size() <= 1) {
        for (std::size_t i : todo) {
            members[i].fitness = fitness(members[i].config);
            members[i].evaluated = true;
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t k = next.fetch_add(1);
                    if (k >= todo.size()) return;
                    members[todo[k]].fitness = fitness(members[todo[k]].config);
                    members[todo[k]].evaluated = true;
                }
            });
        for (auto& t : pool) t.join();
    }
    for (const auto& ind : members) {
        const std::string key = config_key(ind.config);
        pop.evaluated_keys.insert(key);
        pop.fitness_cache.emplace(key, ind.fitness);
    }
}

} // namespace

Population init_population(const ParameterSpace& space, std::size_t pop_size, FitnessFn fitness,
                           std::uint64_t seed, int workers) {
    if (pop_size == 0) throw InvalidParameter("init_population: empty population");
    Population pop(seed);
    std::set<std::string> in_gen;
    while (pop.individuals.size() < pop_size) {
        ChannelConfig c = random_config(space, pop.rng);
        const std::string key = config_key(c);
        if (!in_gen.insert(key).second) continue;
        pop.individuals.push_back({c, 0.0, false});
    }
    evaluate_batch(pop, pop.individuals, std::move(fitness), workers);
    return pop;
}

void sga_step(Population& pop, const ParameterSpace& space, FitnessFn fitness,
              double elite_fraction, double mutation_rate, int workers,
              std::size_t max_new_evaluations) {
    if (pop.individuals.empty()) throw Error("sga_step: empty population");
    if (elite_fraction <= 0.0 || elite_fraction > 1.0)
        throw InvalidParameter("sga_step: elite_fraction must be in (0,1]");
    if (mutation_rate < 0.0 || mutation_rate > 1.0)
        throw InvalidParameter("sga_step: mutation_rate must be in [0,1]");
    for (const auto& ind : pop.individuals)
        if (!ind.evaluated) throw Error("sga_step: population not evaluated");

    std::vector<Individual> sorted = pop.individuals;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Individual& a, const Individual& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        return config_key(a.config) < config_key(b.config);
    });
    const std::size_t pop_size = sorted.size();
    const std::size_t elites =
        std::max<std::size_t>(1, static_cast<std::size_t>(elite_fraction * pop_size));

    std::vector<Individual> next(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(
                                                                     std::min(elites, pop_size)));
    std::set<std::string> in_gen;
    for (const auto& ind : next) in_gen.insert(config_key(ind.config));

    const std::size_t target = max_new_evaluations >= pop_size - next.size()
                                   ? pop_size
                                   : next.size() + max_new_evaluations;
    std::uniform_int_distribution<std::size_t> pick_elite(0, std::min(elites, pop_size) - 1);
    while (next.size() < target) {
        const ChannelConfig& pa = next[pick_elite(pop.rng)].config;
        const ChannelConfig& pb = next[pick_elite(pop.rng)].config;
        ChannelConfig child;
        bool ok = false;
        for (int tries = 0; tries < 64; ++tries) {
            child = breed(space, pa, pb, mutation_rate, pop.rng);
            const std::string key = config_key(child);
            if (space.valid(child) && !pop.evaluated_keys.count(key) && !in_gen.count(key)) {
                ok = true;
                break;
            }
        }
        if (!ok) { // fall back to a fresh random config not yet evaluated
            for (int tries = 0; tries < 4096 && !ok; ++tries) {
                child = random_config(space, pop.rng);
                const std::string key = config_key(child);
                ok = !pop.evaluated_keys.count(key) && !in_gen.count(key);
            }
        }
        if (!ok) break; // space exhausted
        in_gen.insert(config_key(child));
        next.push_back({child, 0.0, false});
    }

    evaluate_batch(pop, next, std::move(fitness), workers);
    pop.individuals = std::move(next);
    ++pop.generation;
}

std::vector<SearchRecord> run_search(const ParameterSpace& space, std::size_t budget,
                                     FitnessFn fitness, std::uint64_t seed,
                                     const SearchOptions& options,
                                     const std::function<void(const SearchRecord&)>& on_evaluated,
                                     const std::vector<SearchRecord>& preloaded) {
    std::vector<SearchRecord> records;
    std::set<std::string> recorded;
    Population pop(seed);
    for (const auto& rec : preloaded) {
        const std::string key = config_key(rec.config);
        if (!recorded.insert(key).second) continue;
        records.push_back(rec);
        pop.evaluated_keys.insert(key);
        pop.fitness_cache.emplace(key, rec.fitness);
    }
    const std::size_t preload_count = pop.evaluated_keys.size();

    auto sort_records = [](std::vector<SearchRecord>& recs) {
        std::stable_sort(recs.begin(), recs.end(), [](const SearchRecord& a, const SearchRecord& b) {
            if (a.fitness != b.fitness) return a.fitness > b.fitness;
            const double ca =
                metrics::caf(a.config.bitlength, a.config.rehash_bits, a.config.oood_bits);
            const double cb =
                metrics::caf(b.config.bitlength, b.config.rehash_bits, b.config.oood_bits);
            if (ca != cb) return ca > cb;
            return config_key(a.config) < config_key(b.config);
        });
    };

    if (preload_count >= budget) { // nothing left to spend
        sort_records(records);
        return records;
    }
    if (budget - preload_count < options.population)
        throw InvalidParameter("run_search: remaining budget must be >= population size");

    int generation = 0;
    // Records are appended after each generation barrier from the population
    // vector, so callback order stays deterministic under parallel workers.
    auto note_generation = [&]() {
        for (const auto& ind : pop.individuals) {
            if (!recorded.insert(config_key(ind.config)).second) continue;
            SearchRecord rec{ind.config, ind.fitness, generation};
            records.push_back(rec);
            if (on_evaluated) on_evaluated(rec);
        }
    };

    // Generation 0: unique random draws; cached configs cost nothing.
    {
        std::set<std::string> in_gen;
        while (pop.individuals.size() < options.population) {
            ChannelConfig c = random_config(space, pop.rng);
            if (!in_gen.insert(config_key(c)).second) continue;
            pop.individuals.push_back({c, 0.0, false});
        }
        evaluate_batch(pop, pop.individuals, fitness, options.workers);
        note_generation();
    }

    while (pop.evaluated_keys.size() < budget) {
        ++generation;
        const std::size_t before = pop.evaluated_keys.size();
        sga_step(pop, space, fitness, options.elite_fraction, options.mutation_rate,
                 options.workers, budget - before);
        note_generation();
        if (pop.evaluated_keys.size() == before) break; // space exhausted
    }

    sort_records(records);
    return records;
}

} // namespace search
} // namespace shp
