#include "hybsim/attacks.hpp"

#include "hybsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hybsim {

namespace {

// Runs body(0..trials-1), optionally across worker threads. Each body
// invocation owns its output slot, so the schedule cannot change
// results. The first exception, if any, is rethrown on the caller.
void run_trials(uint32_t trials, uint32_t workers,
                const std::function<void(uint32_t)>& body) {
    workers = std::min(std::max(workers, 1u), trials);
    if (workers == 1) {
        for (uint32_t t = 0; t < trials; ++t)
            body(t);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    pool.reserve(workers);
    for (uint32_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (uint32_t t = w; t < trials; t += workers) {
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

struct Parties {
    uint8_t attacker;
    uint8_t victim;
};

Parties check_scenario(const AttackScenario& s, bool needs_victim_spec) {
    if (s.trials == 0)
        throw std::invalid_argument("attack: trials must be positive");
    if (s.hierarchy.levels.empty())
        throw std::invalid_argument("attack: hierarchy has no levels");
    if (s.attacker_idid > kMaxIdid || s.victim_idid > kMaxIdid)
        throw std::invalid_argument("attack: idid out of range");
    if (s.mode == CacheMode::kBaseline) {
        if (s.attacker_idid != 0 || s.victim_idid != 0)
            throw std::invalid_argument(
                "attack: baseline mode runs entirely in the non-isolated domain");
    } else {
        if (s.victim_idid == 0)
            throw std::invalid_argument("attack: isolated victim required");
        if (s.attacker_idid == s.victim_idid)
            throw std::invalid_argument("attack: attacker and victim share a domain");
    }
    if (needs_victim_spec) {
        for (char c : s.victim.key_bits)
            if (c != '0' && c != '1')
                throw std::invalid_argument("attack: key must be '0'/'1' bits");
        const CacheConfig l1 = validate_config(s.hierarchy.levels[0]);
        const auto d0 = decompose(s.victim.addr_bit0, l1);
        const auto d1 = decompose(s.victim.addr_bit1, l1);
        const auto dc = decompose(s.victim.addr_common, l1);
        if (d0.extended_tag == d1.extended_tag || d0.extended_tag == dc.extended_tag ||
            d1.extended_tag == dc.extended_tag)
            throw std::invalid_argument("attack: victim lines must be distinct");
        // both attacks stage fills in the monitored sets; keeping the
        // two branch lines in different sets stops those fills from
        // evicting each other and faking a signal
        if (d0.set_index == d1.set_index)
            throw std::invalid_argument(
                "attack: branch lines must map to distinct innermost sets");
    }
    return {s.attacker_idid, s.victim_idid};
}

void finalize(DetectionReport& rep) {
    const size_t nbits = rep.key_bits.size();
    const size_t trials = rep.trials.size();
    rep.recovered_bits.assign(nbits, '0');
    for (size_t i = 0; i < nbits; ++i) {
        size_t ones = 0;
        for (const auto& tr : rep.trials)
            ones += tr.recovered_bits[i] == '1';
        if (2 * ones > trials)
            rep.recovered_bits[i] = '1';
    }
    if (nbits == 0 || trials == 0) {
        rep.accuracy = 0.0;  // empty key: empty report
        return;
    }
    uint64_t matched = 0;
    for (const auto& tr : rep.trials)
        for (size_t i = 0; i < nbits; ++i)
            matched += tr.recovered_bits[i] == rep.key_bits[i];
    rep.accuracy = double(matched) / (double(nbits) * double(trials));
}

constexpr uint32_t kAttackerPid = 1;
constexpr uint32_t kVictimPid = 2;

}  // namespace

VictimSpec default_victim_spec(const CacheConfig& l1, std::string key_bits) {
    validate_config(l1);
    if (l1.num_sets < 16)
        throw std::invalid_argument("victim spec: needs at least 16 sets");
    auto line = [&](uint64_t set, uint64_t tag) {
        return ((tag << l1.index_bits()) | set) << l1.offset_bits();
    };
    VictimSpec v;
    v.key_bits = std::move(key_bits);
    v.addr_bit0 = line(5, 3);
    v.addr_bit1 = line(9, 3);
    v.addr_common = line(1, 3);
    return v;
}

std::string random_key(uint32_t bits, uint64_t seed) {
    SeededRng rng(SeededRng::mix(seed, 0x6B6579));
    std::string key(bits, '0');
    for (auto& c : key)
        c = (rng.next_u64() >> 63) ? '1' : '0';
    return key;
}

DetectionReport prime_probe(const AttackScenario& s) {
    const Parties who = check_scenario(s, true);
    const CacheConfig l1 = validate_config(s.hierarchy.levels[0]);
    const auto d0 = decompose(s.victim.addr_bit0, l1);
    const auto d1 = decompose(s.victim.addr_bit1, l1);
    const size_t nbits = s.victim.key_bits.size();
    const uint32_t ways = l1.num_ways;

    // eviction-set lines congruent to a monitored set, tags well away
    // from the victim's tag 3
    auto prime_addr = [&](uint64_t set, uint32_t j) {
        return ((uint64_t(0x100 + j) << l1.index_bits()) | set) << l1.offset_bits();
    };

    DetectionReport rep;
    rep.mode = s.mode;
    rep.key_bits = s.victim.key_bits;
    rep.trials.resize(s.trials);

    run_trials(s.trials, s.parallel_trials, [&](uint32_t t) {
        HierarchyConfig cfg = s.hierarchy;
        cfg.seed = SeededRng::mix(s.seed, 0x70720000ull + t);
        CacheHierarchy h(cfg);
        SeededRng coin(SeededRng::mix(s.seed, 0xC0120000ull + t));

        TrialResult& tr = rep.trials[t];
        tr.recovered_bits.assign(nbits, '0');
        tr.probe_latency.resize(nbits);

        for (size_t i = 0; i < nbits; ++i) {
            for (uint32_t j = 0; j < ways; ++j) {
                h.access({kAttackerPid, who.attacker, AccessKind::kRead,
                          prime_addr(d0.set_index, j)});
                h.access({kAttackerPid, who.attacker, AccessKind::kRead,
                          prime_addr(d1.set_index, j)});
            }
            if (s.wait_model == WaitModel::kVictimRuns) {
                h.access({kVictimPid, who.victim, AccessKind::kRead, s.victim.addr_common});
                const bool bit = s.victim.key_bits[i] == '1';
                h.access({kVictimPid, who.victim, AccessKind::kRead,
                          bit ? s.victim.addr_bit1 : s.victim.addr_bit0});
            }
            // probe in reverse prime order: with true LRU a single
            // victim eviction then costs exactly one slow probe
            // instead of cascading through the whole set
            uint64_t lat0 = 0, lat1 = 0;
            for (uint32_t j = ways; j-- > 0;) {
                const auto o = h.access({kAttackerPid, who.attacker, AccessKind::kRead,
                                         prime_addr(d0.set_index, j)});
                lat0 += o.total_latency_cycles;
                tr.slow_probes += o.serviced_level != 0;
            }
            for (uint32_t j = ways; j-- > 0;) {
                const auto o = h.access({kAttackerPid, who.attacker, AccessKind::kRead,
                                         prime_addr(d1.set_index, j)});
                lat1 += o.total_latency_cycles;
                tr.slow_probes += o.serviced_level != 0;
            }
            tr.probe_latency[i] = {lat0, lat1};
            char bit = '0';
            if (lat0 == lat1)
                bit = (coin.next_u64() >> 63) ? '1' : '0';
            else if (lat1 > lat0)
                bit = '1';
            tr.recovered_bits[i] = bit;
        }
    });

    finalize(rep);
    return rep;
}

DetectionReport flush_reload(const AttackScenario& s) {
    const Parties who = check_scenario(s, true);
    const size_t nbits = s.victim.key_bits.size();

    DetectionReport rep;
    rep.mode = s.mode;
    rep.key_bits = s.victim.key_bits;
    rep.trials.resize(s.trials);

    run_trials(s.trials, s.parallel_trials, [&](uint32_t t) {
        HierarchyConfig cfg = s.hierarchy;
        cfg.seed = SeededRng::mix(s.seed, 0xF1420000ull + t);
        CacheHierarchy h(cfg);

        TrialResult& tr = rep.trials[t];
        tr.recovered_bits.assign(nbits, '0');
        tr.probe_latency.resize(nbits);

        for (size_t i = 0; i < nbits; ++i) {
            h.flush(s.victim.addr_bit0, who.attacker);
            h.flush(s.victim.addr_bit1, who.attacker);
            if (s.wait_model == WaitModel::kVictimRuns) {
                h.access({kVictimPid, who.victim, AccessKind::kRead, s.victim.addr_common});
                const bool bit = s.victim.key_bits[i] == '1';
                h.access({kVictimPid, who.victim, AccessKind::kRead,
                          bit ? s.victim.addr_bit1 : s.victim.addr_bit0});
            }
            const auto r0 = h.access({kAttackerPid, who.attacker, AccessKind::kRead,
                                      s.victim.addr_bit0});
            const auto r1 = h.access({kAttackerPid, who.attacker, AccessKind::kRead,
                                      s.victim.addr_bit1});
            tr.probe_latency[i] = {r0.total_latency_cycles, r1.total_latency_cycles};
            const bool hit0 = r0.serviced_level == 0;
            const bool hit1 = r1.serviced_level == 0;
            tr.slow_probes += !hit0;
            tr.slow_probes += !hit1;
            // one-sided hit identifies the bit; anything else is no
            // signal and falls back to 0
            if (hit1 && !hit0)
                tr.recovered_bits[i] = '1';
        }
    });

    finalize(rep);
    return rep;
}

double EvictionSample::sample_mean() const {
    if (samples.empty())
        return 0.0;
    double sum = 0.0;
    for (uint64_t v : samples)
        sum += double(v);
    return sum / double(samples.size());
}

double EvictionSample::sample_variance() const {
    if (samples.size() < 2)
        return 0.0;
    const double mean = sample_mean();
    double ss = 0.0;
    for (uint64_t v : samples) {
        const double d = double(v) - mean;
        ss += d * d;
    }
    return ss / double(samples.size() - 1);
}

EvictionSample evict_subcache_experiment(uint32_t n_isolated, uint32_t trials,
                                         uint64_t seed, uint32_t parallel_trials) {
    if (n_isolated == 0)
        throw std::invalid_argument("evict experiment: empty subcache");
    if (trials == 0)
        throw std::invalid_argument("evict experiment: trials must be positive");
    EvictionSample es;
    es.n_isolated = n_isolated;
    es.samples.resize(trials);
    run_trials(trials, parallel_trials, [&](uint32_t t) {
        // same victim-selection primitive the cache uses for fills
        SeededRng rng(SeededRng::mix(seed, 0xEE100000ull + t));
        std::vector<char> covered(n_isolated, 0);
        uint32_t remaining = n_isolated;
        uint64_t draws = 0;
        while (remaining > 0) {
            const uint32_t e = random_victim(rng, n_isolated);
            ++draws;
            if (!covered[e]) {
                covered[e] = 1;
                --remaining;
            }
        }
        es.samples[t] = draws;
    });
    return es;
}

OccupancyReport occupancy_probe(const AttackScenario& s,
                                std::span<const uint64_t> working_set_sizes,
                                uint32_t trials_per_size,
                                uint64_t attacker_base, uint64_t victim_base) {
    if (s.mode != CacheMode::kHybCache)
        throw std::invalid_argument("occupancy: needs isolated domains");
    if (s.attacker_idid == 0)
        throw std::invalid_argument("occupancy: attacker must be isolated");
    check_scenario(s, false);
    if (working_set_sizes.empty() || trials_per_size == 0)
        throw std::invalid_argument("occupancy: empty experiment");
    if (std::adjacent_find(working_set_sizes.begin(), working_set_sizes.end(),
                           std::not_equal_to<>()) == working_set_sizes.end())
        throw std::invalid_argument("occupancy: needs at least two distinct sizes");

    const CacheConfig l1 = validate_config(s.hierarchy.levels[0]);
    const uint32_t n = l1.n_isolated();

    OccupancyReport rep;
    rep.n_isolated = n;
    rep.points.resize(working_set_sizes.size());
    for (size_t i = 0; i < working_set_sizes.size(); ++i) {
        rep.points[i].working_set_size = working_set_sizes[i];
        rep.points[i].survivals.resize(trials_per_size);
    }

    const uint32_t total = uint32_t(working_set_sizes.size()) * trials_per_size;
    run_trials(total, s.parallel_trials, [&](uint32_t t) {
        const size_t si = t / trials_per_size;
        const uint32_t trial = t % trials_per_size;
        HierarchyConfig single;
        single.levels = {l1};
        single.memory_latency_cycles = s.hierarchy.memory_latency_cycles;
        single.seed = SeededRng::mix(s.seed, 0x0CC00000ull + t);
        CacheHierarchy h(single);

        // fill until the attacker owns every subcache entry; a fill
        // grows ownership exactly when it displaces a non-attacker line
        const uint64_t cap = uint64_t(n) * 64;
        uint32_t owned = 0;
        uint64_t i = 0;
        while (owned < n) {
            if (i >= cap)
                throw std::runtime_error("occupancy: subcache fill did not converge");
            const auto out = h.access({kAttackerPid, s.attacker_idid, AccessKind::kRead,
                                       attacker_base + i * l1.line_size_bytes});
            const auto& first = out.level_outcomes[0].outcome;
            if (first.verdict == Verdict::kMiss &&
                (!first.victim || first.victim->idid != s.attacker_idid))
                ++owned;
            ++i;
        }

        for (uint64_t j = 0; j < working_set_sizes[si]; ++j)
            h.access({kVictimPid, s.victim_idid, AccessKind::kRead,
                      victim_base + j * l1.line_size_bytes});

        uint64_t live = 0;
        const HybridCache& cache = h.level(0);
        for (uint32_t e = 0; e < n; ++e) {
            const SlotIndex slot = subcache_slot(e, l1);
            const CacheLine& line = cache.peek(slot.set, slot.way);
            live += line.valid && line.idid == s.attacker_idid;
        }
        rep.points[si].survivals[trial] = live;
    });

    std::vector<double> xs, ys;
    xs.reserve(total);
    ys.reserve(total);
    for (auto& p : rep.points) {
        double sum = 0.0;
        for (uint64_t v : p.survivals) {
            sum += double(v);
            xs.push_back(double(p.working_set_size));
            ys.push_back(double(v));
        }
        p.mean_survivals = sum / double(p.survivals.size());
    }
    rep.rank_correlation = spearman(xs, ys);
    return rep;
}

}  // namespace hybsim
