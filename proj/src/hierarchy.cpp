#include "hybsim/hierarchy.hpp"

#include <stdexcept>

namespace hybsim {

HierarchyConfig default_hierarchy() {
    HierarchyConfig h;
    h.levels = {
        {"L1", 64, 128, 8, 2, 4, 46},
        {"L2", 64, 512, 8, 2, 12, 46},
        {"L3", 64, 4096, 16, 2, 42, 46},
    };
    h.memory_latency_cycles = 100;
    h.seed = kDefaultSeed;
    return h;
}

CacheHierarchy::CacheHierarchy(const HierarchyConfig& cfg) : cfg_(cfg) {
    if (cfg.levels.empty())
        throw std::invalid_argument("hierarchy: needs at least one level");
    levels_.reserve(cfg.levels.size());
    for (size_t i = 0; i < cfg.levels.size(); ++i)
        levels_.emplace_back(cfg.levels[i], SeededRng::mix(cfg.seed, i));
    counters_.resize(cfg.levels.size());
    idid_seen_[0] = true;
}

HierarchyOutcome CacheHierarchy::access(const AccessRequest& req) {
    if (req.idid > kMaxIdid)
        throw std::invalid_argument("hierarchy: idid out of range");
    idid_seen_[req.idid] = true;
    HierarchyOutcome out;
    out.serviced_level = kServicedByMemory;
    for (uint32_t i = 0; i < levels_.size(); ++i) {
        AccessOutcome o = levels_[i].access(req);
        out.total_latency_cycles += cfg_.levels[i].hit_latency_cycles;
        DomainCounters& c = counters_[i][req.idid];
        c.accesses++;
        if (o.verdict == Verdict::kHit)
            c.hits++;
        else
            c.misses++;
        if (o.victim)
            c.evictions++;
        if (o.writeback)
            c.writebacks++;
        const bool hit = o.verdict == Verdict::kHit;
        out.level_outcomes.push_back({i, std::move(o)});
        if (hit) {
            out.serviced_level = i;
            break;
        }
    }
    if (out.serviced_level == kServicedByMemory) {
        out.total_latency_cycles += cfg_.memory_latency_cycles;
        memory_fetches_[req.idid]++;
    }
    return out;
}

std::vector<FlushOutcome> CacheHierarchy::flush(uint64_t addr, uint8_t idid) {
    if (idid > kMaxIdid)
        throw std::invalid_argument("hierarchy: idid out of range");
    idid_seen_[idid] = true;
    std::vector<FlushOutcome> out;
    out.reserve(levels_.size());
    for (uint32_t i = 0; i < levels_.size(); ++i) {
        FlushOutcome f = levels_[i].flush(addr, idid);
        if (f.writeback)
            counters_[i][idid].writebacks++;
        out.push_back(f);
    }
    return out;
}

bool CacheHierarchy::probe(uint64_t addr, uint8_t idid) const {
    for (const auto& lvl : levels_)
        if (lvl.probe(addr, idid))
            return true;
    return false;
}

std::vector<StatsRow> CacheHierarchy::stats() const {
    // amat is computed outermost-first so each row can refer to the
    // next level's value; memory latency seeds the recursion.
    const size_t n = levels_.size();
    std::vector<std::array<double, kMaxIdid + 1>> amat(n);
    for (size_t rev = 0; rev < n; ++rev) {
        const size_t i = n - 1 - rev;
        for (uint32_t d = 0; d <= kMaxIdid; ++d) {
            const DomainCounters& c = counters_[i][d];
            const double mr = c.accesses ? double(c.misses) / double(c.accesses) : 0.0;
            const double next = (i + 1 < n) ? amat[i + 1][d]
                                            : double(cfg_.memory_latency_cycles);
            amat[i][d] = double(cfg_.levels[i].hit_latency_cycles) + mr * next;
        }
    }
    std::vector<StatsRow> rows;
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t d = 0; d <= kMaxIdid; ++d) {
            if (!idid_seen_[d])
                continue;
            const DomainCounters& c = counters_[i][d];
            StatsRow r;
            r.level = cfg_.levels[i].level_name;
            r.level_index = i;
            r.idid = uint8_t(d);
            r.accesses = c.accesses;
            r.hits = c.hits;
            r.misses = c.misses;
            r.miss_rate = c.accesses ? double(c.misses) / double(c.accesses) : 0.0;
            r.evictions = c.evictions;
            r.writebacks = c.writebacks;
            r.amat_cycles = c.accesses ? amat[i][d] : 0.0;
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

void CacheHierarchy::reset_stats() {
    for (auto& per_level : counters_)
        per_level.fill(DomainCounters{});
    memory_fetches_.fill(0);
    idid_seen_.fill(false);
    idid_seen_[0] = true;
}

}  // namespace hybsim
