#include "hybsim/cache.hpp"

#include <stdexcept>

namespace hybsim {

HybridCache::HybridCache(const CacheConfig& cfg, uint64_t rng_seed)
    : cfg_(validate_config(cfg)),
      lines_(size_t(cfg.num_sets) * cfg.num_ways),
      lru_(cfg.num_sets, cfg.num_ways),
      rng_(rng_seed) {
    iso_index_.reserve(cfg_.n_isolated());
}

const CacheLine& HybridCache::peek(uint32_t set, uint32_t way) const {
    if (set >= cfg_.num_sets || way >= cfg_.num_ways)
        throw std::out_of_range(cfg_.level_name + ": peek outside array");
    return at(set, way);
}

void HybridCache::unindex_if_isolated(const CacheLine& line) {
    if (line.valid && line.idid != 0)
        iso_index_.erase(iso_key(line.line_addr, line.idid));
}

AccessOutcome HybridCache::fill(SlotIndex slot, uint64_t line_addr,
                                uint8_t idid, bool write) {
    CacheLine& line = at(slot.set, slot.way);
    AccessOutcome out;
    out.verdict = Verdict::kMiss;
    out.filled_slot = slot;
    if (line.valid) {
        out.victim = VictimInfo{line.line_addr, line.idid, line.dirty};
        if (line.dirty)
            out.writeback = line.line_addr;
    }
    unindex_if_isolated(line);
    line = CacheLine{true, write, line_addr, idid};
    if (idid != 0)
        iso_index_.emplace(iso_key(line_addr, idid), subcache_entry(slot, cfg_));
    lru_.touch(slot.set, slot.way);
    return out;
}

AccessOutcome HybridCache::access(const AccessRequest& req) {
    if (req.kind != AccessKind::kRead && req.kind != AccessKind::kWrite)
        throw std::invalid_argument(cfg_.level_name + ": access kind must be read or write");
    if (req.idid > kMaxIdid)
        throw std::invalid_argument(cfg_.level_name + ": idid out of range");
    const DecomposedAddress da = decompose(req.addr, cfg_);
    const bool write = req.kind == AccessKind::kWrite;

    if (req.idid == 0) {
        const auto set = uint32_t(da.set_index);
        for (uint32_t way = 0; way < cfg_.num_ways; ++way) {
            CacheLine& line = at(set, way);
            if (line.valid && line.idid == 0 && line.line_addr == da.extended_tag) {
                line.dirty |= write;
                lru_.touch(set, way);
                AccessOutcome out;
                out.verdict = Verdict::kHit;
                out.hit_slot = SlotIndex{set, way};
                return out;
            }
        }
        return fill({set, lru_.victim(set)}, da.extended_tag, 0, write);
    }

    auto it = iso_index_.find(iso_key(da.extended_tag, req.idid));
    if (it != iso_index_.end()) {
        const SlotIndex slot = subcache_slot(it->second, cfg_);
        CacheLine& line = at(slot.set, slot.way);
        line.dirty |= write;
        lru_.touch(slot.set, slot.way);
        AccessOutcome out;
        out.verdict = Verdict::kHit;
        out.hit_slot = slot;
        return out;
    }
    const uint32_t entry = random_victim(rng_, cfg_.n_isolated());
    return fill(subcache_slot(entry, cfg_), da.extended_tag, req.idid, write);
}

FlushOutcome HybridCache::flush(uint64_t addr, uint8_t idid) {
    if (idid > kMaxIdid)
        throw std::invalid_argument(cfg_.level_name + ": idid out of range");
    const DecomposedAddress da = decompose(addr, cfg_);
    FlushOutcome out;

    auto invalidate = [&](CacheLine& line) {
        out.invalidated = true;
        if (line.dirty)
            out.writeback = line.line_addr;
        line = CacheLine{};
    };

    if (idid == 0) {
        const auto set = uint32_t(da.set_index);
        for (uint32_t way = 0; way < cfg_.num_ways; ++way) {
            CacheLine& line = at(set, way);
            if (line.valid && line.idid == 0 && line.line_addr == da.extended_tag) {
                invalidate(line);
                break;
            }
        }
        return out;
    }

    auto it = iso_index_.find(iso_key(da.extended_tag, idid));
    if (it != iso_index_.end()) {
        const SlotIndex slot = subcache_slot(it->second, cfg_);
        invalidate(at(slot.set, slot.way));
        iso_index_.erase(it);
    }
    return out;
}

bool HybridCache::probe(uint64_t addr, uint8_t idid) const {
    if (idid > kMaxIdid)
        throw std::invalid_argument(cfg_.level_name + ": idid out of range");
    const DecomposedAddress da = decompose(addr, cfg_);
    if (idid == 0) {
        const auto set = uint32_t(da.set_index);
        for (uint32_t way = 0; way < cfg_.num_ways; ++way) {
            const CacheLine& line = at(set, way);
            if (line.valid && line.idid == 0 && line.line_addr == da.extended_tag)
                return true;
        }
        return false;
    }
    for (uint32_t entry = 0; entry < cfg_.n_isolated(); ++entry) {
        const SlotIndex slot = subcache_slot(entry, cfg_);
        const CacheLine& line = at(slot.set, slot.way);
        if (line.valid && line.idid == idid && line.line_addr == da.extended_tag)
            return true;
    }
    return false;
}

}  // namespace hybsim
