#include "hybsim/geometry.hpp"

#include <bit>
#include <stdexcept>

namespace hybsim {

uint32_t CacheConfig::offset_bits() const {
    return uint32_t(std::countr_zero(line_size_bytes));
}

uint32_t CacheConfig::index_bits() const {
    return uint32_t(std::countr_zero(num_sets));
}

CacheConfig validate_config(const CacheConfig& cfg) {
    auto fail = [&](const char* what) {
        throw std::invalid_argument(cfg.level_name + ": " + what);
    };
    if (cfg.line_size_bytes == 0 || !std::has_single_bit(cfg.line_size_bytes))
        fail("line size not a power of two");
    if (cfg.num_sets == 0 || !std::has_single_bit(cfg.num_sets))
        fail("sets not a power of two");
    if (cfg.num_ways == 0)
        fail("ways below minimum");
    if (cfg.iso_ways == 0)
        fail("iso_ways below minimum");
    if (cfg.iso_ways > cfg.num_ways)
        fail("iso_ways exceeds ways");
    if (cfg.addr_bits > 64)
        fail("addr_bits exceeds 64");
    if (cfg.addr_bits <= cfg.offset_bits() + cfg.index_bits())
        fail("addr_bits too small for tag");
    return cfg;
}

DecomposedAddress decompose(uint64_t addr, const CacheConfig& cfg) {
    if (cfg.addr_bits < 64 && (addr >> cfg.addr_bits) != 0)
        throw std::out_of_range(cfg.level_name + ": address wider than addr_bits");
    const uint32_t ob = cfg.offset_bits();
    const uint32_t ib = cfg.index_bits();
    DecomposedAddress d;
    d.offset = addr & (cfg.line_size_bytes - 1);
    d.extended_tag = addr >> ob;
    d.set_index = d.extended_tag & (cfg.num_sets - 1);
    d.set_tag = d.extended_tag >> ib;
    return d;
}

uint64_t compose(const DecomposedAddress& parts, const CacheConfig& cfg) {
    const uint32_t ob = cfg.offset_bits();
    const uint32_t ib = cfg.index_bits();
    return (((parts.set_tag << ib) | parts.set_index) << ob) | parts.offset;
}

SlotIndex subcache_slot(uint32_t entry_index, const CacheConfig& cfg) {
    if (entry_index >= cfg.n_isolated())
        throw std::out_of_range(cfg.level_name + ": subcache entry out of range");
    SlotIndex s;
    s.set = entry_index / cfg.iso_ways;
    s.way = (cfg.num_ways - cfg.iso_ways) + entry_index % cfg.iso_ways;
    return s;
}

uint32_t subcache_entry(SlotIndex slot, const CacheConfig& cfg) {
    if (slot.set >= cfg.num_sets || !in_subcache(slot.way, cfg))
        throw std::out_of_range(cfg.level_name + ": slot outside subcache");
    return slot.set * cfg.iso_ways + (slot.way - (cfg.num_ways - cfg.iso_ways));
}

}  // namespace hybsim
