#pragma once

#include <cstdint>
#include <string>

namespace hybsim {

/// Geometry and policy parameters for a single cache level.
///
/// A level is a set-associative array of num_sets x num_ways lines.
/// The iso_ways highest-numbered ways of every set double as a flat,
/// fully associative region ("subcache") used by isolated domains;
/// the remaining ways are usable only by the non-isolated domain.
struct CacheConfig {
    std::string level_name = "L1";
    uint32_t line_size_bytes = 64;
    uint32_t num_sets = 64;
    uint32_t num_ways = 8;
    uint32_t iso_ways = 2;
    uint32_t hit_latency_cycles = 4;
    uint32_t addr_bits = 46;

    uint32_t offset_bits() const;
    uint32_t index_bits() const;

    // Entries available to isolated domains, counted across all sets.
    uint32_t n_isolated() const { return iso_ways * num_sets; }

    uint64_t capacity_bytes() const {
        return uint64_t(line_size_bytes) * num_sets * num_ways;
    }
};

/// One physical address split against a given geometry.
///
/// extended_tag is the full line address (addr >> offset_bits): isolated
/// lines can live in any set, so matching them needs more than set_tag.
struct DecomposedAddress {
    uint64_t offset = 0;
    uint64_t set_index = 0;
    uint64_t set_tag = 0;
    uint64_t extended_tag = 0;
};

/// Position of a line inside the set-associative array.
struct SlotIndex {
    uint32_t set = 0;
    uint32_t way = 0;

    bool operator==(const SlotIndex&) const = default;
};

/// Returns cfg unchanged iff every geometry invariant holds; otherwise
/// throws std::invalid_argument naming the violated invariant.
CacheConfig validate_config(const CacheConfig& cfg);

/// Splits addr for the given (validated) geometry.
/// Throws std::out_of_range if addr does not fit in cfg.addr_bits.
DecomposedAddress decompose(uint64_t addr, const CacheConfig& cfg);

/// Inverse of decompose. Reassembles the address from its parts.
uint64_t compose(const DecomposedAddress& parts, const CacheConfig& cfg);

/// Maps a flat subcache entry index [0, n_isolated) onto the (set, way)
/// that backs it. Entries pack iso_ways to a set, occupying the
/// highest-numbered ways. Throws std::out_of_range on bad index.
SlotIndex subcache_slot(uint32_t entry_index, const CacheConfig& cfg);

/// Inverse of subcache_slot. The slot must lie inside the subcache.
uint32_t subcache_entry(SlotIndex slot, const CacheConfig& cfg);

/// True iff the way belongs to the subcache region of its set.
inline bool in_subcache(uint32_t way, const CacheConfig& cfg) {
    return way >= cfg.num_ways - cfg.iso_ways;
}

}  // namespace hybsim
