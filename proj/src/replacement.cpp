#include "hybsim/replacement.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hybsim {

LruState::LruState(uint32_t num_sets, uint32_t num_ways)
    : num_ways_(num_ways), order_(num_sets) {
    if (num_sets == 0 || num_ways == 0)
        throw std::invalid_argument("LruState: empty geometry");
    for (auto& o : order_) {
        o.resize(num_ways);
        std::iota(o.begin(), o.end(), 0u);
    }
}

void LruState::check(uint32_t set, uint32_t way) const {
    if (set >= order_.size())
        throw std::out_of_range("LruState: set out of range");
    if (way >= num_ways_)
        throw std::out_of_range("LruState: way out of range");
}

void LruState::touch(uint32_t set, uint32_t way) {
    check(set, way);
    auto& o = order_[set];
    auto it = std::find(o.begin(), o.end(), way);
    std::rotate(o.begin(), it, it + 1);
}

uint32_t LruState::victim(uint32_t set) const {
    check(set, 0);
    return order_[set].back();
}

const std::vector<uint32_t>& LruState::order(uint32_t set) const {
    check(set, 0);
    return order_[set];
}

uint64_t SeededRng::next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t SeededRng::next_uniform(uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("SeededRng: empty range");
    // Lemire's multiply-shift; reject the biased low slice.
    unsigned __int128 m = (unsigned __int128)next_u64() * n;
    auto lo = uint64_t(m);
    if (lo < n) {
        const uint64_t threshold = (0 - n) % n;
        while (lo < threshold) {
            m = (unsigned __int128)next_u64() * n;
            lo = uint64_t(m);
        }
    }
    return uint64_t(m >> 64);
}

uint64_t SeededRng::mix(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 0x632BE59BD9B4E019ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint32_t random_victim(SeededRng& rng, uint32_t n_isolated) {
    return uint32_t(rng.next_uniform(n_isolated));
}

}  // namespace hybsim
