#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hybsim/geometry.hpp"
#include "hybsim/replacement.hpp"

using namespace hybsim;

namespace {

CacheConfig l1() { return {"L1", 64, 128, 8, 2, 4, 46}; }
CacheConfig l3() { return {"L3", 64, 4096, 16, 2, 42, 46}; }

}  // namespace

TEST_CASE("derived widths for the default levels") {
    CHECK(l1().offset_bits() == 6);
    CHECK(l1().index_bits() == 7);
    CHECK(l1().n_isolated() == 256);
    CHECK(l1().capacity_bytes() == 64 * 1024);
    CHECK(l3().index_bits() == 12);
    CHECK(l3().n_isolated() == 8192);
    CHECK(l3().capacity_bytes() == 4 * 1024 * 1024);
}

TEST_CASE("validate_config accepts the defaults and names violations") {
    CHECK_NOTHROW(validate_config(l1()));

    auto bad = l1();
    bad.iso_ways = 0;
    CHECK_THROWS_WITH_AS(validate_config(bad), "L1: iso_ways below minimum",
                         std::invalid_argument);

    bad = l1();
    bad.num_sets = 100;
    CHECK_THROWS_WITH_AS(validate_config(bad), "L1: sets not a power of two",
                         std::invalid_argument);

    bad = l1();
    bad.line_size_bytes = 48;
    CHECK_THROWS_WITH_AS(validate_config(bad), "L1: line size not a power of two",
                         std::invalid_argument);

    bad = l1();
    bad.iso_ways = 9;
    CHECK_THROWS_WITH_AS(validate_config(bad), "L1: iso_ways exceeds ways",
                         std::invalid_argument);

    bad = l1();
    bad.num_ways = 0;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = l1();
    bad.addr_bits = 13;  // 6 offset + 7 index leaves no tag
    CHECK_THROWS_WITH_AS(validate_config(bad), "L1: addr_bits too small for tag",
                         std::invalid_argument);
}

TEST_CASE("decompose splits a known address") {
    const auto d = decompose(0x20040, l1());
    CHECK(d.offset == 0);
    CHECK(d.set_index == 1);
    CHECK(d.set_tag == 0x10);
    CHECK(d.extended_tag == 0x801);
}

TEST_CASE("decompose maps the last line of the index range") {
    const auto d = decompose(0x1FC0, l1());
    CHECK(d.offset == 0);
    CHECK(d.set_index == 127);
    CHECK(d.set_tag == 0);
    CHECK(d.extended_tag == 0x7F);
}

TEST_CASE("decompose rejects an address wider than addr_bits") {
    CHECK_THROWS_AS(decompose(1ull << 46, l1()), std::out_of_range);
    CHECK_NOTHROW(decompose((1ull << 46) - 1, l1()));
}

TEST_CASE("compose inverts decompose over random addresses") {
    for (const auto& cfg : {l1(), l3()}) {
        SeededRng rng(0xDECA'F000 + cfg.num_sets);
        for (int i = 0; i < 1'000'000; ++i) {
            const uint64_t addr = rng.next_uniform(1ull << cfg.addr_bits);
            const auto d = decompose(addr, cfg);
            CHECK(compose(d, cfg) == addr);
            // parts stay within their field widths
            CHECK(d.offset < cfg.line_size_bytes);
            CHECK(d.set_index < cfg.num_sets);
            CHECK(d.extended_tag == ((d.set_tag << cfg.index_bits()) | d.set_index));
        }
    }
}

TEST_CASE("subcache slots pack the high ways in entry order") {
    const auto cfg = l1();
    CHECK(subcache_slot(0, cfg) == SlotIndex{0, 6});
    CHECK(subcache_slot(1, cfg) == SlotIndex{0, 7});
    CHECK(subcache_slot(2, cfg) == SlotIndex{1, 6});
    CHECK(subcache_slot(255, cfg) == SlotIndex{127, 7});
    CHECK_THROWS_AS(subcache_slot(256, cfg), std::out_of_range);
}

TEST_CASE("subcache_slot and subcache_entry are inverse bijections") {
    for (const auto& cfg : {l1(), l3()}) {
        std::vector<char> seen(size_t(cfg.num_sets) * cfg.num_ways, 0);
        for (uint32_t e = 0; e < cfg.n_isolated(); ++e) {
            const SlotIndex s = subcache_slot(e, cfg);
            CHECK(in_subcache(s.way, cfg));
            CHECK(subcache_entry(s, cfg) == e);
            char& cell = seen[size_t(s.set) * cfg.num_ways + s.way];
            CHECK(cell == 0);  // injective
            cell = 1;
        }
        // image is exactly the iso_ways high ways of every set
        for (uint32_t set = 0; set < cfg.num_sets; ++set)
            for (uint32_t way = 0; way < cfg.num_ways; ++way)
                CHECK(bool(seen[size_t(set) * cfg.num_ways + way]) ==
                      in_subcache(way, cfg));
    }
}

TEST_CASE("subcache_entry rejects slots outside the subcache") {
    CHECK_THROWS_AS(subcache_entry({0, 5}, l1()), std::out_of_range);
    CHECK_THROWS_AS(subcache_entry({128, 7}, l1()), std::out_of_range);
}
