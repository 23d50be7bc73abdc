#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "hybsim/trace.hpp"

using namespace hybsim;

namespace {

ParsedTrace parse(const std::string& text, uint32_t addr_bits = 46) {
    std::istringstream in(text);
    return parse_trace(in, addr_bits);
}

size_t fail_line(const std::string& text) {
    try {
        parse(text);
    } catch (const TraceParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("a well-formed trace parses into domains, region, and records") {
    const auto t = parse(
        "# demo\n"
        "domain 12 3\n"
        "domain 7 1\n"
        "shared 0x5000 0x6000\n"
        "\n"
        "12 R 0x20040\n"
        "7 W 1f00\n"
        "99 F 0x40\n"
        "12 IR 0x5040\n"
        "12 IW 0x5fc0\n");
    CHECK(t.domains.idid_of(12) == 3);
    CHECK(t.domains.idid_of(7) == 1);
    CHECK(t.domains.idid_of(99) == 0);  // unlisted pid
    REQUIRE(t.domains.shared_region);
    CHECK(t.domains.shared_region->first == 0x5000);
    CHECK(t.domains.shared_region->second == 0x6000);
    REQUIRE(t.records.size() == 5);
    CHECK(t.records[0] == TraceRecord{12, TraceOp::kRead, 0x20040});
    CHECK(t.records[1] == TraceRecord{7, TraceOp::kWrite, 0x1f00});
    CHECK(t.records[2] == TraceRecord{99, TraceOp::kFlush, 0x40});
    CHECK(t.records[3] == TraceRecord{12, TraceOp::kIoRead, 0x5040});
    CHECK(t.records[4] == TraceRecord{12, TraceOp::kIoWrite, 0x5fc0});
}

TEST_CASE("parse errors carry the offending line number") {
    CHECK(fail_line("domain 1 2\ndomain 1 3\n") == 2);       // pid remapped
    CHECK(fail_line("domain 1 16\n") == 1);                  // idid out of range
    CHECK(fail_line("shared 0x0 0x100\nshared 0x200 0x300\n") == 2);
    CHECK(fail_line("shared 0x100 0x100\n") == 1);           // empty region
    CHECK(fail_line("1 X 0x40\n") == 1);                     // unknown op
    CHECK(fail_line("# ok\n1 R zz\n") == 2);                 // bad address
    CHECK(fail_line("1 R\n") == 1);                          // missing field
    CHECK(fail_line("1 R 0x40 extra\n") == 1);
    CHECK(fail_line("1 R 0x400000000000\n") == 1);           // 2^46: too wide
    CHECK_NOTHROW(parse("1 R 0x3fffffffffff\n"));
}

TEST_CASE("serialization round-trips") {
    const auto t = parse(
        "domain 5 2\n"
        "domain 3 1\n"
        "shared 0x100 0x200\n"
        "3 R 0x40\n"
        "5 IW 0x140\n"
        "8 W 0xfc0\n");
    std::ostringstream out;
    write_trace(out, t);
    const auto back = parse(out.str());
    CHECK(back.records == t.records);
    CHECK(back.domains.pid_to_idid == t.domains.pid_to_idid);
    CHECK(back.domains.shared_region == t.domains.shared_region);
    // canonical form: sorted domain lines first
    CHECK(out.str().find("domain 3 1") < out.str().find("domain 5 2"));
}

TEST_CASE("io rules force in-region io moves to the shared domain") {
    const auto t = parse("domain 4 2\nshared 0x1000 0x2000\n");
    const auto r = apply_io_rules({4, TraceOp::kIoRead, 0x1040}, t.domains);
    REQUIRE(std::holds_alternative<AccessRequest>(r));
    const auto& req = std::get<AccessRequest>(r);
    CHECK(req.idid == 0);
    CHECK(req.kind == AccessKind::kRead);
    CHECK(req.addr == 0x1040);
    CHECK(req.pid == 4);

    const auto w = apply_io_rules({4, TraceOp::kIoWrite, 0x1fc0}, t.domains);
    REQUIRE(std::holds_alternative<AccessRequest>(w));
    CHECK(std::get<AccessRequest>(w).kind == AccessKind::kWrite);
    CHECK(std::get<AccessRequest>(w).idid == 0);
}

TEST_CASE("io rules flag out-of-region io moves") {
    const auto t = parse("shared 0x1000 0x2000\n");
    for (uint64_t addr : {uint64_t{0xfc0}, uint64_t{0x2000}}) {
        const auto r = apply_io_rules({1, TraceOp::kIoRead, addr}, t.domains);
        REQUIRE(std::holds_alternative<Violation>(r));
        CHECK(std::get<Violation>(r).kind == ViolationKind::kIoMoveOutsideRegion);
    }
    // no region configured: every io move is outside it
    const auto none = parse("domain 1 1\n");
    const auto r = apply_io_rules({1, TraceOp::kIoWrite, 0x40}, none.domains);
    REQUIRE(std::holds_alternative<Violation>(r));
}

TEST_CASE("io rules flag isolated regular accesses into the region") {
    const auto t = parse("domain 4 2\nshared 0x1000 0x2000\n");
    for (TraceOp op : {TraceOp::kRead, TraceOp::kWrite, TraceOp::kFlush}) {
        const auto r = apply_io_rules({4, op, 0x1800}, t.domains);
        REQUIRE(std::holds_alternative<Violation>(r));
        CHECK(std::get<Violation>(r).kind ==
              ViolationKind::kRegularAccessToSharedRegion);
    }
    // the same accesses by a non-isolated pid are fine
    const auto ok = apply_io_rules({9, TraceOp::kWrite, 0x1800}, t.domains);
    REQUIRE(std::holds_alternative<AccessRequest>(ok));
    CHECK(std::get<AccessRequest>(ok).idid == 0);
    // and isolated accesses outside the region keep their domain
    const auto iso = apply_io_rules({4, TraceOp::kRead, 0x4000}, t.domains);
    REQUIRE(std::holds_alternative<AccessRequest>(iso));
    CHECK(std::get<AccessRequest>(iso).idid == 2);
    const auto fl = apply_io_rules({4, TraceOp::kFlush, 0x4000}, t.domains);
    REQUIRE(std::holds_alternative<AccessRequest>(fl));
    CHECK(std::get<AccessRequest>(fl).kind == AccessKind::kFlush);
}

TEST_CASE("io rules never emit an isolated request for a shared address") {
    const auto t = parse("domain 2 1\ndomain 3 15\nshared 0x0 0x100000\n");
    SeededRng rng(6);
    for (int i = 0; i < 20'000; ++i) {
        const TraceRecord rec{uint32_t(rng.next_uniform(4)),
                              TraceOp(rng.next_uniform(5)),
                              uint64_t(rng.next_uniform(1u << 21)) << 6};
        const auto r = apply_io_rules(rec, t.domains);
        if (const auto* req = std::get_if<AccessRequest>(&r))
            if (t.domains.in_shared_region(req->addr))
                CHECK(req->idid == 0);
    }
}

TEST_CASE("the branch victim touches the common line then the bit line") {
    VictimSpec spec;
    spec.key_bits = "101";
    spec.addr_bit0 = 0x2000;
    spec.addr_bit1 = 0x3000;
    spec.addr_common = 0x1000;
    const auto recs = gen_montgomery_victim(spec, 9);
    REQUIRE(recs.size() == 6);
    for (const auto& r : recs) {
        CHECK(r.pid == 9);
        CHECK(r.op == TraceOp::kRead);
    }
    CHECK(recs[0].addr == 0x1000);
    CHECK(recs[1].addr == 0x3000);
    CHECK(recs[2].addr == 0x1000);
    CHECK(recs[3].addr == 0x2000);
    CHECK(recs[4].addr == 0x1000);
    CHECK(recs[5].addr == 0x3000);
}

TEST_CASE("the branch victim validates its inputs") {
    VictimSpec spec;
    spec.key_bits = "10";
    spec.addr_bit0 = 0x2000;
    spec.addr_bit1 = 0x2000;  // collides with addr_bit0
    spec.addr_common = 0x1000;
    CHECK_THROWS_AS(gen_montgomery_victim(spec, 1), std::invalid_argument);
    spec.addr_bit1 = 0x3000;
    spec.key_bits = "1x0";
    CHECK_THROWS_AS(gen_montgomery_victim(spec, 1), std::invalid_argument);
    spec.key_bits = "";
    CHECK(gen_montgomery_victim(spec, 1).empty());
}

TEST_CASE("uniform traffic stays in range and honors the read fraction") {
    const auto recs = gen_uniform(3, 10'000, 0x100000, 0x200000, 0.7, 42);
    REQUIRE(recs.size() == 10'000);
    uint64_t reads = 0;
    for (const auto& r : recs) {
        CHECK(r.addr >= 0x100000);
        CHECK(r.addr < 0x200000);
        reads += r.op == TraceOp::kRead;
    }
    CHECK(double(reads) / 10'000 == doctest::Approx(0.7).epsilon(0.03));

    CHECK(gen_uniform(3, 0, 0, 0x1000, 0.5, 1).empty());
    CHECK(gen_uniform(1, 100, 0, 0x1000, 0.0, 1)[0].op == TraceOp::kWrite);
    CHECK(gen_uniform(1, 100, 0, 0x1000, 1.0, 1)[0].op == TraceOp::kRead);
    // deterministic in the seed
    CHECK(gen_uniform(3, 50, 0, 0x1000, 0.5, 9) == gen_uniform(3, 50, 0, 0x1000, 0.5, 9));
    CHECK(gen_uniform(3, 50, 0, 0x1000, 0.5, 9) != gen_uniform(3, 50, 0, 0x1000, 0.5, 10));
}

TEST_CASE("working-set traffic touches exactly the configured lines") {
    const auto recs = gen_working_set(2, 20'000, 0x40000, 50, 64, 0.5, 5);
    std::set<uint64_t> lines;
    for (const auto& r : recs) {
        CHECK(r.addr % 64 == 0);
        lines.insert(r.addr);
    }
    CHECK(lines.size() == 50);  // 20k draws over 50 lines: all touched
    CHECK(*lines.begin() == 0x40000);
    CHECK(*lines.rbegin() == 0x40000 + 49 * 64);
}

TEST_CASE("the pointer chase is a single cycle over its lines") {
    const uint64_t lines = 64;
    const auto recs = gen_pointer_chase(1, 3 * lines, 0x8000, lines, 64, 11);
    REQUIRE(recs.size() == 3 * lines);
    for (const auto& r : recs)
        CHECK(r.op == TraceOp::kRead);
    // one full lap visits every line exactly once
    std::set<uint64_t> lap;
    for (uint64_t i = 1; i <= lines; ++i)
        lap.insert(recs[i].addr);
    std::set<uint64_t> addrs;
    for (const auto& r : recs)
        addrs.insert(r.addr);
    CHECK(lap.size() == lines);
    CHECK(addrs.size() == lines);
    // the walk repeats with period exactly num_lines
    for (uint64_t i = 0; i + lines < recs.size(); ++i)
        CHECK(recs[i].addr == recs[i + lines].addr);
    // successive laps use the same permutation, so it is a single cycle:
    // no shorter period divides it
    for (uint64_t p = 1; p < lines; ++p)
        if (lines % p == 0) {
            bool all = true;
            for (uint64_t i = 0; i + p < lines && all; ++i)
                all = recs[i].addr == recs[i + p].addr;
            CHECK(!all);
        }
}

TEST_CASE("interleave merges round-robin and drains uneven tails") {
    std::vector<TraceRecord> a = {{1, TraceOp::kRead, 0x0},
                                  {1, TraceOp::kRead, 0x40},
                                  {1, TraceOp::kRead, 0x80}};
    std::vector<TraceRecord> b = {{2, TraceOp::kWrite, 0x1000}};
    const auto merged = interleave({a, b}, 1);
    REQUIRE(merged.size() == 4);
    CHECK(merged[0].pid == 1);
    CHECK(merged[1].pid == 2);
    CHECK(merged[2].pid == 1);
    CHECK(merged[3].pid == 1);

    const auto chunky = interleave({a, b}, 2);
    REQUIRE(chunky.size() == 4);
    CHECK(chunky[0].pid == 1);
    CHECK(chunky[1].pid == 1);
    CHECK(chunky[2].pid == 2);
    CHECK(chunky[3].pid == 1);

    CHECK(interleave({}, 3).empty());
    CHECK_THROWS_AS(interleave({a}, 0), std::invalid_argument);
}
