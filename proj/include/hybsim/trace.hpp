#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "hybsim/cache.hpp"

namespace hybsim {

enum class TraceOp : uint8_t { kRead, kWrite, kFlush, kIoRead, kIoWrite };

struct TraceRecord {
    uint32_t pid = 0;
    TraceOp op = TraceOp::kRead;
    uint64_t addr = 0;

    bool operator==(const TraceRecord&) const = default;
};

/// Process-to-domain assignment plus the optional shared I/O region.
/// Unlisted pids belong to the non-isolated domain (idid 0), mirroring
/// a default-zero domain id that needs no setup for legacy software.
struct DomainMap {
    std::unordered_map<uint32_t, uint8_t> pid_to_idid;
    std::optional<std::pair<uint64_t, uint64_t>> shared_region;  // [start, end)

    uint8_t idid_of(uint32_t pid) const {
        auto it = pid_to_idid.find(pid);
        return it == pid_to_idid.end() ? uint8_t{0} : it->second;
    }

    bool in_shared_region(uint64_t addr) const {
        return shared_region && addr >= shared_region->first &&
               addr < shared_region->second;
    }
};

struct ParsedTrace {
    DomainMap domains;
    std::vector<TraceRecord> records;
};

class TraceParseError : public std::runtime_error {
public:
    TraceParseError(size_t line, const std::string& what);
    size_t line() const { return line_; }

private:
    size_t line_;
};

/// Text trace format, line oriented:
///   # comment
///   domain <pid> <idid>        pid is decimal, idid decimal 0..15
///   shared <start> <end>       hex, half-open byte range, at most one
///   <pid> <op> <addr>          op in {R, W, F, IR, IW}, addr hex
/// Remapping a pid, a second shared line, an unknown op, a malformed
/// field, or an address wider than addr_bits all raise TraceParseError
/// with the offending line number.
ParsedTrace parse_trace(std::istream& in, uint32_t addr_bits = 46);

ParsedTrace parse_trace_file(const std::string& path, uint32_t addr_bits = 46);

/// Canonical serialization: domain lines sorted by pid, then the
/// shared line if any, then the records. parse(write(t)) == t.
void write_trace(std::ostream& out, const ParsedTrace& trace);

enum class ViolationKind : uint8_t {
    kIoMoveOutsideRegion,
    kRegularAccessToSharedRegion,
};

struct Violation {
    ViolationKind kind = ViolationKind::kIoMoveOutsideRegion;
    TraceRecord record;
};

/// Applies the shared-region access discipline to one record and
/// resolves its domain:
///   IR/IW inside the region  -> read/write forced to idid 0
///   IR/IW outside the region -> violation (io moves only touch it)
///   R/W/F by an isolated pid inside the region -> violation; the
///     stage never emits an isolated-domain request for a shared
///     address, so flushes are held to the same rule
/// Violations block the access; the caller counts them.
std::variant<AccessRequest, Violation> apply_io_rules(const TraceRecord& rec,
                                                      const DomainMap& map);

/// Victim model of a key-dependent branch: per key bit it touches a
/// common loop line and then one of two branch-body lines selected by
/// the bit. The three addresses must map to three distinct lines.
struct VictimSpec {
    std::string key_bits;       // '0'/'1' characters, MSB first
    uint64_t addr_bit0 = 0;     // touched when the bit is 0
    uint64_t addr_bit1 = 0;     // touched when the bit is 1
    uint64_t addr_common = 0;   // touched every iteration
};

/// Two reads per key bit: common line, then the selected branch line.
std::vector<TraceRecord> gen_montgomery_victim(const VictimSpec& spec, uint32_t pid);

/// num_accesses reads/writes spread uniformly over [addr_lo, addr_hi).
std::vector<TraceRecord> gen_uniform(uint32_t pid, uint64_t num_accesses,
                                     uint64_t addr_lo, uint64_t addr_hi,
                                     double read_fraction, uint64_t seed);

/// Uniform traffic over a fixed set of num_lines consecutive lines.
std::vector<TraceRecord> gen_working_set(uint32_t pid, uint64_t num_accesses,
                                         uint64_t base_addr, uint64_t num_lines,
                                         uint32_t line_size, double read_fraction,
                                         uint64_t seed);

/// Reads that walk a random single-cycle permutation of num_lines
/// lines, so every access depends on the previous one.
std::vector<TraceRecord> gen_pointer_chase(uint32_t pid, uint64_t num_accesses,
                                           uint64_t base_addr, uint64_t num_lines,
                                           uint32_t line_size, uint64_t seed);

/// Round-robin merge, quantum records from each stream per turn.
std::vector<TraceRecord> interleave(const std::vector<std::vector<TraceRecord>>& streams,
                                    size_t quantum);

}  // namespace hybsim
