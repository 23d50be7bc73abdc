#include "hybsim/trace.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hybsim/replacement.hpp"

namespace hybsim {

TraceParseError::TraceParseError(size_t line, const std::string& what)
    : std::runtime_error("trace line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

uint64_t parse_u64(const std::string& tok, int base, size_t line, const char* what) {
    size_t pos = 0;
    uint64_t v = 0;
    try {
        v = std::stoull(tok, &pos, base);
    } catch (const std::exception&) {
        throw TraceParseError(line, std::string("bad ") + what + " '" + tok + "'");
    }
    if (pos != tok.size())
        throw TraceParseError(line, std::string("bad ") + what + " '" + tok + "'");
    return v;
}

std::optional<TraceOp> op_from(const std::string& tok) {
    if (tok == "R") return TraceOp::kRead;
    if (tok == "W") return TraceOp::kWrite;
    if (tok == "F") return TraceOp::kFlush;
    if (tok == "IR") return TraceOp::kIoRead;
    if (tok == "IW") return TraceOp::kIoWrite;
    return std::nullopt;
}

const char* op_name(TraceOp op) {
    switch (op) {
        case TraceOp::kRead: return "R";
        case TraceOp::kWrite: return "W";
        case TraceOp::kFlush: return "F";
        case TraceOp::kIoRead: return "IR";
        case TraceOp::kIoWrite: return "IW";
    }
    return "?";
}

}  // namespace

ParsedTrace parse_trace(std::istream& in, uint32_t addr_bits) {
    ParsedTrace trace;
    std::string raw;
    size_t lineno = 0;
    auto check_addr = [&](uint64_t addr) {
        if (addr_bits < 64 && (addr >> addr_bits) != 0)
            throw TraceParseError(lineno, "address wider than addr_bits");
        return addr;
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(std::move(t));
        if (tok.empty() || tok[0][0] == '#')
            continue;
        if (tok[0] == "domain") {
            if (tok.size() != 3)
                throw TraceParseError(lineno, "domain needs <pid> <idid>");
            const auto pid = uint32_t(parse_u64(tok[1], 10, lineno, "pid"));
            const uint64_t idid = parse_u64(tok[2], 10, lineno, "idid");
            if (idid > kMaxIdid)
                throw TraceParseError(lineno, "idid out of range");
            if (!trace.domains.pid_to_idid.emplace(pid, uint8_t(idid)).second)
                throw TraceParseError(lineno, "pid already mapped");
            continue;
        }
        if (tok[0] == "shared") {
            if (tok.size() != 3)
                throw TraceParseError(lineno, "shared needs <start> <end>");
            if (trace.domains.shared_region)
                throw TraceParseError(lineno, "second shared region");
            const uint64_t start = check_addr(parse_u64(tok[1], 16, lineno, "address"));
            const uint64_t end = check_addr(parse_u64(tok[2], 16, lineno, "address"));
            if (start >= end)
                throw TraceParseError(lineno, "empty shared region");
            trace.domains.shared_region = {start, end};
            continue;
        }
        if (tok.size() != 3)
            throw TraceParseError(lineno, "record needs <pid> <op> <addr>");
        TraceRecord rec;
        rec.pid = uint32_t(parse_u64(tok[0], 10, lineno, "pid"));
        const auto op = op_from(tok[1]);
        if (!op)
            throw TraceParseError(lineno, "unknown op '" + tok[1] + "'");
        rec.op = *op;
        rec.addr = check_addr(parse_u64(tok[2], 16, lineno, "address"));
        trace.records.push_back(rec);
    }
    return trace;
}

ParsedTrace parse_trace_file(const std::string& path, uint32_t addr_bits) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open trace file: " + path);
    return parse_trace(in, addr_bits);
}

void write_trace(std::ostream& out, const ParsedTrace& trace) {
    std::vector<std::pair<uint32_t, uint8_t>> domains(
        trace.domains.pid_to_idid.begin(), trace.domains.pid_to_idid.end());
    std::sort(domains.begin(), domains.end());
    for (const auto& [pid, idid] : domains)
        out << "domain " << pid << ' ' << unsigned(idid) << '\n';
    if (trace.domains.shared_region)
        out << "shared " << std::hex << trace.domains.shared_region->first << ' '
            << trace.domains.shared_region->second << std::dec << '\n';
    for (const TraceRecord& rec : trace.records)
        out << rec.pid << ' ' << op_name(rec.op) << ' ' << std::hex << rec.addr
            << std::dec << '\n';
}

std::variant<AccessRequest, Violation> apply_io_rules(const TraceRecord& rec,
                                                      const DomainMap& map) {
    const uint8_t idid = map.idid_of(rec.pid);
    const bool in_region = map.in_shared_region(rec.addr);

    if (rec.op == TraceOp::kIoRead || rec.op == TraceOp::kIoWrite) {
        if (!in_region)
            return Violation{ViolationKind::kIoMoveOutsideRegion, rec};
        const auto kind = rec.op == TraceOp::kIoRead ? AccessKind::kRead
                                                     : AccessKind::kWrite;
        return AccessRequest{rec.pid, 0, kind, rec.addr};
    }

    if (idid != 0 && in_region)
        return Violation{ViolationKind::kRegularAccessToSharedRegion, rec};

    AccessKind kind = AccessKind::kFlush;
    if (rec.op == TraceOp::kRead)
        kind = AccessKind::kRead;
    else if (rec.op == TraceOp::kWrite)
        kind = AccessKind::kWrite;
    return AccessRequest{rec.pid, idid, kind, rec.addr};
}

std::vector<TraceRecord> gen_montgomery_victim(const VictimSpec& spec, uint32_t pid) {
    if (spec.addr_bit0 == spec.addr_bit1 || spec.addr_bit0 == spec.addr_common ||
        spec.addr_bit1 == spec.addr_common)
        throw std::invalid_argument("victim spec: addresses must be distinct");
    std::vector<TraceRecord> out;
    out.reserve(spec.key_bits.size() * 2);
    for (char bit : spec.key_bits) {
        if (bit != '0' && bit != '1')
            throw std::invalid_argument("victim spec: key must be '0'/'1' bits");
        out.push_back({pid, TraceOp::kRead, spec.addr_common});
        out.push_back({pid, TraceOp::kRead, bit == '1' ? spec.addr_bit1 : spec.addr_bit0});
    }
    return out;
}

std::vector<TraceRecord> gen_uniform(uint32_t pid, uint64_t num_accesses,
                                     uint64_t addr_lo, uint64_t addr_hi,
                                     double read_fraction, uint64_t seed) {
    if (addr_lo >= addr_hi)
        throw std::invalid_argument("gen_uniform: empty address range");
    if (read_fraction < 0.0 || read_fraction > 1.0)
        throw std::invalid_argument("gen_uniform: read fraction outside [0,1]");
    SeededRng rng(seed);
    std::vector<TraceRecord> out;
    out.reserve(num_accesses);
    // read/write split by thresholding a 32-bit draw keeps it integer-only
    const auto threshold = uint64_t(read_fraction * 4294967296.0);
    for (uint64_t i = 0; i < num_accesses; ++i) {
        const uint64_t addr = addr_lo + rng.next_uniform(addr_hi - addr_lo);
        const bool read = (rng.next_u64() >> 32) < threshold;
        out.push_back({pid, read ? TraceOp::kRead : TraceOp::kWrite, addr});
    }
    return out;
}

std::vector<TraceRecord> gen_working_set(uint32_t pid, uint64_t num_accesses,
                                         uint64_t base_addr, uint64_t num_lines,
                                         uint32_t line_size, double read_fraction,
                                         uint64_t seed) {
    if (num_lines == 0)
        throw std::invalid_argument("gen_working_set: empty working set");
    if (read_fraction < 0.0 || read_fraction > 1.0)
        throw std::invalid_argument("gen_working_set: read fraction outside [0,1]");
    SeededRng rng(seed);
    std::vector<TraceRecord> out;
    out.reserve(num_accesses);
    const auto threshold = uint64_t(read_fraction * 4294967296.0);
    for (uint64_t i = 0; i < num_accesses; ++i) {
        const uint64_t addr = base_addr + rng.next_uniform(num_lines) * line_size;
        const bool read = (rng.next_u64() >> 32) < threshold;
        out.push_back({pid, read ? TraceOp::kRead : TraceOp::kWrite, addr});
    }
    return out;
}

std::vector<TraceRecord> gen_pointer_chase(uint32_t pid, uint64_t num_accesses,
                                           uint64_t base_addr, uint64_t num_lines,
                                           uint32_t line_size, uint64_t seed) {
    if (num_lines == 0)
        throw std::invalid_argument("gen_pointer_chase: empty chain");
    SeededRng rng(seed);
    // Sattolo's shuffle yields one cycle through every line.
    std::vector<uint64_t> next(num_lines);
    std::iota(next.begin(), next.end(), uint64_t{0});
    for (uint64_t i = num_lines - 1; i >= 1; --i)
        std::swap(next[i], next[rng.next_uniform(i)]);
    std::vector<TraceRecord> out;
    out.reserve(num_accesses);
    uint64_t at = 0;
    for (uint64_t i = 0; i < num_accesses; ++i) {
        out.push_back({pid, TraceOp::kRead, base_addr + at * line_size});
        at = next[at];
    }
    return out;
}

std::vector<TraceRecord> interleave(const std::vector<std::vector<TraceRecord>>& streams,
                                    size_t quantum) {
    if (quantum == 0)
        throw std::invalid_argument("interleave: zero quantum");
    std::vector<TraceRecord> out;
    size_t total = 0;
    for (const auto& s : streams)
        total += s.size();
    out.reserve(total);
    std::vector<size_t> pos(streams.size(), 0);
    while (out.size() < total) {
        for (size_t s = 0; s < streams.size(); ++s) {
            for (size_t q = 0; q < quantum && pos[s] < streams[s].size(); ++q)
                out.push_back(streams[s][pos[s]++]);
        }
    }
    return out;
}

}  // namespace hybsim
