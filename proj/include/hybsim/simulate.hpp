#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hybsim/hierarchy.hpp"
#include "hybsim/trace.hpp"

namespace hybsim {

struct SimResult {
    std::vector<StatsRow> stats;
    uint64_t records_replayed = 0;
    uint64_t flushes = 0;
    uint64_t violations_io_move_outside_region = 0;
    uint64_t violations_regular_access_to_shared_region = 0;
    uint64_t total_latency_cycles = 0;
};

/// Replays a parsed trace through a fresh hierarchy: every record goes
/// through the shared-region rules, violations are counted and
/// blocked, flushes flush, everything else becomes a read or write.
/// force_non_isolated drops all domain assignments first (the
/// conventional-cache baseline); the shared region and its rules stay.
SimResult replay(const ParsedTrace& trace, const HierarchyConfig& cfg,
                 bool force_non_isolated = false);

struct ProcessLevelCounters {
    uint64_t accesses = 0;
    uint64_t hits = 0;
    uint64_t misses = 0;

    bool operator==(const ProcessLevelCounters&) const = default;
};

/// Per-process outcome of one run, attributed outside the cache model
/// so the baseline run (where every process shares idid 0) can still
/// be split by process.
struct ProcessStats {
    uint8_t idid = 0;  // the domain the trace assigns this pid
    std::vector<ProcessLevelCounters> levels;
    uint64_t total_misses = 0;  // summed over levels
};

struct CompareResult {
    std::map<uint32_t, ProcessStats> baseline;
    std::map<uint32_t, ProcessStats> hybrid;
};

/// Runs the trace twice from identical initial state: once with all
/// processes forced non-isolated, once with the trace's own domain
/// assignments. Used to show isolation does not degrade non-isolated
/// processes.
CompareResult compare_runs(const ParsedTrace& trace, const HierarchyConfig& cfg);

}  // namespace hybsim
