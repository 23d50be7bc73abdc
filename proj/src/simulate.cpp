#include "hybsim/simulate.hpp"

namespace hybsim {

namespace {

void replay_into(CacheHierarchy& h, const ParsedTrace& trace, const DomainMap& domains,
                 SimResult* result,
                 std::map<uint32_t, ProcessStats>* per_process) {
    for (const TraceRecord& rec : trace.records) {
        const auto resolved = apply_io_rules(rec, domains);
        if (const auto* v = std::get_if<Violation>(&resolved)) {
            if (result) {
                if (v->kind == ViolationKind::kIoMoveOutsideRegion)
                    result->violations_io_move_outside_region++;
                else
                    result->violations_regular_access_to_shared_region++;
            }
            continue;
        }
        const AccessRequest& req = std::get<AccessRequest>(resolved);
        if (req.kind == AccessKind::kFlush) {
            h.flush(req.addr, req.idid);
            if (result)
                result->flushes++;
            continue;
        }
        const HierarchyOutcome out = h.access(req);
        if (result)
            result->total_latency_cycles += out.total_latency_cycles;
        if (per_process) {
            ProcessStats& ps = (*per_process)[rec.pid];
            if (ps.levels.empty()) {
                ps.idid = domains.idid_of(rec.pid);
                ps.levels.resize(h.num_levels());
            }
            for (const LevelOutcome& lo : out.level_outcomes) {
                ProcessLevelCounters& c = ps.levels[lo.level];
                c.accesses++;
                if (lo.outcome.verdict == Verdict::kHit) {
                    c.hits++;
                } else {
                    c.misses++;
                    ps.total_misses++;
                }
            }
        }
    }
}

}  // namespace

SimResult replay(const ParsedTrace& trace, const HierarchyConfig& cfg,
                 bool force_non_isolated) {
    DomainMap domains = trace.domains;
    if (force_non_isolated)
        domains.pid_to_idid.clear();
    CacheHierarchy h(cfg);
    SimResult result;
    result.records_replayed = trace.records.size();
    replay_into(h, trace, domains, &result, nullptr);
    result.stats = h.stats();
    return result;
}

CompareResult compare_runs(const ParsedTrace& trace, const HierarchyConfig& cfg) {
    CompareResult cmp;

    DomainMap flat = trace.domains;
    flat.pid_to_idid.clear();
    CacheHierarchy base(cfg);
    replay_into(base, trace, flat, nullptr, &cmp.baseline);

    CacheHierarchy hyb(cfg);
    replay_into(hyb, trace, trace.domains, nullptr, &cmp.hybrid);

    // present the trace's domain labels on both sides
    for (auto& [pid, ps] : cmp.baseline)
        ps.idid = trace.domains.idid_of(pid);
    return cmp;
}

}  // namespace hybsim
