#include "hybsim/reporting.hpp"

#include <cstdio>
#include <sstream>

#include "hybsim/analysis.hpp"

namespace hybsim {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

const char* mode_name(CacheMode mode) {
    return mode == CacheMode::kBaseline ? "baseline" : "hybcache";
}

}  // namespace

std::string to_csv(const std::vector<StatsRow>& rows) {
    std::ostringstream out;
    out << "level,idid,accesses,hits,misses,miss_rate,evictions,writebacks,amat_cycles\n";
    for (const StatsRow& r : rows) {
        out << r.level << ',' << unsigned(r.idid) << ',' << r.accesses << ','
            << r.hits << ',' << r.misses << ',' << fixed6(r.miss_rate) << ','
            << r.evictions << ',' << r.writebacks << ',' << fixed6(r.amat_cycles)
            << '\n';
    }
    return out.str();
}

nlohmann::json to_json(const std::vector<StatsRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const StatsRow& r : rows) {
        arr.push_back({
            {"level", r.level},
            {"idid", r.idid},
            {"accesses", r.accesses},
            {"hits", r.hits},
            {"misses", r.misses},
            {"miss_rate", r.miss_rate},
            {"evictions", r.evictions},
            {"writebacks", r.writebacks},
            {"amat_cycles", r.amat_cycles},
        });
    }
    return arr;
}

std::string to_csv(const DetectionReport& rep) {
    std::ostringstream out;
    out << "trial,bit,key_bit,recovered_bit,latency_bit0,latency_bit1\n";
    for (size_t t = 0; t < rep.trials.size(); ++t) {
        const TrialResult& tr = rep.trials[t];
        for (size_t i = 0; i < rep.key_bits.size(); ++i) {
            out << t << ',' << i << ',' << rep.key_bits[i] << ','
                << tr.recovered_bits[i] << ',' << tr.probe_latency[i][0] << ','
                << tr.probe_latency[i][1] << '\n';
        }
    }
    return out.str();
}

nlohmann::json to_json(const DetectionReport& rep) {
    auto trials = nlohmann::json::array();
    for (const TrialResult& tr : rep.trials) {
        auto lat = nlohmann::json::array();
        for (const auto& pair : tr.probe_latency)
            lat.push_back({pair[0], pair[1]});
        trials.push_back({
            {"recovered_bits", tr.recovered_bits},
            {"slow_probes", tr.slow_probes},
            {"probe_latency", std::move(lat)},
        });
    }
    return {
        {"mode", mode_name(rep.mode)},
        {"key_bits", rep.key_bits},
        {"recovered_bits", rep.recovered_bits},
        {"accuracy", rep.accuracy},
        {"trials", std::move(trials)},
    };
}

std::string to_csv(const EvictionSample& sample) {
    std::ostringstream out;
    out << "trial,accesses\n";
    for (size_t t = 0; t < sample.samples.size(); ++t)
        out << t << ',' << sample.samples[t] << '\n';
    return out.str();
}

nlohmann::json to_json(const EvictionSample& sample) {
    const CouponStats cs = coupon_stats(sample.n_isolated);
    return {
        {"n_isolated", sample.n_isolated},
        {"trials", sample.samples.size()},
        {"sample_mean", sample.sample_mean()},
        {"sample_variance", sample.sample_variance()},
        {"expected_mean", cs.expected},
        {"expected_variance_asymptotic", cs.variance},
        {"samples", sample.samples},
    };
}

std::string to_csv(const OccupancyReport& rep) {
    std::ostringstream out;
    out << "working_set_size,trial,survivals\n";
    for (const OccupancyPoint& p : rep.points)
        for (size_t t = 0; t < p.survivals.size(); ++t)
            out << p.working_set_size << ',' << t << ',' << p.survivals[t] << '\n';
    return out.str();
}

nlohmann::json to_json(const OccupancyReport& rep) {
    auto points = nlohmann::json::array();
    for (const OccupancyPoint& p : rep.points) {
        points.push_back({
            {"working_set_size", p.working_set_size},
            {"mean_survivals", p.mean_survivals},
            {"survivals", p.survivals},
        });
    }
    return {
        {"n_isolated", rep.n_isolated},
        {"rank_correlation", rep.rank_correlation},
        {"points", std::move(points)},
    };
}

std::string to_csv(const CompareResult& cmp) {
    std::ostringstream out;
    out << "pid,idid,level,baseline_accesses,baseline_misses,hybrid_accesses,hybrid_misses\n";
    for (const auto& [pid, base] : cmp.baseline) {
        const auto hyb_it = cmp.hybrid.find(pid);
        for (size_t lvl = 0; lvl < base.levels.size(); ++lvl) {
            out << pid << ',' << unsigned(base.idid) << ',' << lvl << ','
                << base.levels[lvl].accesses << ',' << base.levels[lvl].misses << ',';
            if (hyb_it != cmp.hybrid.end() && lvl < hyb_it->second.levels.size())
                out << hyb_it->second.levels[lvl].accesses << ','
                    << hyb_it->second.levels[lvl].misses;
            else
                out << "0,0";
            out << '\n';
        }
    }
    return out.str();
}

nlohmann::json to_json(const CompareResult& cmp) {
    auto arr = nlohmann::json::array();
    for (const auto& [pid, base] : cmp.baseline) {
        const auto hyb_it = cmp.hybrid.find(pid);
        auto levels = nlohmann::json::array();
        for (size_t lvl = 0; lvl < base.levels.size(); ++lvl) {
            nlohmann::json row = {
                {"level", lvl},
                {"baseline",
                 {{"accesses", base.levels[lvl].accesses},
                  {"hits", base.levels[lvl].hits},
                  {"misses", base.levels[lvl].misses}}},
            };
            if (hyb_it != cmp.hybrid.end() && lvl < hyb_it->second.levels.size()) {
                const auto& h = hyb_it->second.levels[lvl];
                row["hybrid"] = {
                    {"accesses", h.accesses}, {"hits", h.hits}, {"misses", h.misses}};
            }
            levels.push_back(std::move(row));
        }
        arr.push_back({
            {"pid", pid},
            {"idid", base.idid},
            {"baseline_total_misses", base.total_misses},
            {"hybrid_total_misses",
             hyb_it != cmp.hybrid.end() ? hyb_it->second.total_misses : 0},
            {"levels", std::move(levels)},
        });
    }
    return arr;
}

}  // namespace hybsim
