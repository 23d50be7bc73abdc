// Command-line front end: trace simulation, the attack lab, eviction
// statistics, and baseline-vs-hybrid comparison. Reports go to stdout
// (or --output); human-readable summaries go to stderr so stdout is
// byte-stable for a fixed seed.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybsim/analysis.hpp"
#include "hybsim/attacks.hpp"
#include "hybsim/reporting.hpp"
#include "hybsim/sim_config.hpp"
#include "hybsim/simulate.hpp"

namespace {

using namespace hybsim;

struct GlobalOpts {
    uint64_t seed = kDefaultSeed;
    std::string format = "csv";
    std::string output;
    uint32_t parallel_trials = 1;
};

void emit(const std::string& csv, const nlohmann::json& json, const GlobalOpts& g) {
    const std::string payload = g.format == "json" ? json.dump(2) + "\n" : csv;
    if (g.output.empty() || g.output == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream f(g.output);
    if (!f)
        throw std::runtime_error("cannot write output file: " + g.output);
    f << payload;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

HierarchyConfig load_hierarchy(const std::string& config_path, uint64_t seed,
                               bool seed_given) {
    HierarchyConfig cfg =
        config_path.empty() ? default_hierarchy() : parse_hierarchy_config_file(config_path);
    if (seed_given || config_path.empty())
        cfg.seed = seed;
    return cfg;
}

int run_simulate(const GlobalOpts& g, bool seed_given, const std::string& config_path,
                 const std::string& trace_path, bool baseline) {
    const HierarchyConfig cfg = load_hierarchy(config_path, g.seed, seed_given);
    const ParsedTrace trace = parse_trace_file(trace_path, cfg.levels[0].addr_bits);
    const SimResult res = replay(trace, cfg, baseline);
    emit(to_csv(res.stats), to_json(res.stats), g);
    std::cerr << "replayed " << res.records_replayed << " records ("
              << res.flushes << " flushes), total latency "
              << res.total_latency_cycles << " cycles\n"
              << "violations: io_move_outside_region="
              << res.violations_io_move_outside_region
              << " regular_access_to_shared_region="
              << res.violations_regular_access_to_shared_region << " (blocked)\n";
    return 0;
}

int run_compare(const GlobalOpts& g, bool seed_given, const std::string& config_path,
                const std::string& trace_path) {
    const HierarchyConfig cfg = load_hierarchy(config_path, g.seed, seed_given);
    const ParsedTrace trace = parse_trace_file(trace_path, cfg.levels[0].addr_bits);
    const CompareResult cmp = compare_runs(trace, cfg);
    emit(to_csv(cmp), to_json(cmp), g);
    for (const auto& [pid, base] : cmp.baseline) {
        const auto it = cmp.hybrid.find(pid);
        const uint64_t hyb = it != cmp.hybrid.end() ? it->second.total_misses : 0;
        std::cerr << "pid " << pid << " (idid " << unsigned(base.idid)
                  << "): misses baseline=" << base.total_misses << " hybrid=" << hyb
                  << '\n';
    }
    return 0;
}

int run_attack(const GlobalOpts& g, const std::string& kind, AttackScenario s,
               bool seed_given, const std::string& config_path, uint32_t key_bits,
               std::string key, bool idle, std::vector<uint64_t> sizes,
               uint32_t trials_per_size, bool attacker_given) {
    s.hierarchy = load_hierarchy(config_path, g.seed, seed_given);
    s.seed = g.seed;
    s.parallel_trials = g.parallel_trials;
    s.wait_model = idle ? WaitModel::kIdle : WaitModel::kVictimRuns;
    if (s.mode == CacheMode::kBaseline && !attacker_given) {
        s.attacker_idid = 0;
        s.victim_idid = 0;
    }
    if (key.empty())
        key = random_key(key_bits, g.seed);

    if (kind == "occupancy") {
        if (!attacker_given)
            s.attacker_idid = 2;  // occupancy needs the attacker isolated too
        const OccupancyReport rep = occupancy_probe(s, sizes, trials_per_size);
        emit(to_csv(rep), to_json(rep), g);
        std::cerr << "occupancy over " << rep.n_isolated << " entries, rank correlation "
                  << fixed6(rep.rank_correlation) << '\n';
        for (const auto& p : rep.points)
            std::cerr << "  k=" << p.working_set_size << " mean survivals "
                      << fixed6(p.mean_survivals) << '\n';
        return 0;
    }

    s.victim = default_victim_spec(s.hierarchy.levels[0], key);
    const DetectionReport rep =
        kind == "prime-probe" ? prime_probe(s) : flush_reload(s);
    emit(to_csv(rep), to_json(rep), g);
    std::cerr << (s.mode == CacheMode::kBaseline ? "baseline" : "hybcache") << ' '
              << kind << ", " << rep.trials.size() << " trials\n"
              << "key       " << rep.key_bits << '\n'
              << "recovered " << rep.recovered_bits << '\n'
              << "accuracy  " << fixed6(rep.accuracy) << '\n';
    return 0;
}

int run_evict_stats(const GlobalOpts& g, uint32_t entries, uint32_t trials) {
    const EvictionSample sample =
        evict_subcache_experiment(entries, trials, g.seed, g.parallel_trials);
    const CouponStats cs = coupon_stats(entries);
    emit(to_csv(sample), to_json(sample), g);
    std::cerr << "n=" << entries << " trials=" << trials << '\n'
              << "mean      " << fixed6(sample.sample_mean()) << " (expected "
              << fixed6(cs.expected) << ")\n"
              << "variance  " << fixed6(sample.sample_variance()) << " (asymptotic "
              << fixed6(cs.variance) << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybsim: soft-partitioned cache hierarchy simulator and attack lab"};
    app.require_subcommand(1);

    GlobalOpts g;
    auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed for every experiment")
                         ->envname("HYBSIM_SEED");
    app.add_option("--format", g.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--output", g.output, "write the report here instead of stdout");
    app.add_option("--parallel-trials", g.parallel_trials,
                   "worker threads for independent trials")
        ->check(CLI::PositiveNumber);

    std::string config_path, trace_path;
    bool baseline_replay = false;
    auto* sim = app.add_subcommand("simulate", "replay a trace and report per-domain stats");
    sim->fallthrough();
    sim->add_option("--trace", trace_path, "trace file")->required();
    sim->add_option("--config", config_path, "hierarchy config (defaults built in)");
    sim->add_flag("--baseline", baseline_replay,
                  "drop all domain assignments (conventional cache)");

    std::string attack_kind, key;
    uint32_t key_bits = 64;
    bool idle = false;
    std::vector<uint64_t> sizes{0, 32, 64, 96, 128, 192, 256};
    uint32_t trials_per_size = 50;
    AttackScenario scenario;
    std::string mode = "hybcache";
    auto* atk = app.add_subcommand("attack", "run an attack scenario from the lab");
    atk->fallthrough();
    atk->add_option("kind", attack_kind, "prime-probe, flush-reload, or occupancy")
        ->required()
        ->check(CLI::IsMember({"prime-probe", "flush-reload", "occupancy"}));
    atk->add_option("--mode", mode, "cache model under attack")
        ->check(CLI::IsMember({"baseline", "hybcache"}))
        ->capture_default_str();
    atk->add_option("--trials", scenario.trials, "independent trials")->capture_default_str();
    atk->add_option("--key-bits", key_bits, "random key length")->capture_default_str();
    atk->add_option("--key", key, "explicit key bits (overrides --key-bits)");
    auto* attacker_opt =
        atk->add_option("--attacker-idid", scenario.attacker_idid, "attacker domain");
    atk->add_option("--victim-idid", scenario.victim_idid, "victim domain");
    atk->add_flag("--idle", idle, "victim never runs (control)");
    atk->add_option("--config", config_path, "hierarchy config (defaults built in)");
    atk->add_option("--working-set-sizes", sizes, "occupancy: victim lines per point")
        ->delimiter(',');
    atk->add_option("--trials-per-size", trials_per_size, "occupancy: trials per point")
        ->capture_default_str();

    uint32_t entries = 128, ev_trials = 1000;
    auto* ev = app.add_subcommand("evict-stats",
                                  "coupon-collector cost of flushing a whole subcache");
    ev->fallthrough();
    ev->add_option("--entries", entries, "subcache entries")->capture_default_str();
    ev->add_option("--trials", ev_trials, "independent trials")->capture_default_str();

    auto* cmp = app.add_subcommand("compare",
                                   "replay a trace as baseline and hybrid, per process");
    cmp->fallthrough();
    cmp->add_option("--trace", trace_path, "trace file")->required();
    cmp->add_option("--config", config_path, "hierarchy config (defaults built in)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const bool seed_given = seed_opt->count() > 0;
        if (sim->parsed())
            return run_simulate(g, seed_given, config_path, trace_path, baseline_replay);
        if (atk->parsed()) {
            scenario.mode = mode == "baseline" ? CacheMode::kBaseline : CacheMode::kHybCache;
            return run_attack(g, attack_kind, scenario, seed_given, config_path, key_bits,
                              key, idle, sizes, trials_per_size, attacker_opt->count() > 0);
        }
        if (ev->parsed())
            return run_evict_stats(g, entries, ev_trials);
        if (cmp->parsed())
            return run_compare(g, seed_given, config_path, trace_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
