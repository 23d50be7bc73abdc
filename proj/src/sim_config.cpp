#include "hybsim/sim_config.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hybsim {

namespace {

[[noreturn]] void fail(size_t line, const std::string& what) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

uint64_t parse_num(const std::string& value, size_t line) {
    size_t pos = 0;
    uint64_t v = 0;
    try {
        v = std::stoull(value, &pos, 0);
    } catch (const std::exception&) {
        fail(line, "bad number '" + value + "'");
    }
    if (pos != value.size())
        fail(line, "bad number '" + value + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

HierarchyConfig parse_hierarchy_config(std::istream& in) {
    HierarchyConfig cfg;
    cfg.levels.clear();
    uint32_t addr_bits = 46;
    CacheConfig* current = nullptr;
    // geometry has no sensible file-level default; remember what each
    // section actually set so a bare [L2] cannot slip through
    std::vector<size_t> section_line;
    std::vector<std::pair<bool, bool>> have_sets_ways;
    std::string raw;
    size_t lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                fail(lineno, "malformed section header");
            CacheConfig level;
            level.level_name = trim(line.substr(1, line.size() - 2));
            if (level.level_name.empty())
                fail(lineno, "empty level name");
            cfg.levels.push_back(level);
            current = &cfg.levels.back();
            section_line.push_back(lineno);
            have_sets_ways.emplace_back(false, false);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(lineno, "expected key = value");
        const uint64_t num = parse_num(value, lineno);

        if (!current) {
            if (key == "memory_latency")
                cfg.memory_latency_cycles = uint32_t(num);
            else if (key == "seed")
                cfg.seed = num;
            else if (key == "addr_bits")
                addr_bits = uint32_t(num);
            else
                fail(lineno, "unknown global key '" + key + "'");
            continue;
        }
        if (key == "line_size")
            current->line_size_bytes = uint32_t(num);
        else if (key == "sets") {
            current->num_sets = uint32_t(num);
            have_sets_ways.back().first = true;
        } else if (key == "ways") {
            current->num_ways = uint32_t(num);
            have_sets_ways.back().second = true;
        } else if (key == "iso_ways")
            current->iso_ways = uint32_t(num);
        else if (key == "hit_latency")
            current->hit_latency_cycles = uint32_t(num);
        else
            fail(lineno, "unknown level key '" + key + "'");
    }

    if (cfg.levels.empty())
        throw std::runtime_error("config: no cache levels defined");
    for (size_t i = 0; i < cfg.levels.size(); ++i) {
        if (!have_sets_ways[i].first)
            fail(section_line[i], "level '" + cfg.levels[i].level_name + "' needs sets");
        if (!have_sets_ways[i].second)
            fail(section_line[i], "level '" + cfg.levels[i].level_name + "' needs ways");
        cfg.levels[i].addr_bits = addr_bits;
        try {
            validate_config(cfg.levels[i]);
        } catch (const std::exception& e) {
            fail(section_line[i], e.what());
        }
    }
    return cfg;
}

HierarchyConfig parse_hierarchy_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    return parse_hierarchy_config(in);
}

}  // namespace hybsim
