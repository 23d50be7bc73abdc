#pragma once

#include <iosfwd>
#include <string>

#include "hybsim/hierarchy.hpp"

namespace hybsim {

/// INI-style hierarchy description:
///   # comment
///   memory_latency = 100        global keys before the first section
///   seed = 24301
///   addr_bits = 46
///   [L1]                        one section per level, innermost first
///   line_size = 64
///   sets = 128
///   ways = 8
///   iso_ways = 2
///   hit_latency = 4
/// sets and ways are required per level; the rest default. Unknown
/// keys, malformed values, or a geometry that fails validation raise
/// std::runtime_error naming the line.
HierarchyConfig parse_hierarchy_config(std::istream& in);

HierarchyConfig parse_hierarchy_config_file(const std::string& path);

}  // namespace hybsim
