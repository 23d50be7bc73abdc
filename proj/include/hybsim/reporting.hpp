#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hybsim/attacks.hpp"
#include "hybsim/hierarchy.hpp"
#include "hybsim/simulate.hpp"

namespace hybsim {

/// CSV and JSON renderings of the result structs. CSV is one header
/// line plus data rows; JSON mirrors the same fields. All floating
/// point is fixed six-decimal so identical runs serialize identically.

std::string to_csv(const std::vector<StatsRow>& rows);
nlohmann::json to_json(const std::vector<StatsRow>& rows);

std::string to_csv(const DetectionReport& rep);
nlohmann::json to_json(const DetectionReport& rep);

std::string to_csv(const EvictionSample& sample);
nlohmann::json to_json(const EvictionSample& sample);

std::string to_csv(const OccupancyReport& rep);
nlohmann::json to_json(const OccupancyReport& rep);

std::string to_csv(const CompareResult& cmp);
nlohmann::json to_json(const CompareResult& cmp);

}  // namespace hybsim
