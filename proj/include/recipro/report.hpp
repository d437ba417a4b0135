#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "recipro/lax.hpp"

namespace recipro {

constexpr int kReportSchema = 1;

nlohmann::json to_json(const Report& r);
// reports sorted by name, wrapped with the schema version and an overall verdict
nlohmann::json to_json(const std::vector<Report>& reports);

nlohmann::json to_json(const PDESystem& sys);
nlohmann::json to_json(const ReciprocalTransform& t, int rule_order = 0);
nlohmann::json to_json(const LaxPair& lp);

// aligned LaTeX block, one equation per row
std::string system_latex(const PDESystem& sys);
std::string lax_latex(const LaxPair& lp);
std::string report_latex(const Report& r);

}  // namespace recipro
