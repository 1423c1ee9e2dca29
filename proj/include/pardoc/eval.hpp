#pragma once

#include <string>

#include <json.hpp>

namespace pardoc {

// Scores one metric task over a JSONL file of {"id", "task", "gt", "pred"}
// pairs (layout pairs carry box arrays, everything else strings). Returns
// per-id rows plus aggregate means.
nlohmann::ordered_json run_eval(const std::string& task, const std::string& pairs_path);

}  // namespace pardoc
