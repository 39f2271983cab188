#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "splitsat/oracle.hpp"
#include "splitsat/wcnf.hpp"

namespace splitsat {

/// Dataset directory layout: `<dir>/inst_<idx>.wcnf` plus an optional
/// `labels.jsonl` with one record per instance (id, optimal_cost,
/// optimal_assignment in +-1, proven).
struct DatasetEntry {
  std::string id;  // e.g. "inst_0000"
  std::filesystem::path path;
  std::optional<OracleResult> label;
};

std::string instance_id(size_t index);

/// Lists inst_*.wcnf in id order and attaches labels.jsonl when present.
std::vector<DatasetEntry> load_dataset(const std::filesystem::path& dir);

void write_labels(const std::filesystem::path& dir,
                  const std::vector<std::pair<std::string, OracleResult>>& labels);

/// Solution file: one +-1 value per line.
void write_solution(const std::filesystem::path& path, const Assignment& alpha);
Assignment read_solution(const std::filesystem::path& path);

}  // namespace splitsat
