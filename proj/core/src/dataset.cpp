#include "splitsat/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <json.hpp>

namespace splitsat {

std::string instance_id(size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "inst_%04zu", index);
  return buf;
}

std::vector<DatasetEntry> load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("not a dataset directory: " + dir.string());

  std::vector<DatasetEntry> entries;
  for (const auto& de : std::filesystem::directory_iterator(dir)) {
    const std::string name = de.path().filename().string();
    if (name.starts_with("inst_") && name.ends_with(".wcnf"))
      entries.push_back({name.substr(0, name.size() - 5), de.path(), std::nullopt});
  }
  std::sort(entries.begin(), entries.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });

  const auto labels_path = dir / "labels.jsonl";
  if (std::filesystem::exists(labels_path)) {
    std::map<std::string, OracleResult> labels;
    std::ifstream in(labels_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const nlohmann::json j = nlohmann::json::parse(line);
      OracleResult r;
      r.optimal_cost = j.at("optimal_cost").get<Weight>();
      r.proven = j.at("proven").get<bool>();
      for (const auto& v : j.at("optimal_assignment"))
        r.optimal_assignment.values.push_back(v.get<int>() > 0 ? 1 : -1);
      labels[j.at("instance").get<std::string>()] = std::move(r);
    }
    for (auto& e : entries) {
      const auto it = labels.find(e.id);
      if (it != labels.end()) e.label = it->second;
    }
  }
  return entries;
}

void write_labels(const std::filesystem::path& dir,
                  const std::vector<std::pair<std::string, OracleResult>>& labels) {
  std::ofstream out(dir / "labels.jsonl");
  if (!out) throw std::runtime_error("cannot write labels in " + dir.string());
  for (const auto& [id, r] : labels) {
    nlohmann::json j;
    j["instance"] = id;
    j["optimal_cost"] = r.optimal_cost;
    j["proven"] = r.proven;
    std::vector<int> a;
    a.reserve(r.optimal_assignment.values.size());
    for (const auto v : r.optimal_assignment.values) a.push_back(v);
    j["optimal_assignment"] = a;
    out << j.dump() << '\n';
  }
}

void write_solution(const std::filesystem::path& path, const Assignment& alpha) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write solution " + path.string());
  for (const auto v : alpha.values) out << static_cast<int>(v) << '\n';
}

Assignment read_solution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read solution " + path.string());
  Assignment a;
  int v;
  while (in >> v) {
    if (v != 1 && v != -1) throw std::runtime_error("bad solution value in " + path.string());
    a.values.push_back(static_cast<std::int8_t>(v));
  }
  return a;
}

}  // namespace splitsat
