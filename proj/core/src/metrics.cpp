#include "splitsat/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace splitsat {

double var_acc(const Assignment& pred, const Assignment& reference) {
  if (pred.size() != reference.size()) throw std::invalid_argument("var_acc: length mismatch");
  if (pred.size() == 0) throw std::invalid_argument("var_acc: empty assignments");
  size_t agree = 0;
  for (size_t i = 0; i < pred.values.size(); ++i)
    agree += pred.values[i] == reference.values[i];
  return 100.0 * static_cast<double>(agree) / static_cast<double>(pred.values.size());
}

RegretReport max_regret(std::span<const Weight> solver, std::span<const Weight> best_known) {
  if (solver.size() != best_known.size())
    throw std::invalid_argument("max_regret: misaligned instance lists");
  if (solver.empty()) throw std::invalid_argument("max_regret: empty instance lists");
  RegretReport r;
  bool any = false;
  for (size_t i = 0; i < solver.size(); ++i) {
    const auto diff = static_cast<std::int64_t>(solver[i]) - static_cast<std::int64_t>(best_known[i]);
    if (!any || diff > r.max_regret) r.max_regret = diff;
    any = true;
    if (diff < 0) r.best_known_updates.push_back(i);
  }
  return r;
}

}  // namespace splitsat
