#include "projgrad/trace.hpp"

#include <stdexcept>

namespace projgrad {

std::pair<int, double> best_iterate(const Trace& trace) {
  if (trace.records.empty())
    throw std::invalid_argument("best_iterate: empty trace");
  int best = 0;
  double best_norm = trace.records.front().pg_norm;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    if (trace.records[i].pg_norm < best_norm) {
      best = static_cast<int>(i);
      best_norm = trace.records[i].pg_norm;
    }
  }
  // records[i] holds the mapping at iterate x_i.
  return {best, best_norm};
}

int segment_count(const Trace& trace) {
  if (trace.records.empty())
    throw std::invalid_argument("segment_count: empty trace");
  int segments = 1;
  for (const auto& rec : trace.records) {
    if (!rec.curvature.has_value())
      throw std::invalid_argument("segment_count: trace lacks curvature estimates");
    if (rec.t >= 2 && *rec.curvature > 1.5 * rec.gamma) ++segments;
  }
  return segments;
}

}  // namespace projgrad
