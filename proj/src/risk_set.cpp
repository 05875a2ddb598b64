#include "frailty/risk_set.hpp"

#include <algorithm>
#include <numeric>

namespace frailty {

RiskSetIndex build_risk_sets(const ClusteredSurvivalData& data) {
  RiskSetIndex idx;
  const int n = data.n();
  idx.order.resize(n);
  std::iota(idx.order.begin(), idx.order.end(), 0);
  std::stable_sort(idx.order.begin(), idx.order.end(),
                   [&](int a, int b) { return data.time[a] < data.time[b]; });

  idx.death_offsets.push_back(0);
  int pos = 0;
  while (pos < n) {
    const double t = data.time[idx.order[pos]];
    int end = pos;
    int deaths = 0;
    while (end < n && data.time[idx.order[end]] == t) {
      if (data.status[idx.order[end]]) {
        idx.death_subjects.push_back(idx.order[end]);
        ++deaths;
      }
      ++end;
    }
    if (deaths > 0) {
      idx.event_times.push_back(t);
      idx.event_counts.push_back(deaths);
      idx.first_at_risk.push_back(pos);
      idx.death_offsets.push_back(static_cast<int>(idx.death_subjects.size()));
    }
    pos = end;
  }
  return idx;
}

}  // namespace frailty
