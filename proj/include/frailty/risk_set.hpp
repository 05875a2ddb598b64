#pragma once

#include <vector>

#include "frailty/data.hpp"

namespace frailty {

// Sorted view of the sample.  Risk sets are suffixes of `order`: the set at
// the v-th distinct event time is order[first_at_risk[v] ..), so sweeps over
// all risk sets run in O(n + r) after the sort.
struct RiskSetIndex {
  std::vector<int> order;            // subject ids, ascending observed time
  std::vector<double> event_times;   // distinct event times, ascending
  std::vector<int> event_counts;     // d_v = events at event_times[v]
  std::vector<int> first_at_risk;    // offset into order: first subject with y >= event_times[v]
  std::vector<int> death_offsets;    // CSR offsets into death_subjects, length r+1
  std::vector<int> death_subjects;   // event subjects grouped by distinct event time

  int n_times() const { return static_cast<int>(event_times.size()); }
};

RiskSetIndex build_risk_sets(const ClusteredSurvivalData& data);

}  // namespace frailty
