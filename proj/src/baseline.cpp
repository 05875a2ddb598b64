#include "frailty/baseline.hpp"

#include <algorithm>
#include <cmath>

namespace frailty {

double StepCumulativeHazard::operator()(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0.0;
  return cum[static_cast<std::size_t>(it - times.begin()) - 1];
}

void StepCumulativeHazard::rebuild_cum() {
  cum.resize(jumps.size());
  double acc = 0.0;
  for (std::size_t v = 0; v < jumps.size(); ++v) cum[v] = (acc += jumps[v]);
}

StepCumulativeHazard breslow(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                             const Eigen::VectorXd& beta, const std::vector<double>& offset) {
  const int n = data.n();
  const int r = idx.n_times();
  StepCumulativeHazard h0;
  h0.times = idx.event_times;
  h0.jumps.assign(r, 0.0);

  // One reverse sweep: walking event times from last to first, the risk-set
  // denominator only gains subjects.
  double denom = 0.0;
  int pos = n;  // first position already absorbed into denom
  for (int v = r - 1; v >= 0; --v) {
    while (pos > idx.first_at_risk[v]) {
      --pos;
      const int i = idx.order[pos];
      denom += std::exp(data.x.row(i).dot(beta) + offset[i]);
    }
    h0.jumps[v] = idx.event_counts[v] / denom;
  }
  h0.rebuild_cum();
  return h0;
}

std::vector<double> cluster_hazard(const ClusteredSurvivalData& data,
                                   const StepCumulativeHazard& h0, const Eigen::VectorXd& beta) {
  std::vector<double> H(data.n_clusters, 0.0);
  for (int i = 0; i < data.n(); ++i)
    H[data.cluster[i]] += h0(data.time[i]) * std::exp(data.x.row(i).dot(beta));
  return H;
}

}  // namespace frailty
