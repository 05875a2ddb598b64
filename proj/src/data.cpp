#include "frailty/data.hpp"

#include <stdexcept>
#include <string>

namespace frailty {

int ClusteredSurvivalData::n_events() const {
  int d = 0;
  for (const auto s : status) d += s;
  return d;
}

std::vector<int> ClusteredSurvivalData::cluster_sizes() const {
  std::vector<int> out(n_clusters, 0);
  for (const int c : cluster) ++out[c];
  return out;
}

std::vector<int> ClusteredSurvivalData::cluster_events() const {
  std::vector<int> out(n_clusters, 0);
  for (int i = 0; i < n(); ++i) out[cluster[i]] += status[i];
  return out;
}

void ClusteredSurvivalData::validate() const {
  const auto nn = time.size();
  if (status.size() != nn || cluster.size() != nn || static_cast<std::size_t>(x.rows()) != nn)
    throw std::invalid_argument("data: field lengths disagree");
  if (nn == 0) throw std::invalid_argument("data: empty sample");
  if (n_clusters < 2) throw std::invalid_argument("data: need at least 2 clusters");
  std::vector<bool> seen(n_clusters, false);
  for (std::size_t i = 0; i < nn; ++i) {
    if (!(time[i] > 0.0))
      throw std::invalid_argument("data: nonpositive time at subject " + std::to_string(i));
    if (status[i] > 1)
      throw std::invalid_argument("data: status must be 0 or 1 at subject " + std::to_string(i));
    if (cluster[i] < 0 || cluster[i] >= n_clusters)
      throw std::invalid_argument("data: cluster id out of range at subject " + std::to_string(i));
    seen[cluster[i]] = true;
  }
  for (int c = 0; c < n_clusters; ++c)
    if (!seen[c]) throw std::invalid_argument("data: cluster ids not dense");
}

}  // namespace frailty
