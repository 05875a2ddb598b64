#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace frailty {

// Clustered right-censored survival sample.  Subjects are stored row-wise;
// cluster ids are dense 0..g-1 in first-appearance order.
struct ClusteredSurvivalData {
  std::vector<double> time;           // observed time y_ij > 0
  std::vector<std::uint8_t> status;   // 1 = event, 0 = censored
  std::vector<int> cluster;           // dense id per subject
  Eigen::MatrixXd x;                  // n rows, p columns (p may be 0)
  int n_clusters = 0;

  int n() const { return static_cast<int>(time.size()); }
  int p() const { return static_cast<int>(x.cols()); }
  int n_events() const;

  std::vector<int> cluster_sizes() const;
  std::vector<int> cluster_events() const;

  // Structural checks: consistent lengths, positive times, 0/1 status,
  // dense cluster ids, at least two clusters.  Throws std::invalid_argument.
  void validate() const;
};

}  // namespace frailty
