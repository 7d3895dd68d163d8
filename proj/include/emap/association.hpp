#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emap/geometry.hpp"

namespace emap {

/// One detector output box in one frame.
struct Detection {
  int frame = 0;
  std::string class_label;
  Box box;
  double confidence = 1.0;
  std::optional<double> depth;  // meters, when the source carries per-target depth
};

/// Intersection over union of two axis-aligned boxes; 0 when disjoint or when
/// either box has no area.
inline double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.right, b.right) - std::max(a.left, b.left);
  const double ih = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// Minimum-cost assignment via shortest augmenting paths with potentials
/// (Jonker-Volgenant style, O(n^2 m)). Rectangular inputs are fine; the
/// smaller side is matched completely. Returns the matched column per row or
/// -1. Deterministic: rows are processed in order and cost ties resolve to
/// the lowest column index.
inline std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);
  if (rows > cols) {
    const std::vector<int> col_to_row =
        solve_assignment(cost.transpose().eval());
    std::vector<int> row_to_col(rows, -1);
    for (int j = 0; j < cols; ++j)
      if (col_to_row[j] >= 0) row_to_col[col_to_row[j]] = j;
    return row_to_col;
  }

  constexpr double kInf = 1e30;
  const int n = rows, m = cols;
  std::vector<double> pot_row(n + 1, 0.0), pot_col(m + 1, 0.0);
  std::vector<int> matched_row(m + 1, 0);  // row matched to column j (1-based)
  std::vector<int> way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    matched_row[0] = i;
    int j0 = 0;
    std::vector<double> min_red(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = matched_row[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - pot_row[i0] - pot_col[j];
        if (cur < min_red[j]) {
          min_red[j] = cur;
          way[j] = j0;
        }
        if (min_red[j] < delta) {
          delta = min_red[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          pot_row[matched_row[j]] += delta;
          pot_col[j] -= delta;
        } else {
          min_red[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched_row[j0] != 0);
    do {
      const int j1 = way[j0];
      matched_row[j0] = matched_row[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (matched_row[j] > 0) row_to_col[matched_row[j] - 1] = j - 1;
  return row_to_col;
}

/// A predicted track box offered to the association stage.
struct PredictedBox {
  int id = 0;
  Box box;
  std::string class_label;
};

/// Outcome of one frame's association. Every input track id and detection
/// index appears exactly once across the three sets.
struct AssociationResult {
  std::vector<std::pair<int, int>> matches;  // (track id, detection index)
  std::vector<int> unmatched_tracks;         // track ids
  std::vector<int> unmatched_detections;     // detection indices
};

/// Matches predicted boxes to detections by maximizing total IoU (optimal
/// assignment on cost 1 - IoU). Pairs below iou_min or with disagreeing class
/// labels are discarded to the unmatched sets.
inline AssociationResult associate(const std::vector<PredictedBox>& tracks,
                                   const std::vector<Detection>& detections,
                                   double iou_min) {
  AssociationResult res;
  const int n = static_cast<int>(tracks.size());
  const int m = static_cast<int>(detections.size());
  if (n == 0 || m == 0) {
    for (const PredictedBox& t : tracks) res.unmatched_tracks.push_back(t.id);
    for (int j = 0; j < m; ++j) res.unmatched_detections.push_back(j);
    return res;
  }

  // Class-mismatched pairs cost more than any real pair so the solver avoids
  // them unless structurally forced; the post-filter drops them regardless.
  constexpr double kForbidden = 2.0;
  Eigen::MatrixXd overlap(n, m);
  Eigen::MatrixXd cost(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double o = iou(tracks[i].box, detections[j].box);
      overlap(i, j) = o;
      cost(i, j) = tracks[i].class_label == detections[j].class_label
                       ? 1.0 - o
                       : kForbidden;
    }
  }

  const std::vector<int> row_to_col = solve_assignment(cost);
  std::vector<char> det_used(m, 0);
  for (int i = 0; i < n; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && cost(i, j) < kForbidden && overlap(i, j) >= iou_min) {
      res.matches.emplace_back(tracks[i].id, j);
      det_used[j] = 1;
    } else {
      res.unmatched_tracks.push_back(tracks[i].id);
    }
  }
  for (int j = 0; j < m; ++j)
    if (!det_used[j]) res.unmatched_detections.push_back(j);
  return res;
}

}  // namespace emap
