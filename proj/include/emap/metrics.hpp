#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "emap/association.hpp"
#include "emap/tracker.hpp"

namespace emap {

/// Matched (gt id, pred id) pairs of one frame plus its miss counts.
struct FrameCorrespondence {
  int frame = 0;
  std::vector<std::pair<int, int>> pairs;
  int fp = 0;
  int fn = 0;
};

/// Per-frame correspondences of a whole sequence, plus the per-(gt, pred)
/// frame-overlap counts the identity metrics need.
struct Correspondences {
  std::vector<FrameCorrespondence> frames;
  long long gt_total = 0;
  long long pred_total = 0;
  std::map<std::pair<int, int>, long long> overlap_counts;
};

/// Per-frame matching of predictions to ground truth with the usual
/// carry-over rule: a (gt, pred) pair matched previously is kept while it
/// stays above the IoU threshold, and only the remainder is re-optimized.
inline Correspondences match_frames(const TrackTable& pred,
                                    const TrackTable& gt,
                                    double iou_thresh = 0.5) {
  std::map<int, std::vector<const TrackOutput*>> pred_by_frame, gt_by_frame;
  for (const TrackOutput& row : pred) pred_by_frame[row.frame].push_back(&row);
  for (const TrackOutput& row : gt) gt_by_frame[row.frame].push_back(&row);

  std::set<int> frame_ids;
  for (const auto& [f, _] : pred_by_frame) frame_ids.insert(f);
  for (const auto& [f, _] : gt_by_frame) frame_ids.insert(f);

  Correspondences out;
  out.gt_total = static_cast<long long>(gt.size());
  out.pred_total = static_cast<long long>(pred.size());

  std::map<int, int> carry;  // gt id -> pred id of its last matched frame
  for (const int frame : frame_ids) {
    auto gts = gt_by_frame.count(frame) ? gt_by_frame[frame]
                                        : std::vector<const TrackOutput*>{};
    auto preds = pred_by_frame.count(frame) ? pred_by_frame[frame]
                                            : std::vector<const TrackOutput*>{};
    const auto by_id = [](const TrackOutput* a, const TrackOutput* b) {
      return a->id < b->id;
    };
    std::sort(gts.begin(), gts.end(), by_id);
    std::sort(preds.begin(), preds.end(), by_id);

    for (const TrackOutput* g : gts)
      for (const TrackOutput* p : preds)
        if (iou(g->box, p->box) >= iou_thresh)
          out.overlap_counts[{g->id, p->id}] += 1;

    FrameCorrespondence fc;
    fc.frame = frame;
    std::vector<char> gt_done(gts.size(), 0), pred_done(preds.size(), 0);

    // carry-over pass
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      const auto it = carry.find(gts[gi]->id);
      if (it == carry.end()) continue;
      for (std::size_t pi = 0; pi < preds.size(); ++pi) {
        if (pred_done[pi] || preds[pi]->id != it->second) continue;
        if (iou(gts[gi]->box, preds[pi]->box) >= iou_thresh) {
          fc.pairs.emplace_back(gts[gi]->id, preds[pi]->id);
          gt_done[gi] = 1;
          pred_done[pi] = 1;
        }
        break;
      }
    }

    // optimal assignment on the remainder
    std::vector<std::size_t> gi_left, pi_left;
    for (std::size_t gi = 0; gi < gts.size(); ++gi)
      if (!gt_done[gi]) gi_left.push_back(gi);
    for (std::size_t pi = 0; pi < preds.size(); ++pi)
      if (!pred_done[pi]) pi_left.push_back(pi);
    if (!gi_left.empty() && !pi_left.empty()) {
      constexpr double kForbidden = 2.0;
      Eigen::MatrixXd cost(gi_left.size(), pi_left.size());
      Eigen::MatrixXd overlap(gi_left.size(), pi_left.size());
      for (std::size_t a = 0; a < gi_left.size(); ++a) {
        for (std::size_t b = 0; b < pi_left.size(); ++b) {
          const double o = iou(gts[gi_left[a]]->box, preds[pi_left[b]]->box);
          overlap(a, b) = o;
          cost(a, b) = o >= iou_thresh ? 1.0 - o : kForbidden;
        }
      }
      const std::vector<int> row_to_col = solve_assignment(cost);
      for (std::size_t a = 0; a < gi_left.size(); ++a) {
        const int b = row_to_col[a];
        if (b >= 0 && overlap(a, b) >= iou_thresh) {
          fc.pairs.emplace_back(gts[gi_left[a]]->id, preds[pi_left[b]]->id);
          gt_done[gi_left[a]] = 1;
          pred_done[pi_left[b]] = 1;
        }
      }
    }

    std::sort(fc.pairs.begin(), fc.pairs.end());
    for (const auto& [g, p] : fc.pairs) carry[g] = p;
    for (std::size_t gi = 0; gi < gts.size(); ++gi)
      if (!gt_done[gi]) fc.fn += 1;
    for (std::size_t pi = 0; pi < preds.size(); ++pi)
      if (!pred_done[pi]) fc.fp += 1;
    out.frames.push_back(std::move(fc));
  }
  return out;
}

/// Sequence-level tracking metrics.
struct EvalReport {
  long long gt_count = 0;
  long long pred_count = 0;
  long long match_count = 0;
  long long fp = 0;
  long long fn = 0;
  long long idsw = 0;
  long long idtp = 0;  // identity true positives of the global matching
  double mota = 1.0;
  double idf1 = 1.0;
};

inline double compute_mota(long long fn, long long fp, long long idsw,
                           long long gt) {
  if (gt == 0) return 1.0;
  return 1.0 - static_cast<double>(fn + fp + idsw) / static_cast<double>(gt);
}

inline double compute_idf1(long long idtp, long long gt, long long pred) {
  if (gt + pred == 0) return 1.0;
  return 2.0 * static_cast<double>(idtp) / static_cast<double>(gt + pred);
}

/// Collapses per-frame correspondences into the sequence report. An identity
/// switch is counted whenever a ground-truth identity's matched predicted id
/// differs from the one at its previous matched frame, so a loss followed by
/// reinitialization under a new id counts as well. IDF1 comes from a globally
/// optimal identity correspondence over the per-(gt, pred) overlap counts.
inline EvalReport summarize(const Correspondences& c) {
  EvalReport r;
  r.gt_count = c.gt_total;
  r.pred_count = c.pred_total;
  std::map<int, int> last;
  for (const FrameCorrespondence& fc : c.frames) {
    r.fp += fc.fp;
    r.fn += fc.fn;
    for (const auto& [g, p] : fc.pairs) {
      r.match_count += 1;
      const auto it = last.find(g);
      if (it != last.end() && it->second != p) r.idsw += 1;
      last[g] = p;
    }
  }
  r.mota = compute_mota(r.fn, r.fp, r.idsw, r.gt_count);

  std::vector<int> gt_ids, pred_ids;
  {
    std::set<int> gs, ps;
    for (const auto& [key, _] : c.overlap_counts) {
      gs.insert(key.first);
      ps.insert(key.second);
    }
    gt_ids.assign(gs.begin(), gs.end());
    pred_ids.assign(ps.begin(), ps.end());
  }
  if (!gt_ids.empty() && !pred_ids.empty()) {
    double max_count = 0.0;
    Eigen::MatrixXd counts(gt_ids.size(), pred_ids.size());
    counts.setZero();
    for (std::size_t a = 0; a < gt_ids.size(); ++a)
      for (std::size_t b = 0; b < pred_ids.size(); ++b) {
        const auto it = c.overlap_counts.find({gt_ids[a], pred_ids[b]});
        if (it != c.overlap_counts.end()) {
          counts(a, b) = static_cast<double>(it->second);
          max_count = std::max(max_count, counts(a, b));
        }
      }
    const Eigen::MatrixXd cost =
        Eigen::MatrixXd::Constant(counts.rows(), counts.cols(), max_count) -
        counts;
    const std::vector<int> row_to_col = solve_assignment(cost);
    long long idtp = 0;
    for (std::size_t a = 0; a < gt_ids.size(); ++a)
      if (row_to_col[a] >= 0)
        idtp += static_cast<long long>(counts(a, row_to_col[a]));
    r.idtp = idtp;
  }
  r.idf1 = compute_idf1(r.idtp, r.gt_count, r.pred_count);
  return r;
}

inline EvalReport evaluate(const TrackTable& pred, const TrackTable& gt,
                           double iou_thresh = 0.5) {
  return summarize(match_frames(pred, gt, iou_thresh));
}

/// Sums count-based fields across sequences and recomputes the ratios.
inline EvalReport combine(const std::vector<EvalReport>& reports) {
  EvalReport total;
  for (const EvalReport& r : reports) {
    total.gt_count += r.gt_count;
    total.pred_count += r.pred_count;
    total.match_count += r.match_count;
    total.fp += r.fp;
    total.fn += r.fn;
    total.idsw += r.idsw;
    total.idtp += r.idtp;
  }
  total.mota = compute_mota(total.fn, total.fp, total.idsw, total.gt_count);
  total.idf1 = compute_idf1(total.idtp, total.gt_count, total.pred_count);
  return total;
}

/// Traces one ground-truth identity through the correspondences: the sequence
/// of (frame, matched pred id), plus its own switch count. Used by tests and
/// by the gap diagnostics.
struct IdentityTrace {
  std::vector<std::pair<int, int>> matched;  // (frame, pred id)
  long long switches = 0;
};

inline IdentityTrace trace_identity(const Correspondences& c, int gt_id) {
  IdentityTrace tr;
  int last = -1;
  for (const FrameCorrespondence& fc : c.frames)
    for (const auto& [g, p] : fc.pairs)
      if (g == gt_id) {
        if (last != -1 && last != p) tr.switches += 1;
        last = p;
        tr.matched.emplace_back(fc.frame, p);
      }
  return tr;
}

/// One tracker mode's evaluation inside an ablation table.
struct AblationRow {
  EmapMode mode = EmapMode::Baseline;
  EvalReport report;
};

inline std::array<EmapMode, 4> ablation_modes() {
  return {EmapMode::Baseline, EmapMode::TranslationOnly, EmapMode::RotationOnly,
          EmapMode::Full};
}

/// Runs the tracker over identical inputs in all four modes and evaluates
/// each against the ground truth.
inline std::array<AblationRow, 4> ablate(const std::vector<FrameBundle>& frames,
                                         const TrackTable& ground_truth,
                                         const TrackerConfig& base,
                                         const CameraModel& cam,
                                         double iou_thresh = 0.5) {
  std::array<AblationRow, 4> rows;
  int i = 0;
  for (const EmapMode mode : ablation_modes()) {
    TrackerConfig cfg = base;
    cfg.mode = mode;
    const TrackTable table = run_sequence(frames, cfg, cam);
    rows[i].mode = mode;
    rows[i].report = evaluate(table, ground_truth, iou_thresh);
    ++i;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Report formatting
// ---------------------------------------------------------------------------

inline std::string format_metric_row(const std::string& label,
                                     const EvalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%-16s %8lld %8lld %6lld %6lld %6lld  %8.4f  %8.4f",
                label.c_str(), r.gt_count, r.match_count, r.fp, r.fn, r.idsw,
                r.mota, r.idf1);
  return buf;
}

inline std::string format_metric_header() {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-16s %8s %8s %6s %6s %6s  %8s  %8s",
                "sequence", "GT", "TP", "FP", "FN", "IDSW", "MOTA", "IDF1");
  return buf;
}

/// Aligned plain-text table: one row per labeled report.
inline std::string format_report_table(
    const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::ostringstream os;
  os << format_metric_header() << "\n";
  for (const auto& [label, r] : rows) os << format_metric_row(label, r) << "\n";
  return os.str();
}

/// Machine-readable companion of the text table.
inline std::string format_report_csv(
    const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::ostringstream os;
  os << "sequence,gt,tp,fp,fn,idsw,mota,idf1\n";
  for (const auto& [label, r] : rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%lld,%lld,%lld,%.6f,%.6f\n",
                  label.c_str(), r.gt_count, r.match_count, r.fp, r.fn, r.idsw,
                  r.mota, r.idf1);
    os << buf;
  }
  return os.str();
}

}  // namespace emap
