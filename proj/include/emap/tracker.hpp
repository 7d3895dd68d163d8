#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emap/association.hpp"
#include "emap/geometry.hpp"
#include "emap/kalman.hpp"
#include "emap/predictor.hpp"

namespace emap {

enum class TrackStatus { Tentative, Confirmed, Lost };

/// Tracker behavior knobs. Filter noise scales follow the usual SORT-style
/// convention: standard deviations proportional to the box diagonal at track
/// creation.
struct TrackerConfig {
  EmapMode mode = EmapMode::Baseline;
  double iou_min = 0.3;
  int max_age = 10;   // frames a track survives unmatched
  int min_hits = 2;   // consecutive matches before a track is reported
  double dt_default = 0.1;
  bool report_extrapolated = false;
  bool freeze_gap_depth = false;
  double depth_max_range = 100.0;
  double pos_noise_frac = 1.0 / 20.0;
  double vel_noise_frac = 1.0 / 160.0;
  double obs_noise_frac = 1.0 / 20.0;
  double init_velocity_var = 1e4;  // px^2/s^2

  void validate() const {
    if (max_age < 1) throw Error("tracker config: max_age must be >= 1");
    if (min_hits < 1) throw Error("tracker config: min_hits must be >= 1");
    if (!(dt_default > 0.0)) throw Error("tracker config: dt_default must be > 0");
  }
};

/// One tracked target: filter state plus lifecycle bookkeeping.
struct Track {
  int id = 0;
  KfState kf;
  KfModel model;
  std::string class_label;
  int hits = 0;               // consecutive matched frames
  int age = 0;                // frames since creation
  int time_since_update = 0;  // frames since the last matched detection
  TrackStatus status = TrackStatus::Tentative;
  double last_confidence = 1.0;
  std::optional<double> depth;  // latest target depth estimate, meters

  Box box() const { return {kf.x(0), kf.x(1), kf.x(2), kf.x(3)}; }
};

/// One reported box. Extrapolated rows come from prediction alone during a
/// detection gap.
struct TrackOutput {
  int frame = 0;
  int id = 0;
  std::string class_label;
  Box box;
  double score = 1.0;
  bool extrapolated = false;
};

using TrackTable = std::vector<TrackOutput>;

/// Everything the tracker consumes for one time step.
struct FrameBundle {
  int frame = 0;
  std::vector<Detection> detections;
  EgoMotionSample ego{0.0, 0.0, 0.1};
  const DepthImage* depth_image = nullptr;
};

/// Detection-based tracking loop: per-frame predict, associate, update, and
/// lifecycle handling. One instance owns one sequence's state; frames must
/// arrive in increasing order.
class Tracker {
 public:
  Tracker(TrackerConfig cfg, CameraModel cam)
      : cfg_(std::move(cfg)), cam_(cam) {
    cfg_.validate();
    cam_.validate();
  }

  std::vector<TrackOutput> step(const FrameBundle& frame) {
    if (frame.frame <= last_frame_)
      throw Error("tracker: frames must arrive in increasing order (got " +
                  std::to_string(frame.frame) + " after " +
                  std::to_string(last_frame_) + ")");
    last_frame_ = frame.frame;

    // Predict every existing track with this frame's ego sample.
    last_predictions_.clear();
    for (Track& t : tracks_) {
      const std::optional<double> d = depth_for(t, frame);
      t.model.set_dt(frame.ego.dt);
      t.kf = emap_predict(t.kf, t.model, frame.ego, d, cfg_.mode, cam_);
      t.age += 1;
      last_predictions_.emplace_back(t.id, t.box());
    }

    std::vector<PredictedBox> predicted;
    predicted.reserve(tracks_.size());
    for (const Track& t : tracks_)
      predicted.push_back({t.id, t.box(), t.class_label});
    const AssociationResult assoc =
        associate(predicted, frame.detections, cfg_.iou_min);

    std::vector<TrackOutput> out;

    for (const auto& [track_id, det_index] : assoc.matches) {
      Track& t = find_track(track_id);
      const Detection& det = frame.detections[det_index];
      t.kf = update(t.kf, corners_of(det.box), t.model);
      repair_corner_order(t.kf);
      t.hits += 1;
      t.time_since_update = 0;
      t.last_confidence = det.confidence;
      if (det.depth) t.depth = det.depth;
      if (t.status == TrackStatus::Lost) {
        t.status = TrackStatus::Confirmed;
      } else if (t.status == TrackStatus::Tentative &&
                 t.hits >= cfg_.min_hits) {
        t.status = TrackStatus::Confirmed;
      }
      if (t.status == TrackStatus::Confirmed)
        out.push_back({frame.frame, t.id, t.class_label, t.box(),
                       det.confidence, false});
    }

    for (const int track_id : assoc.unmatched_tracks) {
      Track& t = find_track(track_id);
      t.time_since_update += 1;
      t.hits = 0;
      if (t.status == TrackStatus::Confirmed) t.status = TrackStatus::Lost;
      if (t.status == TrackStatus::Lost && cfg_.report_extrapolated &&
          t.time_since_update <= cfg_.max_age)
        out.push_back({frame.frame, t.id, t.class_label, t.box(),
                       t.last_confidence, true});
    }

    std::erase_if(tracks_, [&](const Track& t) {
      return t.time_since_update > cfg_.max_age;
    });

    for (const int det_index : assoc.unmatched_detections) {
      tracks_.push_back(make_track(frame.detections[det_index]));
      const Track& t = tracks_.back();
      if (t.status == TrackStatus::Confirmed)
        out.push_back({frame.frame, t.id, t.class_label, t.box(),
                       t.last_confidence, false});
    }

    return out;
  }

  const std::vector<Track>& tracks() const { return tracks_; }

  /// Predicted (pre-update) boxes of the most recent step, per track id.
  const std::vector<std::pair<int, Box>>& last_predictions() const {
    return last_predictions_;
  }

 private:
  static Vec4 corners_of(const Box& b) {
    return Vec4(b.left, b.top, b.right, b.bottom);
  }

  Track& find_track(int id) {
    for (Track& t : tracks_)
      if (t.id == id) return t;
    throw Error("tracker: unknown track id " + std::to_string(id));
  }

  std::optional<double> depth_for(Track& t, const FrameBundle& frame) const {
    if (!uses_translation(cfg_.mode)) return std::nullopt;
    if (cfg_.freeze_gap_depth && t.time_since_update > 0 && t.depth)
      return t.depth;
    if (frame.depth_image != nullptr) {
      const DepthSource src =
          DepthSource::image(frame.depth_image, cfg_.depth_max_range);
      const auto d = estimate_target_depth(t.box(), src, cam_);
      if (d) t.depth = d;
      return d;
    }
    return t.depth;  // scalar depth, refreshed whenever a detection matches
  }

  Track make_track(const Detection& det) {
    Track t;
    t.id = next_id_++;
    t.class_label = det.class_label;
    t.last_confidence = det.confidence;
    t.depth = det.depth;
    t.hits = 1;
    t.status = cfg_.min_hits <= 1 ? TrackStatus::Confirmed
                                  : TrackStatus::Tentative;

    const double diag = std::max(1.0, det.box.diagonal());
    const double pos_std = cfg_.pos_noise_frac * diag;
    const double vel_std = cfg_.vel_noise_frac * diag;
    const double obs_std = cfg_.obs_noise_frac * diag;
    t.model = KfModel::constant_velocity(cfg_.dt_default);
    t.model.Q.setZero();
    for (int i = 0; i < 4; ++i) {
      t.model.Q(i, i) = pos_std * pos_std;
      t.model.Q(i + 4, i + 4) = vel_std * vel_std;
    }
    t.model.R = obs_std * obs_std * Mat4::Identity();

    t.kf.x.setZero();
    t.kf.x.head<4>() = corners_of(det.box);
    t.kf.P.setZero();
    for (int i = 0; i < 4; ++i) {
      t.kf.P(i, i) = obs_std * obs_std;
      t.kf.P(i + 4, i + 4) = cfg_.init_velocity_var;
    }
    return t;
  }

  TrackerConfig cfg_;
  CameraModel cam_;
  std::vector<Track> tracks_;
  std::vector<std::pair<int, Box>> last_predictions_;
  int next_id_ = 1;
  int last_frame_ = -1;
};

/// Runs a whole sequence through a fresh tracker and concatenates the
/// per-frame outputs. Deterministic for fixed inputs and config.
inline TrackTable run_sequence(const std::vector<FrameBundle>& frames,
                               const TrackerConfig& cfg,
                               const CameraModel& cam) {
  Tracker tracker(cfg, cam);
  TrackTable out;
  for (const FrameBundle& f : frames) {
    std::vector<TrackOutput> rows = tracker.step(f);
    out.insert(out.end(), std::make_move_iterator(rows.begin()),
               std::make_move_iterator(rows.end()));
  }
  return out;
}

}  // namespace emap
