// Command-line front end: synthesize sequences, run the tracker, evaluate
// against ground truth, and run the four-mode ablation.

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emap/io.hpp"
#include "emap/metrics.hpp"
#include "emap/scenario.hpp"
#include "emap/tracker.hpp"

namespace {

emap::EmapMode parse_mode(const std::string& s) {
  if (s == "baseline") return emap::EmapMode::Baseline;
  if (s == "rot") return emap::EmapMode::RotationOnly;
  if (s == "trans") return emap::EmapMode::TranslationOnly;
  if (s == "full") return emap::EmapMode::Full;
  throw emap::Error("unknown mode '" + s + "' (expected baseline|rot|trans|full)");
}

std::string mode_label(emap::EmapMode m) {
  switch (m) {
    case emap::EmapMode::Baseline: return "baseline";
    case emap::EmapMode::TranslationOnly: return "translation-only";
    case emap::EmapMode::RotationOnly: return "rotation-only";
    case emap::EmapMode::Full: return "full";
  }
  return "?";
}

std::string sibling_with_suffix(const std::string& path,
                                const std::string& suffix) {
  std::filesystem::path p(path);
  const std::string stem = p.stem().string();
  return (p.parent_path() / (stem + suffix)).string();
}

int run_track(const std::string& manifest_path, const std::string& mode_str,
              const std::string& out_path, bool report_extrapolated,
              bool freeze_gap_depth) {
  const emap::EmapMode mode = parse_mode(mode_str);
  const emap::SequenceManifest manifest = emap::load_manifest(manifest_path);
  emap::SequenceData seq = emap::load_sequence(manifest, mode);
  seq.tracker.report_extrapolated = report_extrapolated;
  seq.tracker.freeze_gap_depth = freeze_gap_depth;
  const emap::TrackTable table =
      emap::run_sequence(seq.frames, seq.tracker, seq.camera);
  emap::write_tracks(out_path, table);
  std::cout << "wrote " << table.size() << " rows to " << out_path << "\n";
  return 0;
}

int run_synth(const std::string& scenario_arg, double dropout, double noise,
              std::uint64_t seed, const std::string& out_dir,
              bool depth_images) {
  emap::Scenario sc;
  if (scenario_arg.size() == 1 && scenario_arg[0] >= '1' &&
      scenario_arg[0] <= '4') {
    sc = emap::builtin_scenario(scenario_arg[0] - '0');
  } else {
    sc = emap::load_scenario_file(scenario_arg);
  }
  if (dropout < 0.0 || dropout > 1.0)
    throw emap::Error("--dropout must be within [0, 1]");
  emap::SynthOptions opt;
  opt.dropout = dropout;
  opt.noise_std = noise;
  opt.seed = seed;
  opt.depth_images = depth_images;
  const std::string manifest = emap::write_synthetic_sequence(sc, out_dir, opt);
  std::cout << "wrote scenario '" << sc.name << "' to " << out_dir << " ("
            << manifest << ")\n";
  return 0;
}

int run_eval(const std::string& pred_path, const std::string& gt_path,
             const std::string& report_path, bool emit_plot_data) {
  const emap::TrackTable pred = emap::read_tracks(pred_path);
  const emap::TrackTable gt = emap::read_tracks(gt_path);
  const emap::EvalReport report = emap::evaluate(pred, gt);
  const std::string label =
      std::filesystem::path(pred_path).stem().string();
  const std::vector<std::pair<std::string, emap::EvalReport>> rows{
      {label, report}};
  emap::write_text_file(report_path, emap::format_report_table(rows));
  emap::write_text_file(sibling_with_suffix(report_path, ".csv"),
                        emap::format_report_csv(rows));
  if (emit_plot_data) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "sequence,idsw,idf1\n%s,%lld,%.6f\n",
                  label.c_str(), report.idsw, report.idf1);
    emap::write_text_file(sibling_with_suffix(report_path, ".plot.csv"), buf);
  }
  std::cout << emap::format_report_table(rows);
  return 0;
}

int run_ablate(const std::vector<std::string>& manifest_paths,
               const std::string& out_path) {
  struct SeqRows {
    std::string name;
    std::array<emap::AblationRow, 4> rows;
  };
  // Sequences are independent; run them concurrently and collect in order.
  std::vector<std::future<SeqRows>> futures;
  for (const std::string& mp : manifest_paths) {
    futures.push_back(std::async(std::launch::async, [mp]() {
      const emap::SequenceManifest manifest = emap::load_manifest(mp);
      if (manifest.ground_truth_path.empty())
        throw emap::Error("ablate needs ground truth in manifest: " + mp);
      // Load once per mode: bundles are consumed by value per run.
      const emap::SequenceData probe =
          emap::load_sequence(manifest, emap::EmapMode::Full);
      return SeqRows{manifest.name,
                     emap::ablate(probe.frames, probe.ground_truth,
                                  probe.tracker, probe.camera)};
    }));
  }
  std::vector<SeqRows> per_seq;
  for (auto& f : futures) per_seq.push_back(f.get());

  std::vector<std::pair<std::string, emap::EvalReport>> table_rows;
  for (int m = 0; m < 4; ++m) {
    std::vector<emap::EvalReport> reports;
    for (const SeqRows& s : per_seq) reports.push_back(s.rows[m].report);
    table_rows.emplace_back(mode_label(per_seq.front().rows[m].mode),
                            emap::combine(reports));
  }

  std::ostringstream os;
  os << emap::format_report_table(table_rows);
  if (per_seq.size() > 1) {
    for (const SeqRows& s : per_seq) {
      os << "\n# " << s.name << "\n";
      std::vector<std::pair<std::string, emap::EvalReport>> rows;
      for (const emap::AblationRow& r : s.rows)
        rows.emplace_back(mode_label(r.mode), r.report);
      os << emap::format_report_table(rows);
    }
  }
  emap::write_text_file(out_path, os.str());
  emap::write_text_file(sibling_with_suffix(out_path, ".csv"),
                        emap::format_report_csv(table_rows));
  std::cout << os.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ego-motion-aware detection-based multi-object tracker"};
  app.require_subcommand(1);

  auto* track = app.add_subcommand("track", "Run the tracker over a sequence");
  std::string track_manifest, track_mode = "baseline", track_out;
  bool report_extrapolated = false, freeze_gap_depth = false;
  track->add_option("--manifest", track_manifest, "Sequence manifest (JSON)")
      ->required();
  track->add_option("--mode", track_mode, "baseline|rot|trans|full")
      ->check(CLI::IsMember({"baseline", "rot", "trans", "full"}));
  track->add_option("--out", track_out, "Output track CSV")->required();
  track->add_flag("--report-extrapolated", report_extrapolated,
                  "Also report unmatched confirmed tracks from prediction");
  track->add_flag("--freeze-gap-depth", freeze_gap_depth,
                  "Keep the last depth estimate through a detection gap");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic sequence");
  std::string synth_scenario = "1", synth_out;
  double synth_dropout = 0.0, synth_noise = 0.0;
  std::uint64_t synth_seed = 1;
  bool synth_depth_images = false;
  synth->add_option("--scenario", synth_scenario,
                    "1|2|3|4 or a scenario config file");
  synth->add_option("--dropout", synth_dropout,
                    "i.i.d. per-box dropout probability");
  synth->add_option("--noise", synth_noise, "corner noise std, pixels");
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--out-dir", synth_out, "Output directory")->required();
  synth->add_flag("--depth-images", synth_depth_images,
                  "Also write 16-bit depth graymaps");

  auto* eval = app.add_subcommand("eval", "Evaluate tracks against ground truth");
  std::string eval_pred, eval_gt, eval_report;
  bool emit_plot_data = false;
  eval->add_option("--pred", eval_pred, "Predicted track CSV")->required();
  eval->add_option("--gt", eval_gt, "Ground-truth track CSV")->required();
  eval->add_option("--report", eval_report, "Report text file")->required();
  eval->add_flag("--emit-plot-data", emit_plot_data,
                 "Also write per-sequence (IDSW, IDF1) pairs");

  auto* ablate = app.add_subcommand("ablate", "Four-mode ablation table");
  std::vector<std::string> ablate_manifests;
  std::string ablate_out;
  ablate->add_option("--manifest", ablate_manifests,
                     "Sequence manifest(s) with ground truth")
      ->required();
  ablate->add_option("--out", ablate_out, "Output table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (track->parsed())
      return run_track(track_manifest, track_mode, track_out,
                       report_extrapolated, freeze_gap_depth);
    if (synth->parsed())
      return run_synth(synth_scenario, synth_dropout, synth_noise, synth_seed,
                       synth_out, synth_depth_images);
    if (eval->parsed())
      return run_eval(eval_pred, eval_gt, eval_report, emit_plot_data);
    if (ablate->parsed()) return run_ablate(ablate_manifests, ablate_out);
  } catch (const emap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
