// adtrack: layer selection, tracking, one-pass evaluation and per-config analysis.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "adtrack/atomic_file.hpp"
#include "adtrack/dictionary.hpp"
#include "adtrack/ope.hpp"
#include "adtrack/synthetic.hpp"
#include "adtrack/tracker.hpp"

namespace {

using namespace adtrack;

struct Common {
  std::string model = "resnet50";
  std::string attrs;
  std::string dict_dir;
  std::string solver = "eco";
  std::string out;
  int jobs = 0;
  TrackerConfig tracker;
  std::optional<double> learning_rate;
};

void add_model_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--model", c.model, "vggm | vgg16 | googlenet | resnet50")
      ->check(CLI::IsMember({"vggm", "vgg16", "googlenet", "resnet50"}))
      ->capture_default_str();
  cmd->add_option("--dict", c.dict_dir, "Directory with the dictionary tables (default: shipped data)");
}

void add_tracker_flags(CLI::App* cmd, Common& c) {
  auto& t = c.tracker;
  cmd->add_option("--solver", c.solver, "eco | bacf")->check(CLI::IsMember({"eco", "bacf"}))->capture_default_str();
  cmd->add_option("--sigma-factor", t.sigma_factor, "Label bandwidth relative to target size in cells")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--learning-rate", c.learning_rate, "Sample weight eta (default 0.009 eco / 0.013 bacf)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--scales", t.n_scales, "Number of search scales")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--scale-step", t.scale_step, "Ratio between adjacent scales")
      ->check(CLI::Range(1.0, 2.0))->capture_default_str();
  cmd->add_option("--train-interval", t.train_interval, "Frames between filter updates (N_train)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--capacity", t.memory_capacity, "Sample memory capacity")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--padding", t.padding, "Search window side relative to the target")
      ->check(CLI::Range(1.0, 10.0))->capture_default_str();
  cmd->add_option("--reg-min", t.reg_min, "Spatial regularizer value inside the target")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--reg-slope", t.reg_slope, "Spatial regularizer growth outside the target")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--cg-iters", t.cg.max_iters, "Conjugate gradient iterations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--cg-tol", t.cg.tol, "Conjugate gradient relative residual tolerance")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--admm-iters", t.bacf.iterations, "ADMM iterations")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--admm-mu", t.bacf.mu, "Initial ADMM penalty")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--admm-mu-scale", t.bacf.mu_scale, "ADMM penalty growth factor")
      ->check(CLI::Range(1.0, 1e6))->capture_default_str();
  cmd->add_option("--admm-mu-max", t.bacf.mu_max, "ADMM penalty cap")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--bacf-lambda", t.bacf.lambda, "BACF ridge weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--crop-ratio", t.bacf.crop_ratio, "BACF filter support relative to the search grid")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--orientations", t.n_orientations, "Built-in feature orientation bins")
      ->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--cell", t.cell, "Pixels per feature cell")->check(CLI::PositiveNumber)->capture_default_str();
}

TrackerConfig finish_tracker(const Common& c) {
  TrackerConfig t = c.tracker;
  t.solver = parse_solver(c.solver);
  t.learning_rate = c.learning_rate;
  t.validate();
  return t;
}

DictionaryCatalog load_catalog(const Common& c) {
  return c.dict_dir.empty() ? load_dictionaries() : load_dictionaries(c.dict_dir);
}

Box parse_box(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 4 || !(v[2] > 0.0) || !(v[3] > 0.0))
    throw std::invalid_argument("--box expects x,y,w,h with positive size");
  return {v[0] - 1.0, v[1] - 1.0, v[2], v[3]};
}

std::string boxes_text(const std::vector<Box>& boxes) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  for (const auto& b : boxes) out << b.x + 1.0 << ',' << b.y + 1.0 << ',' << b.w << ',' << b.h << '\n';
  return out.str();
}

int cmd_select(const Common& c) {
  const ModelId model = parse_model(c.model);
  const auto catalog = load_catalog(c);
  const AttributeVector z = AttributeVector::parse(c.attrs);
  const auto& table = catalog.table(model, Metric::Precision);
  const auto scores = score_configs(model, z, catalog);
  const std::size_t best = select_index(scores, table.configs);
  const auto& chosen = table.configs[best];

  std::printf("model: %s\n", std::string(model_name(model)).c_str());
  std::printf("attributes: %s%s\n", z.to_string().c_str(), z.all_zero() ? " (all-zero, using all-one)" : "");
  std::printf("config: %s\n", chosen.label().c_str());
  std::printf("K: %d\n", channel_count(chosen));
  std::printf("\n%-20s %6s %10s\n", "config", "K", "score");
  for (std::size_t j = 0; j < scores.size(); ++j)
    std::printf("%-20s %6d %10.4f%s\n", table.configs[j].label().c_str(), channel_count(table.configs[j]), scores[j],
                j == best ? "  *" : "");
  return 0;
}

int cmd_track(const Common& c, const std::string& sequence, const std::string& frames_dir, const std::string& box,
              const std::string& features, bool synthetic) {
  const auto catalog = load_catalog(c);
  SequenceSpec spec;
  spec.model = parse_model(c.model);
  spec.tracker = finish_tracker(c);
  spec.attributes = AttributeVector::parse(c.attrs);
  std::vector<Box> truth;
  if (synthetic) {
    auto seq = make_synthetic_sequence({});
    spec.frames = std::make_shared<MemoryFrameSource>(seq.frames);
    spec.initial = seq.truth.front();
    truth = seq.truth;
  } else if (!sequence.empty()) {
    const SequenceInfo info = load_sequence(sequence);
    for (const auto& w : info.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    spec.frames = std::make_shared<ImageDirFrameSource>(info.dir / "img");
    spec.initial = info.truth.front();
    if (c.attrs.empty()) spec.attributes = info.attributes;
    truth = info.truth;
  } else {
    if (frames_dir.empty() || box.empty()) throw std::invalid_argument("track needs --sequence, --synthetic or --frames with --box");
    spec.frames = std::make_shared<ImageDirFrameSource>(frames_dir);
    spec.initial = parse_box(box);
  }
  if (features != "builtin") {
    spec.features = FeatureKind::File;
    spec.feature_file = features;
  }

  const LayerConfig config = select_config(spec.model, spec.attributes, catalog);
  const auto boxes = run_sequence(spec, catalog);
  std::printf("config: %s  K: %d  frames: %zu\n", config.label().c_str(), channel_count(config), boxes.size());
  if (!truth.empty()) {
    const auto s = success_curve(boxes, truth);
    const auto p = precision_curve(boxes, truth);
    std::printf("success@0.5: %.4f  AUC: %.4f  precision@20: %.4f\n", s.at_half, s.auc, p.at_20);
  }
  const std::filesystem::path out = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
  write_file_atomic(out / "boxes.txt", boxes_text(boxes));
  std::printf("wrote %s\n", (out / "boxes.txt").string().c_str());
  return 0;
}

OpeOptions ope_options(const Common& c, const std::string& features) {
  OpeOptions o;
  o.model = parse_model(c.model);
  o.tracker = finish_tracker(c);
  o.jobs = c.jobs;
  if (features == "afdt")
    o.features = FeatureKind::File;
  else if (features != "builtin")
    throw std::invalid_argument("--features for evaluate/analyze is builtin or afdt");
  return o;
}

int cmd_evaluate(const Common& c, const std::string& dataset, const std::string& features) {
  const auto catalog = load_catalog(c);
  const OpeReport r = run_ope(dataset, ope_options(c, features), catalog);
  const std::filesystem::path out = c.out.empty() ? std::filesystem::path("ope_report") : std::filesystem::path(c.out);
  write_report(r, out);
  std::printf("sequences: %zu evaluated, %zu skipped\n", r.sequences.size(), r.skipped.size());
  std::printf("overall success@0.5: %.4f  AUC: %.4f  precision@20: %.4f\n", r.overall.success.at_half,
              r.overall.success.auc, r.overall.precision.at_20);
  for (const auto& a : r.attributes)
    if (a.sequences > 0)
      std::printf("  %-4s (%zu): AUC %.4f  precision@20 %.4f\n", a.name.c_str(), a.sequences, a.success.auc,
                  a.precision.at_20);
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int cmd_analyze(const Common& c, const std::string& dataset, const std::string& features) {
  const auto catalog = load_catalog(c);
  const DatasetListing listing = scan_dataset(dataset);
  for (const auto& s : listing.skipped)
    std::fprintf(stderr, "warning: sequence %s skipped: %s\n", s.name.c_str(), s.reason.c_str());
  const AnalysisTable t = analyze_configs(listing, ope_options(c, features), catalog);
  const std::filesystem::path out = c.out.empty() ? std::filesystem::path("analysis") : std::filesystem::path(c.out);
  write_analysis(t, out);
  std::fputs(analysis_csv(t, Metric::Success).c_str(), stdout);
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation-filter tracking with attribute-based layer selection"};
  app.require_subcommand(1);
  Common c;

  auto* select = app.add_subcommand("select", "Pick the layer configuration for an attribute vector");
  add_model_flags(select, c);
  select->add_option("--attrs", c.attrs, "Comma-separated attribute tags; empty means all-zero");

  std::string sequence, frames_dir, box, features = "builtin", dataset;
  bool synthetic = false;
  auto* track = app.add_subcommand("track", "Track one sequence and write per-frame boxes");
  add_model_flags(track, c);
  add_tracker_flags(track, c);
  track->add_option("--attrs", c.attrs, "Attribute tags (default: the sequence's attrs.txt)");
  track->add_option("--sequence", sequence, "OTB-style sequence directory");
  track->add_option("--frames", frames_dir, "Directory of frames (with --box)");
  track->add_option("--box", box, "Initial box x,y,w,h (1-based, as in groundtruth_rect.txt)");
  track->add_flag("--synthetic", synthetic, "Run on the built-in synthetic sequence");
  track->add_option("--features", features, "builtin or PATH.afdt")->capture_default_str();
  track->add_option("--out", c.out, "Output directory for boxes.txt");

  auto* evaluate = app.add_subcommand("evaluate", "One-pass evaluation over a dataset");
  add_model_flags(evaluate, c);
  add_tracker_flags(evaluate, c);
  evaluate->add_option("--dataset", dataset, "Dataset root (one sub-directory per sequence)")->required();
  evaluate->add_option("--features", features, "builtin, or afdt to read <seq>/<model>.afdt")->capture_default_str();
  evaluate->add_option("--out", c.out, "Report directory");
  evaluate->add_option("--jobs", c.jobs, "Sequences tracked in parallel (default: all cores)")->check(CLI::NonNegativeNumber);

  auto* analyze = app.add_subcommand("analyze", "Evaluate every configuration of a model (dictionary-shaped tables)");
  add_model_flags(analyze, c);
  add_tracker_flags(analyze, c);
  analyze->add_option("--dataset", dataset, "Dataset root")->required();
  analyze->add_option("--features", features, "builtin or afdt")->capture_default_str();
  analyze->add_option("--out", c.out, "Output directory");
  analyze->add_option("--jobs", c.jobs, "Sequences tracked in parallel")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*select) return cmd_select(c);
    if (*track) return cmd_track(c, sequence, frames_dir, box, features, synthetic);
    if (*evaluate) return cmd_evaluate(c, dataset, features);
    if (*analyze) return cmd_analyze(c, dataset, features);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
