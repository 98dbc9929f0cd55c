#include "adtrack/ope.hpp"

#include <omp.h>

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "adtrack/atomic_file.hpp"
#include "csv.hpp"

namespace adtrack {

std::filesystem::path sequence_feature_file(const SequenceInfo& seq, ModelId model) {
  return seq.dir / (std::string(model_key(model)) + ".afdt");
}

SequenceResult evaluate_boxes(const std::string& name, const AttributeVector& z, std::vector<Box> boxes,
                              std::span<const Box> truth) {
  SequenceResult r;
  r.name = name;
  r.attributes = z;
  r.count_mismatch = boxes.size() != truth.size();
  r.evaluated_frames = std::min(boxes.size(), truth.size());
  r.success = success_curve(boxes, truth);
  r.precision = precision_curve(boxes, truth);
  r.boxes = std::move(boxes);
  return r;
}

AggregateResult aggregate(const std::string& name, const std::vector<const SequenceResult*>& members) {
  AggregateResult a;
  a.name = name;
  a.sequences = members.size();
  a.success.thresholds = success_thresholds();
  a.success.rates.assign(a.success.thresholds.size(), 0.0);
  a.precision.thresholds = precision_thresholds();
  a.precision.rates.assign(a.precision.thresholds.size(), 0.0);
  if (members.empty()) return a;
  const double n = static_cast<double>(members.size());
  for (const auto* m : members) {
    for (std::size_t i = 0; i < a.success.rates.size(); ++i) a.success.rates[i] += m->success.rates[i];
    for (std::size_t i = 0; i < a.precision.rates.size(); ++i) a.precision.rates[i] += m->precision.rates[i];
  }
  for (auto& v : a.success.rates) v /= n;
  for (auto& v : a.precision.rates) v /= n;
  double sum = 0.0;
  for (double v : a.success.rates) sum += v;
  a.success.auc = sum / static_cast<double>(a.success.rates.size());
  a.success.at_half = a.success.rates[10];
  a.precision.at_20 = a.precision.rates[20];
  return a;
}

OpeReport run_ope(const DatasetListing& dataset, const OpeOptions& options, const DictionaryCatalog& catalog) {
  options.tracker.validate();
  OpeReport report;
  report.model = std::string(model_key(options.model));
  report.solver = std::string(solver_key(options.tracker.solver));
  report.skipped = dataset.skipped;

  const auto& seqs = dataset.sequences;
  const auto n = static_cast<std::ptrdiff_t>(seqs.size());
  std::vector<std::optional<SequenceResult>> slots(seqs.size());
  std::vector<std::string> failures(seqs.size());
  const int jobs = options.jobs > 0 ? options.jobs : omp_get_num_procs();

#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const SequenceInfo& s = seqs[i];
    try {
      SequenceSpec spec;
      spec.frames = std::make_shared<ImageDirFrameSource>(s.dir / "img");
      spec.initial = s.truth.front();
      spec.attributes = s.attributes;
      spec.model = options.model;
      spec.features = options.features;
      spec.feature_file = sequence_feature_file(s, options.model);
      spec.tracker = options.tracker;
      spec.config_override = options.config_override;
      const LayerConfig config = spec.config_override ? *spec.config_override
                                                      : select_config(spec.model, spec.attributes, catalog);
      spec.config_override = config;
      SequenceResult r = evaluate_boxes(s.name, s.attributes, run_sequence(spec, catalog), s.truth);
      r.config = config.label();
      r.channels = options.features == FeatureKind::File ? channel_count(config)
                                                         : 1 + options.tracker.n_orientations;
      r.warnings = s.warnings;
      slots[i] = std::move(r);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }

  // deterministic fold in name order
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (slots[i]) {
      report.sequences.push_back(std::move(*slots[i]));
    } else {
      std::fprintf(stderr, "warning: sequence %s skipped: %s\n", seqs[i].name.c_str(), failures[i].c_str());
      report.skipped.push_back({seqs[i].name, failures[i]});
    }
  }

  std::vector<const SequenceResult*> all;
  for (const auto& r : report.sequences) all.push_back(&r);
  report.overall = aggregate("overall", all);
  for (std::size_t a = 0; a < kAttributeCount; ++a) {
    std::vector<const SequenceResult*> members;
    for (const auto& r : report.sequences)
      if (r.attributes[a]) members.push_back(&r);
    report.attributes.push_back(aggregate(std::string(kAttributeTags[a]), members));
  }
  return report;
}

OpeReport run_ope(const std::filesystem::path& root, const OpeOptions& options, const DictionaryCatalog& catalog) {
  const DatasetListing listing = scan_dataset(root);
  for (const auto& s : listing.skipped)
    std::fprintf(stderr, "warning: sequence %s skipped: %s\n", s.name.c_str(), s.reason.c_str());
  return run_ope(listing, options, catalog);
}

namespace {

nlohmann::json curve_json(const SuccessCurve& c) {
  return {{"thresholds", c.thresholds}, {"rates", c.rates}, {"auc", c.auc}, {"success_at_0.5", c.at_half}};
}

nlohmann::json curve_json(const PrecisionCurve& c) {
  return {{"thresholds", c.thresholds}, {"rates", c.rates}, {"precision_at_20", c.at_20}};
}

nlohmann::json aggregate_json(const AggregateResult& a) {
  return {{"name", a.name}, {"sequences", a.sequences}, {"success", curve_json(a.success)},
          {"precision", curve_json(a.precision)}};
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

template <typename Curve>
std::string curves_csv(const OpeReport& report, const Curve AggregateResult::*agg, const Curve SequenceResult::*seq) {
  std::ostringstream out;
  out << "threshold," << detail::quote_csv("overall");
  std::vector<const Curve*> cols{&(report.overall.*agg)};
  for (const auto& a : report.attributes) {
    if (a.sequences == 0) continue;
    out << ',' << detail::quote_csv(a.name);
    cols.push_back(&(a.*agg));
  }
  for (const auto& s : report.sequences) {
    out << ',' << detail::quote_csv(s.name);
    cols.push_back(&(s.*seq));
  }
  out << '\n';
  const auto& thresholds = (report.overall.*agg).thresholds;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    out << fmt(thresholds[i]);
    for (const auto* c : cols) out << ',' << fmt(c->rates[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string report_json(const OpeReport& report) {
  nlohmann::json j;
  j["model"] = report.model;
  j["solver"] = report.solver;
  j["overall"] = aggregate_json(report.overall);
  j["attributes"] = nlohmann::json::array();
  for (const auto& a : report.attributes) j["attributes"].push_back(aggregate_json(a));
  j["sequences"] = nlohmann::json::array();
  for (const auto& s : report.sequences) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : s.boxes) boxes.push_back({b.x, b.y, b.w, b.h});
    j["sequences"].push_back({{"name", s.name},
                              {"attributes", s.attributes.to_string()},
                              {"config", s.config},
                              {"channels", s.channels},
                              {"frames", s.boxes.size()},
                              {"evaluated_frames", s.evaluated_frames},
                              {"count_mismatch", s.count_mismatch},
                              {"warnings", s.warnings},
                              {"success", curve_json(s.success)},
                              {"precision", curve_json(s.precision)},
                              {"boxes", boxes}});
  }
  j["skipped"] = nlohmann::json::array();
  for (const auto& s : report.skipped) j["skipped"].push_back({{"name", s.name}, {"reason", s.reason}});
  j["skipped_count"] = report.skipped.size();
  return j.dump(2) + "\n";
}

void write_report(const OpeReport& report, const std::filesystem::path& dir) {
  write_file_atomic(dir / "results.json", report_json(report));
  write_file_atomic(dir / "success.csv", curves_csv(report, &AggregateResult::success, &SequenceResult::success));
  write_file_atomic(dir / "precision.csv",
                    curves_csv(report, &AggregateResult::precision, &SequenceResult::precision));
}

AnalysisTable analyze_configs(const DatasetListing& dataset, const OpeOptions& options,
                              const DictionaryCatalog& catalog) {
  AnalysisTable t;
  t.model = options.model;
  t.configs = catalog.table(options.model, Metric::Precision).configs;
  t.precision.assign(kAttributeCount + 1, std::vector<std::optional<double>>(t.configs.size()));
  t.success = t.precision;
  for (std::size_t c = 0; c < t.configs.size(); ++c) {
    OpeOptions o = options;
    o.config_override = t.configs[c];
    const OpeReport r = run_ope(dataset, o, catalog);
    for (std::size_t a = 0; a < kAttributeCount; ++a) {
      if (r.attributes[a].sequences == 0) continue;
      t.precision[a][c] = r.attributes[a].precision.at_20;
      t.success[a][c] = r.attributes[a].success.auc;
    }
    if (r.overall.sequences > 0) {
      t.precision[kAttributeCount][c] = r.overall.precision.at_20;
      t.success[kAttributeCount][c] = r.overall.success.auc;
    }
  }
  return t;
}

std::string analysis_csv(const AnalysisTable& table, Metric metric) {
  const auto& values = metric == Metric::Precision ? table.precision : table.success;
  std::ostringstream out;
  out << "attribute";
  for (const auto& c : table.configs) out << ',' << detail::quote_csv(c.label());
  out << '\n';
  for (std::size_t a = 0; a <= kAttributeCount; ++a) {
    out << (a < kAttributeCount ? std::string(kAttributeTags[a]) : std::string("Overall"));
    for (const auto& v : values[a]) {
      out << ',';
      if (v) out << std::fixed << std::setprecision(3) << *v;
    }
    out << '\n';
  }
  return out.str();
}

void write_analysis(const AnalysisTable& table, const std::filesystem::path& dir) {
  const std::string stem = std::string(model_key(table.model));
  write_file_atomic(dir / (stem + "_precision.csv"), analysis_csv(table, Metric::Precision));
  write_file_atomic(dir / (stem + "_success.csv"), analysis_csv(table, Metric::Success));
}

}  // namespace adtrack
