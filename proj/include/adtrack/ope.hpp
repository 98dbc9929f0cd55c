#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adtrack/dataset.hpp"
#include "adtrack/dictionary.hpp"
#include "adtrack/metrics.hpp"
#include "adtrack/tracker.hpp"

namespace adtrack {

struct OpeOptions {
  ModelId model = ModelId::ResNet50;
  FeatureKind features = FeatureKind::Builtin;
  TrackerConfig tracker;
  int jobs = 0;  // 0: all available cores
  std::optional<LayerConfig> config_override;
};

/// With file-backed features each sequence reads `<seq>/<model key>.afdt`.
std::filesystem::path sequence_feature_file(const SequenceInfo& seq, ModelId model);

struct SequenceResult {
  std::string name;
  AttributeVector attributes;
  std::string config;  // selected layer configuration label
  int channels = 0;
  std::vector<Box> boxes;
  std::size_t evaluated_frames = 0;
  bool count_mismatch = false;
  SuccessCurve success;
  PrecisionCurve precision;
  std::vector<std::string> warnings;
};

struct AggregateResult {
  std::string name;  // "overall" or an attribute tag
  std::size_t sequences = 0;
  SuccessCurve success;  // per-threshold mean of the member sequences' curves
  PrecisionCurve precision;
};

struct OpeReport {
  std::string model;
  std::string solver;
  std::vector<SequenceResult> sequences;  // sorted by name
  std::vector<SkippedSequence> skipped;   // malformed entries and tracker failures
  AggregateResult overall;
  std::vector<AggregateResult> attributes;  // one per canonical tag, possibly empty
};

SequenceResult evaluate_boxes(const std::string& name, const AttributeVector& z, std::vector<Box> boxes,
                              std::span<const Box> truth);

/// Mean of the member curves; sequences are folded in the given order.
AggregateResult aggregate(const std::string& name, const std::vector<const SequenceResult*>& members);

/// Runs one tracker per sequence from its first ground-truth box, in parallel, and aggregates.
OpeReport run_ope(const DatasetListing& dataset, const OpeOptions& options, const DictionaryCatalog& catalog);
OpeReport run_ope(const std::filesystem::path& root, const OpeOptions& options, const DictionaryCatalog& catalog);

/// Writes results.json, success.csv and precision.csv under `dir`, each atomically.
void write_report(const OpeReport& report, const std::filesystem::path& dir);
std::string report_json(const OpeReport& report);

/// Per-config analysis in the shape of the dictionary tables: rows are the 11 attributes plus
/// "Overall", columns are the model's configurations. Attributes without sequences stay empty.
struct AnalysisTable {
  ModelId model = ModelId::VggM;
  std::vector<LayerConfig> configs;
  std::vector<std::vector<std::optional<double>>> precision;  // [12][configs]
  std::vector<std::vector<std::optional<double>>> success;
};

AnalysisTable analyze_configs(const DatasetListing& dataset, const OpeOptions& options,
                              const DictionaryCatalog& catalog);
std::string analysis_csv(const AnalysisTable& table, Metric metric);
void write_analysis(const AnalysisTable& table, const std::filesystem::path& dir);

}  // namespace adtrack
