#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adtrack/attributes.hpp"

namespace adtrack {

enum class ModelId { VggM, Vgg16, GoogLeNet, ResNet50 };
enum class Metric { Precision, Success };

inline constexpr std::array<ModelId, 4> kAllModels = {ModelId::VggM, ModelId::Vgg16, ModelId::GoogLeNet,
                                                      ModelId::ResNet50};

/// CLI-style identifier: vggm, vgg16, googlenet, resnet50.
std::string_view model_key(ModelId m);
/// Display name: VGG-M, VGG-16, GoogLeNet, ResNet-50.
std::string_view model_name(ModelId m);
ModelId parse_model(std::string_view key);  // throws std::invalid_argument
std::string_view metric_key(Metric m);

/// One test output (D1..D5) of a pre-trained network.
struct LayerSpec {
  int index = 0;       // 1-based D index
  int depth = 0;       // channel count
  int native_rows = 0; // spatial size at a 224x224 input
  int native_cols = 0;
};

/// Test outputs available for `model`, ordered by D index.
std::span<const LayerSpec> model_layers(ModelId model);
/// Catalog entry for D`index`; throws std::out_of_range when the model has no such output.
const LayerSpec& layer_spec(ModelId model, int index);

/// An ordered subset of a model's test outputs.
struct LayerConfig {
  ModelId model = ModelId::VggM;
  std::vector<int> layers;  // strictly increasing D indices

  /// Parses "D1, D3" style labels; validates against the model catalog.
  static LayerConfig parse(ModelId model, std::string_view label);
  std::string label() const;

  bool operator==(const LayerConfig&) const = default;
};

/// K is the sum of catalog depths over the configuration's layers.
int channel_count(const LayerConfig& config);

/// Score matrix for one model and one metric: 11 attribute rows by N configuration columns.
struct DictionaryTable {
  ModelId model = ModelId::VggM;
  Metric metric = Metric::Precision;
  std::vector<LayerConfig> configs;
  std::vector<double> values;  // row-major, values[row * configs.size() + col]

  std::size_t rows() const { return kAttributeCount; }
  std::size_t cols() const { return configs.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
  double at(Attribute a, std::size_t col) const { return at(static_cast<std::size_t>(a), col); }
  /// Column index for a config label such as "D1, D3"; throws std::out_of_range.
  std::size_t column(std::string_view label) const;
};

class DictionaryLoadError : public std::runtime_error {
 public:
  DictionaryLoadError(std::string table, int line, int column, const std::string& what);
  const std::string& table() const { return table_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string table_;
  int line_;
  int column_;
};

/// Immutable set of precision and success dictionaries, one pair per model.
class DictionaryCatalog {
 public:
  const DictionaryTable& table(ModelId model, Metric metric) const;
  bool contains(ModelId model) const;
  void insert(DictionaryTable table);

 private:
  std::map<std::pair<ModelId, Metric>, DictionaryTable> tables_;
};

/// Directory shipped with the project that holds the eight dictionary files.
std::filesystem::path default_dictionary_dir();

/// Reads `<dir>/<model>_<metric>.csv` for all four models and both metrics.
/// Files are comma separated: line 1 holds the quoted config labels, lines 2-12 the
/// attribute rows in canonical order.
DictionaryCatalog load_dictionaries(const std::filesystem::path& dir = default_dictionary_dir());
DictionaryTable load_dictionary_table(const std::filesystem::path& file, ModelId model, Metric metric);

/// Substitutes the all-one vector for an all-zero one.
AttributeVector effective_attributes(const AttributeVector& z);

/// Selection score per configuration: (z^T P1 + z^T P2) / 2.
std::vector<double> score_configs(const DictionaryTable& precision, const DictionaryTable& success,
                                  const AttributeVector& z);
std::vector<double> score_configs(ModelId model, const AttributeVector& z, const DictionaryCatalog& catalog);

/// Arg-max with deterministic tie-breaking: fewer channels first, then the lexicographically
/// smaller layer list. Scores within a relative 1e-9 of the maximum count as tied.
std::size_t select_index(std::span<const double> scores, std::span<const LayerConfig> configs);
LayerConfig select_config(ModelId model, const AttributeVector& z, const DictionaryCatalog& catalog);

}  // namespace adtrack
