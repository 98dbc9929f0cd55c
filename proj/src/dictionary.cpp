#include "adtrack/dictionary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"

namespace adtrack {

namespace {

// Depths and native resolutions of the D1..D5 taps at a 224x224 input.
constexpr std::array<LayerSpec, 3> kVggM = {{{1, 96, 109, 109}, {2, 256, 26, 26}, {3, 512, 13, 13}}};
constexpr std::array<LayerSpec, 5> kVgg16 = {
    {{1, 64, 224, 224}, {2, 128, 112, 112}, {3, 256, 56, 56}, {4, 512, 28, 28}, {5, 512, 14, 14}}};
constexpr std::array<LayerSpec, 5> kGoogLeNet = {
    {{1, 64, 112, 112}, {2, 192, 56, 56}, {3, 256, 28, 28}, {4, 528, 14, 14}, {5, 832, 7, 7}}};
constexpr std::array<LayerSpec, 5> kResNet50 = {
    {{1, 64, 112, 112}, {2, 256, 56, 56}, {3, 512, 28, 28}, {4, 1024, 14, 14}, {5, 2048, 7, 7}}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view model_key(ModelId m) {
  switch (m) {
    case ModelId::VggM: return "vggm";
    case ModelId::Vgg16: return "vgg16";
    case ModelId::GoogLeNet: return "googlenet";
    case ModelId::ResNet50: return "resnet50";
  }
  return "?";
}

std::string_view model_name(ModelId m) {
  switch (m) {
    case ModelId::VggM: return "VGG-M";
    case ModelId::Vgg16: return "VGG-16";
    case ModelId::GoogLeNet: return "GoogLeNet";
    case ModelId::ResNet50: return "ResNet-50";
  }
  return "?";
}

ModelId parse_model(std::string_view key) {
  for (ModelId m : kAllModels)
    if (model_key(m) == key || model_name(m) == key) return m;
  throw std::invalid_argument("unknown model '" + std::string(key) + "'");
}

std::string_view metric_key(Metric m) { return m == Metric::Precision ? "precision" : "success"; }

std::span<const LayerSpec> model_layers(ModelId model) {
  switch (model) {
    case ModelId::VggM: return kVggM;
    case ModelId::Vgg16: return kVgg16;
    case ModelId::GoogLeNet: return kGoogLeNet;
    case ModelId::ResNet50: return kResNet50;
  }
  return {};
}

const LayerSpec& layer_spec(ModelId model, int index) {
  for (const auto& l : model_layers(model))
    if (l.index == index) return l;
  throw std::out_of_range(std::string(model_name(model)) + " has no test output D" + std::to_string(index));
}

LayerConfig LayerConfig::parse(ModelId model, std::string_view label) {
  LayerConfig cfg;
  cfg.model = model;
  label = trim(label);
  while (!label.empty()) {
    const auto comma = label.find(',');
    const auto tok = trim(label.substr(0, comma));
    int idx = 0;
    if (tok.size() < 2 || tok[0] != 'D' ||
        std::from_chars(tok.data() + 1, tok.data() + tok.size(), idx).ptr != tok.data() + tok.size())
      throw std::invalid_argument("bad layer token '" + std::string(tok) + "'");
    layer_spec(model, idx);
    if (!cfg.layers.empty() && idx <= cfg.layers.back())
      throw std::invalid_argument("layers must be strictly increasing in '" + std::string(label) + "'");
    cfg.layers.push_back(idx);
    if (comma == std::string_view::npos) break;
    label.remove_prefix(comma + 1);
  }
  if (cfg.layers.empty()) throw std::invalid_argument("empty layer configuration");
  return cfg;
}

std::string LayerConfig::label() const {
  std::string out;
  for (int l : layers) {
    if (!out.empty()) out += ", ";
    out += 'D' + std::to_string(l);
  }
  return out;
}

int channel_count(const LayerConfig& config) {
  int k = 0;
  for (int l : config.layers) k += layer_spec(config.model, l).depth;
  return k;
}

std::size_t DictionaryTable::column(std::string_view label) const {
  const auto wanted = LayerConfig::parse(model, label);
  for (std::size_t j = 0; j < configs.size(); ++j)
    if (configs[j] == wanted) return j;
  throw std::out_of_range("no column '" + std::string(label) + "' in " + std::string(model_key(model)) + "_" +
                          std::string(metric_key(metric)));
}

DictionaryLoadError::DictionaryLoadError(std::string table, int line, int column, const std::string& what)
    : std::runtime_error(table + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      table_(std::move(table)),
      line_(line),
      column_(column) {}

const DictionaryTable& DictionaryCatalog::table(ModelId model, Metric metric) const {
  const auto it = tables_.find({model, metric});
  if (it == tables_.end())
    throw std::out_of_range("catalog has no " + std::string(metric_key(metric)) + " table for " +
                            std::string(model_name(model)));
  return it->second;
}

bool DictionaryCatalog::contains(ModelId model) const {
  return tables_.count({model, Metric::Precision}) && tables_.count({model, Metric::Success});
}

void DictionaryCatalog::insert(DictionaryTable table) {
  const auto key = std::make_pair(table.model, table.metric);
  tables_[key] = std::move(table);
}

std::filesystem::path default_dictionary_dir() { return std::filesystem::path(ADTRACK_DATA_DIR) / "dictionaries"; }

DictionaryTable load_dictionary_table(const std::filesystem::path& file, ModelId model, Metric metric) {
  const std::string name = file.filename().string();
  std::ifstream in(file);
  if (!in) throw DictionaryLoadError(name, 0, 0, "cannot open " + file.string());

  DictionaryTable t;
  t.model = model;
  t.metric = metric;

  std::string line;
  int line_no = 0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    try {
      cells = detail::split_csv_line(line);
    } catch (const std::invalid_argument& e) {
      throw DictionaryLoadError(name, line_no, 0, e.what());
    }
    if (t.configs.empty()) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        try {
          t.configs.push_back(LayerConfig::parse(model, cells[c]));
        } catch (const std::exception& e) {
          throw DictionaryLoadError(name, line_no, static_cast<int>(c + 1), e.what());
        }
        for (std::size_t p = 0; p + 1 < t.configs.size(); ++p)
          if (t.configs[p] == t.configs.back())
            throw DictionaryLoadError(name, line_no, static_cast<int>(c + 1), "duplicate config " + cells[c]);
      }
      continue;
    }
    if (row >= kAttributeCount)
      throw DictionaryLoadError(name, line_no, 0, "more than " + std::to_string(kAttributeCount) + " attribute rows");
    if (cells.size() != t.configs.size())
      throw DictionaryLoadError(name, line_no, static_cast<int>(cells.size()),
                                "row " + std::string(kAttributeTags[row]) + " has " + std::to_string(cells.size()) +
                                    " cells, header has " + std::to_string(t.configs.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto s = trim(cells[c]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw DictionaryLoadError(name, line_no, static_cast<int>(c + 1),
                                  "cell (" + std::string(kAttributeTags[row]) + ", " + t.configs[c].label() +
                                      ") is not a number: '" + std::string(s) + "'");
      if (!(v >= 0.0 && v <= 1.0))
        throw DictionaryLoadError(name, line_no, static_cast<int>(c + 1),
                                  "cell (" + std::string(kAttributeTags[row]) + ", " + t.configs[c].label() +
                                      ") outside [0,1]: " + std::string(s));
      t.values.push_back(v);
    }
    ++row;
  }
  if (t.configs.empty()) throw DictionaryLoadError(name, line_no, 0, "missing header row");
  if (row != kAttributeCount)
    throw DictionaryLoadError(name, line_no, 0,
                              "expected " + std::to_string(kAttributeCount) + " attribute rows, found " +
                                  std::to_string(row));
  return t;
}

DictionaryCatalog load_dictionaries(const std::filesystem::path& dir) {
  DictionaryCatalog catalog;
  for (ModelId m : kAllModels) {
    for (Metric metric : {Metric::Precision, Metric::Success}) {
      const auto file = dir / (std::string(model_key(m)) + "_" + std::string(metric_key(metric)) + ".csv");
      if (!std::filesystem::exists(file))
        throw DictionaryLoadError(file.filename().string(), 0, 0,
                                  "missing " + std::string(metric_key(metric)) + " table for " +
                                      std::string(model_name(m)));
      catalog.insert(load_dictionary_table(file, m, metric));
    }
    const auto& p = catalog.table(m, Metric::Precision);
    const auto& s = catalog.table(m, Metric::Success);
    if (p.configs != s.configs)
      throw DictionaryLoadError(std::string(model_key(m)) + "_success.csv", 1, 0,
                                "config columns differ from the precision table");
  }
  return catalog;
}

AttributeVector effective_attributes(const AttributeVector& z) {
  return z.all_zero() ? AttributeVector::all_one() : z;
}

std::vector<double> score_configs(const DictionaryTable& precision, const DictionaryTable& success,
                                  const AttributeVector& z) {
  if (precision.configs != success.configs)
    throw std::invalid_argument("precision and success tables have different configs");
  const auto ze = effective_attributes(z);
  std::vector<double> scores(precision.cols(), 0.0);
  for (std::size_t j = 0; j < scores.size(); ++j) {
    double p = 0.0, s = 0.0;
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
      if (!ze[i]) continue;
      p += precision.at(i, j);
      s += success.at(i, j);
    }
    scores[j] = 0.5 * (p + s);
  }
  return scores;
}

std::vector<double> score_configs(ModelId model, const AttributeVector& z, const DictionaryCatalog& catalog) {
  return score_configs(catalog.table(model, Metric::Precision), catalog.table(model, Metric::Success), z);
}

std::size_t select_index(std::span<const double> scores, std::span<const LayerConfig> configs) {
  if (scores.empty() || scores.size() != configs.size())
    throw std::invalid_argument("select_index: score/config size mismatch");
  const double best = *std::max_element(scores.begin(), scores.end());
  const double tol = 1e-9 * std::abs(best);
  std::size_t pick = scores.size();
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] < best - tol) continue;
    if (pick == scores.size()) {
      pick = j;
      continue;
    }
    const int kj = channel_count(configs[j]);
    const int kp = channel_count(configs[pick]);
    if (kj < kp || (kj == kp && configs[j].layers < configs[pick].layers)) pick = j;
  }
  return pick;
}

LayerConfig select_config(ModelId model, const AttributeVector& z, const DictionaryCatalog& catalog) {
  const auto& table = catalog.table(model, Metric::Precision);
  const auto scores = score_configs(model, z, catalog);
  return table.configs[select_index(scores, table.configs)];
}

}  // namespace adtrack
