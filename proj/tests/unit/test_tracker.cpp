#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "adtrack/afdt.hpp"
#include "adtrack/metrics.hpp"
#include "adtrack/synthetic.hpp"
#include "adtrack/tracker.hpp"

using namespace adtrack;

namespace {

const DictionaryCatalog& catalog() {
  static const DictionaryCatalog c = load_dictionaries();
  return c;
}

SyntheticParams small_scene(int frames) {
  SyntheticParams p;
  p.rows = 120;
  p.cols = 160;
  p.frames = frames;
  p.target_size = 40.0;
  p.start_x = 50.0;
  p.start_y = 40.0;
  p.vx = 0.0;
  p.vy = 0.0;
  return p;
}

SequenceSpec spec_for(const SyntheticSequence& seq, SolverKind solver) {
  SequenceSpec s;
  s.frames = std::make_shared<MemoryFrameSource>(seq.frames);
  s.initial = seq.truth[0];
  s.tracker.solver = solver;
  return s;
}

double max_centre_error(const std::vector<Box>& est, const std::vector<Box>& gt) {
  double m = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) m = std::max(m, center_error(est[i], gt[i]));
  return m;
}

}  // namespace

TEST_CASE("a one-frame sequence returns the initial box") {
  const auto seq = make_synthetic_sequence(small_scene(1));
  const auto boxes = run_sequence(spec_for(seq, SolverKind::Eco), catalog());
  REQUIRE(boxes.size() == 1);
  CHECK(boxes[0] == seq.truth[0]);
}

TEST_CASE("static target stays within half a pixel") {
  const auto seq = make_synthetic_sequence(small_scene(50));
  for (SolverKind solver : {SolverKind::Eco, SolverKind::Bacf}) {
    CAPTURE(solver_key(solver));
    const auto boxes = run_sequence(spec_for(seq, solver), catalog());
    REQUIRE(boxes.size() == 50);
    CHECK(max_centre_error(boxes, seq.truth) <= 0.5);
    for (const auto& b : boxes) CHECK(b.area() > 0.0);
  }
}

TEST_CASE("identical frames with a ridge regularizer do not drift") {
  auto p = small_scene(1);
  p.noise_sigma = 0.0;
  const auto one = make_synthetic_sequence(p);
  const std::vector<Image> frames(20, one.frames[0]);
  SequenceSpec s;
  s.frames = std::make_shared<MemoryFrameSource>(frames);
  s.initial = one.truth[0];
  s.tracker.reg_slope = 0.0;
  const auto boxes = run_sequence(s, catalog());
  for (const auto& b : boxes) {
    CHECK(std::abs(b.cx() - s.initial.cx()) <= 1e-6);
    CHECK(std::abs(b.cy() - s.initial.cy()) <= 1e-6);
  }
}

TEST_CASE("moving target is followed by both solvers") {
  auto p = small_scene(30);
  p.vx = 1.6;
  p.vy = 1.2;
  const auto seq = make_synthetic_sequence(p);
  for (SolverKind solver : {SolverKind::Eco, SolverKind::Bacf}) {
    CAPTURE(solver_key(solver));
    const auto boxes = run_sequence(spec_for(seq, solver), catalog());
    CHECK(max_centre_error(boxes, seq.truth) < 3.0);
    CHECK(success_curve(boxes, seq.truth).at_half == 1.0);
  }
}

TEST_CASE("a growing target grows the estimated box") {
  auto p = small_scene(40);
  p.zoom = 1.01;
  const auto seq = make_synthetic_sequence(p);
  const auto boxes = run_sequence(spec_for(seq, SolverKind::Eco), catalog());
  CHECK(boxes.back().w > 1.15 * boxes.front().w);
  CHECK(boxes.back().w / boxes.back().h == doctest::Approx(1.0));
}

TEST_CASE("tracking is deterministic") {
  auto p = small_scene(15);
  p.vx = 1.0;
  const auto seq = make_synthetic_sequence(p);
  for (SolverKind solver : {SolverKind::Eco, SolverKind::Bacf}) {
    const auto a = run_sequence(spec_for(seq, solver), catalog());
    const auto b = run_sequence(spec_for(seq, solver), catalog());
    CHECK(a == b);
  }
}

TEST_CASE("layer selection follows the attribute vector and stays fixed") {
  const auto seq = make_synthetic_sequence(small_scene(6));
  auto s = spec_for(seq, SolverKind::Eco);
  s.attributes = AttributeVector::parse("OCC");
  Tracker t = init_tracker(s, catalog(), seq.frames[0]);
  CHECK(t.state().config.label() == "D3");
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    t.step(seq.frames[i]);
    CHECK(t.state().config.label() == "D3");
  }

  s.attributes = AttributeVector{};
  const auto zero = init_tracker(s, catalog(), seq.frames[0]).state().config.label();
  s.attributes = AttributeVector::all_one();
  CHECK(init_tracker(s, catalog(), seq.frames[0]).state().config.label() == zero);
}

TEST_CASE("file-backed features give the filter channel_count(config) channels") {
  const auto seq = make_synthetic_sequence(small_scene(5));
  const auto cfg = LayerConfig::parse(ModelId::VggM, "D1");
  // 96 channels at 4 px per cell: scaled copies of the cell-averaged frame
  std::vector<FeatureFrame> frames;
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    const auto& img = seq.frames[f];
    FeatureLayer l{"D1", 30, 40, 96, {}};
    l.data.resize(30 * 40 * 96);
    for (int r = 0; r < 30; ++r)
      for (int c = 0; c < 40; ++c) {
        double m = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) m += img(4 * r + i, 4 * c + j);
        for (int k = 0; k < 96; ++k)
          l.data[(static_cast<std::size_t>(r) * 40 + c) * 96 + k] = static_cast<float>(m / 16.0 * (1 + k % 3));
      }
    frames.push_back({static_cast<std::uint32_t>(f), {std::move(l)}});
  }
  const auto file = std::filesystem::temp_directory_path() / "adtrack_tracker_vggm.afdt";
  write_feature_file(frames, file);

  auto s = spec_for(seq, SolverKind::Eco);
  s.model = ModelId::VggM;
  s.features = FeatureKind::File;
  s.feature_file = file;
  s.config_override = cfg;
  Tracker t = init_tracker(s, catalog(), seq.frames[0]);
  CHECK(t.state().model.channels() == 96);
  const auto boxes = run_sequence(s, catalog());
  CHECK(boxes.size() == 5);
  for (const auto& b : boxes) CHECK(std::isfinite(b.cx()));
  std::filesystem::remove(file);
}

TEST_CASE("invalid tracker settings are rejected by name") {
  TrackerConfig c;
  c.n_scales = 0;
  try {
    c.validate();
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("n_scales") != std::string::npos);
  }
  TrackerConfig ok;
  CHECK_NOTHROW(ok.validate());
}
