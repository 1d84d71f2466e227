#include <gtest/gtest.h>

#include <algorithm>

#include "findplan/bench.hpp"
#include "findplan/error.hpp"
#include "findplan/estimator.hpp"
#include "findplan/stats.hpp"
#include "support.hpp"

using namespace findplan;

TEST(Estimator, LaplaceSmoothedCount) {
  Estimator est;
  for (int i = 0; i < 10; ++i) est.observe("mug", "countertop", "kitchen", i < 3);
  EXPECT_DOUBLE_EQ(est.p_found("mug", "countertop", "kitchen"), 1.0 / 3.0);
}

TEST(Estimator, UnseenTripleIsHalf) {
  Estimator est;
  est.observe("mug", "countertop", "kitchen", true);
  EXPECT_DOUBLE_EQ(est.p_found("mug", "bed", "bedroom"), 0.5);
  EXPECT_DOUBLE_EQ(est.p_found("spaceship", "hangar", "moon"), 0.5);
  EXPECT_DOUBLE_EQ(Estimator::uniform().p_found("mug", "countertop", "kitchen"), 0.5);
}

TEST(Estimator, AlphaControlsSmoothing) {
  Estimator est(2.0);
  for (int i = 0; i < 4; ++i) est.observe("mug", "sink", "kitchen", i == 0);
  EXPECT_DOUBLE_EQ(est.p_found("mug", "sink", "kitchen"), (1.0 + 2.0) / (4.0 + 4.0));
  EXPECT_THROW(Estimator(0.0), ValidationError);
}

TEST(Estimator, TrainCountsContainerInstances) {
  const auto w = fptest::corridor(
      {{"s1", "shelf", 0}, {"s2", "shelf", 2}, {"s3", "shelf", 4}, {"b1", "box", 6, "office"}},
      {{"mug_1", "mug", "s1"}, {"mug_2", "mug", "s1"}, {"pen_1", "pen", "s2"}});
  const std::vector<WorldModel> corpus{w};
  const auto est = Estimator::train(corpus);
  const auto& counts = est.counts();
  // two mugs in one shelf still count once for that shelf
  EXPECT_EQ(counts.at({"mug", "shelf", "kitchen"}), (Estimator::Count{1, 3}));
  EXPECT_EQ(counts.at({"pen", "shelf", "kitchen"}), (Estimator::Count{1, 3}));
  EXPECT_EQ(counts.at({"mug", "box", "office"}), (Estimator::Count{0, 1}));
  EXPECT_DOUBLE_EQ(est.p_found("mug", "box", "office"), 1.0 / 3.0);
}

TEST(Estimator, EmptyCorpusRejected) {
  EXPECT_THROW(Estimator::train(std::vector<WorldModel>{}), TrainingError);
}

TEST(Estimator, ConvergesToGeneratorFrequency) {
  WorldConfig cfg;
  cfg.containers_per_room = {2, 2};
  cfg.room_types = {{"kitchen", {"shelf", "box"}, {}}};
  cfg.required_rooms = {"kitchen"};
  cfg.objects = {{"mug", 1, {{"shelf", "kitchen", 3.0}, {"box", "kitchen", 1.0}}}};
  std::vector<WorldModel> corpus;
  for (std::size_t i = 0; i < 500; ++i) corpus.push_back(generate_world(training_seed(0, i), cfg));
  const auto est = Estimator::train(corpus);
  EXPECT_NEAR(est.p_found("mug", "shelf", "kitchen"), 0.75, 0.04);
  EXPECT_NEAR(est.p_found("mug", "box", "kitchen"), 0.25, 0.04);
}

TEST(Estimator, Monotone) {
  Estimator est;
  for (int i = 0; i < 5; ++i) est.observe("mug", "sink", "kitchen", i % 2 == 0);
  double p = est.p_found("mug", "sink", "kitchen");
  est.observe("mug", "sink", "kitchen", true);
  EXPECT_GE(est.p_found("mug", "sink", "kitchen"), p);
  p = est.p_found("mug", "sink", "kitchen");
  est.observe("mug", "sink", "kitchen", false);
  EXPECT_LE(est.p_found("mug", "sink", "kitchen"), p);
}

TEST(Estimator, OpenInterval) {
  Estimator est(1e-3);
  for (int i = 0; i < 1000; ++i) {
    est.observe("a", "c", "r", true);
    est.observe("b", "c", "r", false);
  }
  EXPECT_LT(est.p_found("a", "c", "r"), 1.0);
  EXPECT_GT(est.p_found("b", "c", "r"), 0.0);
}

TEST(EstimatorFile, RoundTrip) {
  std::vector<WorldModel> corpus;
  for (std::size_t i = 0; i < 5; ++i) corpus.push_back(generate_world(i, WorldConfig::household()));
  const auto est = Estimator::train(corpus, 0.5);
  EXPECT_EQ(Estimator::parse(est.serialize()), est);

  const auto dir = fptest::temp_dir("estimator_file");
  est.save(dir / "est.txt");
  EXPECT_EQ(Estimator::load(dir / "est.txt"), est);
}

TEST(EstimatorFile, TruncatedFileNamesLine) {
  Estimator est;
  est.observe("mug", "shelf", "kitchen", true);
  est.observe("pen", "shelf", "kitchen", false);
  const auto text = est.serialize();
  const auto cut = text.substr(0, text.rfind("end"));
  try {
    Estimator::parse(cut);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
}

TEST(EstimatorFile, PositivesAboveTotalRejected) {
  Estimator est;
  est.observe("mug", "shelf", "kitchen", true);
  auto text = est.serialize();
  const auto row = text.find("mug shelf kitchen 1 1");
  ASSERT_NE(row, std::string::npos);
  text.replace(row, 21, "mug shelf kitchen 4 2");
  EXPECT_THROW(Estimator::parse(text), ValidationError);
}

// Objects should turn up in the container the estimator ranks highest more
// often than in the one it ranks lowest.
TEST(Estimator, CalibratedOnHeldOutWorlds) {
  const auto cfg = WorldConfig::household();
  std::vector<WorldModel> corpus;
  for (std::size_t i = 0; i < 100; ++i) corpus.push_back(generate_world(training_seed(1, i), cfg));
  const auto est = Estimator::train(corpus);

  std::size_t top_hits = 0;
  std::size_t bottom_hits = 0;
  for (std::size_t t = 0; t < 50; ++t) {
    const auto w = generate_world(evaluation_seed(1, t), cfg);
    for (std::size_t o = 0; o < w.objects().size(); ++o) {
      const auto p = est.p_found_all(w, w.object(o).type_name);
      const auto top = std::max_element(p.begin(), p.end()) - p.begin();
      const auto bottom = std::min_element(p.begin(), p.end()) - p.begin();
      const auto truth = static_cast<std::ptrdiff_t>(w.true_container_of(o));
      top_hits += truth == top;
      bottom_hits += truth == bottom;
    }
  }
  EXPECT_GT(top_hits, bottom_hits);
  EXPECT_LT(sign_test_p(top_hits, top_hits + bottom_hits), 0.05);
}
