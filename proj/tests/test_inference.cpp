#include <gtest/gtest.h>

#include "hrc/error.hpp"
#include "hrc/inference.hpp"
#include "hrc/random.hpp"
#include "support.hpp"

using namespace hrc;
using hrc::testing::make_layout;
using hrc::testing::T;

namespace {

InferenceParams half_gamma() {
  InferenceParams p;
  p.gamma = 0.5;
  p.terminal_reward = 10.0;
  p.running_cost = 1.0;
  return p;
}

Belief belief_of(std::vector<int> ids, std::vector<double> probs) {
  Belief b;
  for (int id : ids) b.support.push_back(T(id));
  b.probs = std::move(probs);
  return b;
}

}  // namespace

TEST(ValueFunction, UnitDistance) { EXPECT_DOUBLE_EQ(value_function({0, 0}, {1, 0}, half_gamma()), 5.0); }

TEST(ValueFunction, DistanceTwo) { EXPECT_DOUBLE_EQ(value_function({0, 0}, {0, 2}, half_gamma()), 2.0); }

TEST(ValueFunction, LiteralAtZeroDistance) { EXPECT_DOUBLE_EQ(value_function({3, 3}, {3, 3}, half_gamma()), 11.0); }

TEST(Likelihood, ZeroBetaIsUniformOverFan) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 7, 3}});
  InferenceParams p;
  p.beta = 0.0;
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const double a = 2.0 * std::numbers::pi * uniform01(rng);
    const Point h{5, 5};
    const Point next{5 + std::cos(a), 5 + std::sin(a)};
    EXPECT_NEAR(likelihood(next, h, {uniform01(rng) * 20, uniform01(rng) * 20}, layout, p), 1.0 / 24.0, 1e-15);
  }
}

TEST(Likelihood, HighBetaStraightStepIsNearlyCertain) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 2, 0}});
  InferenceParams p;
  p.beta = 50.0;
  const double l = likelihood({1, 0}, {0, 0}, {2, 0}, layout, p);
  EXPECT_GE(l, 0.99);
  EXPECT_NEAR(l, hrc::testing::reference_likelihood({1, 0}, {0, 0}, {2, 0}, 1.0, p), 1e-12);
}

TEST(Likelihood, MirroredGoalsAreEquallyLikely) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 5, 3}});
  const InferenceParams p;
  EXPECT_NEAR(likelihood({1, 0}, {0, 0}, {5, 3}, layout, p), likelihood({1, 0}, {0, 0}, {5, -3}, layout, p), 1e-12);
}

TEST(Likelihood, MatchesDirectSoftmax) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 7, 3}});
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    InferenceParams p;
    p.beta = 3.0 * uniform01(rng);
    const Point h{20 * uniform01(rng), 20 * uniform01(rng)};
    const double a = 2.0 * std::numbers::pi * uniform01(rng);
    const double r = 0.2 + 0.8 * uniform01(rng);
    const Point next{h.x + r * std::cos(a), h.y + r * std::sin(a)};
    const Point g{20 * uniform01(rng), 20 * uniform01(rng)};
    EXPECT_NEAR(likelihood(next, h, g, layout, p), hrc::testing::reference_likelihood(next, h, g, 1.0, p), 1e-12);
  }
}

TEST(Likelihood, PartialStepUsesShorterFan) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 7, 3}});
  const InferenceParams p;
  const Point h{2, 2};
  const Point next = step_agent(h, {7, 3}, 0.4);
  EXPECT_NEAR(likelihood(next, h, {7, 3}, layout, p, 0.4),
              hrc::testing::reference_likelihood(next, h, {7, 3}, 0.4, p), 1e-12);
  EXPECT_GT(likelihood(next, h, {7, 3}, layout, p, 0.4), likelihood(next, h, {7, 3}, layout, p));
  try {
    likelihood(step_agent(h, {7, 3}, 0.5), h, {7, 3}, layout, p, 0.4);
    FAIL() << "expected StepTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
  }
}

TEST(Likelihood, StepLongerThanVelocitySignals) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 7, 3}});
  try {
    likelihood({1.5, 0}, {0, 0}, {7, 3}, layout, InferenceParams{});
    FAIL() << "expected StepTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
  }
}

TEST(Posterior, SymmetricGoalsStayBalanced) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 6, 3}, {1, 6, 9}});
  // Goals at (6,3) and (6,9); motion along y = 6 is their bisector.
  Belief b = reset_prior({T(0), T(1)});
  Point h{0, 6};
  for (int k = 0; k < 5; ++k) {
    const Point next{h.x + 1, 6};
    b = posterior_update(b, h, next, layout, InferenceParams{});
    h = next;
  }
  EXPECT_NEAR(b.probs[0], 0.5, 1e-9);
  EXPECT_NEAR(b.probs[1], 0.5, 1e-9);
}

TEST(Posterior, ZeroPriorIsAbsorbing) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 6, 3}, {1, 2, 9}});
  const Belief b = posterior_update(belief_of({0, 1}, {1.0, 0.0}), {3, 3}, {3.5, 3.7}, layout, InferenceParams{});
  EXPECT_EQ(b.probs[0], 1.0);
  EXPECT_EQ(b.probs[1], 0.0);
}

TEST(Posterior, StraightStepsPickTheirGoal) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{1, 10, 2}, {2, 10, 10}, {3, 2, 10}});
  const InferenceParams p;
  std::vector<Point> path{{2, 2}};
  const Point g{10, 10};
  for (int k = 0; k < 5; ++k) path.push_back(step_agent(path.back(), g, 1.0));
  Belief b = reset_prior({T(1), T(2), T(3)});
  for (std::size_t k = 0; k + 1 < path.size(); ++k) b = posterior_update(b, path[k], path[k + 1], layout, p);
  EXPECT_EQ(map_goal(b), T(2));
  const auto ref = hrc::testing::reference_posterior({1 / 3.0, 1 / 3.0, 1 / 3.0},
                                                     {{10, 2}, {10, 10}, {2, 10}}, path, 1.0, p);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(b.probs[i], ref[i], 1e-9);
}

TEST(Posterior, AllZeroPriorIsDegenerate) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 6, 3}, {1, 2, 9}});
  try {
    posterior_update(belief_of({0, 1}, {0.0, 0.0}), {3, 3}, {4, 3}, layout, InferenceParams{});
    FAIL() << "expected DegenerateBelief";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateBelief);
  }
}

TEST(Posterior, ExtremeBetaStaysNormalised) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 16, 3}, {1, 2, 19}});
  InferenceParams p;
  p.beta = 1e6;
  Belief b = reset_prior({T(0), T(1)});
  Point h{3, 3};
  for (int k = 0; k < 10; ++k) {
    const Point next = step_agent(h, {16, 3}, 1.0);
    b = posterior_update(b, h, next, layout, p);
    h = next;
  }
  EXPECT_NEAR(b.total(), 1.0, 1e-9);
  EXPECT_EQ(map_goal(b), T(0));
}

TEST(Prior, UniformOverRemaining) {
  const Belief b = reset_prior({T(1), T(2), T(3), T(4)});
  for (double p : b.probs) EXPECT_DOUBLE_EQ(p, 0.25);
  EXPECT_EQ(reset_prior({T(7)}).probs, std::vector<double>{1.0});
}

TEST(Prior, EmptySetSignals) {
  try {
    reset_prior({});
    FAIL() << "expected EmptySupport";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySupport);
  }
}

TEST(Map, PicksLargest) { EXPECT_EQ(map_goal(belief_of({4, 7, 9}, {0.2, 0.5, 0.3})), T(7)); }

TEST(Map, TiesGoToLowestId) { EXPECT_EQ(map_goal(belief_of({3, 8}, {0.5, 0.5})), T(3)); }

TEST(Restrict, DropsRemovedTasksAndRenormalises) {
  const Belief b = restrict_support(belief_of({1, 2, 3}, {0.5, 0.3, 0.2}), {T(2), T(3)});
  ASSERT_EQ(b.support, (std::vector<TaskId>{T(2), T(3)}));
  EXPECT_NEAR(b.probs[0], 0.6, 1e-12);
  EXPECT_NEAR(b.probs[1], 0.4, 1e-12);
}

TEST(Restrict, FallsBackToUniformWhenNoMassSurvives) {
  const Belief b = restrict_support(belief_of({1, 2}, {1.0, 0.0}), {T(2), T(5)});
  EXPECT_EQ(b.support, (std::vector<TaskId>{T(2), T(5)}));
  EXPECT_DOUBLE_EQ(b.probs[0], 0.5);
}

class InferenceProperties : public ::testing::Test {
 protected:
  struct Fixture {
    Layout layout;
    std::vector<Point> path;
  };

  // Random goals and a wandering path of sub-velocity steps.
  static Fixture fixture(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<hrc::testing::TaskSpec> tasks;
    const int n = 2 + static_cast<int>(uniform01(rng) * 5);
    for (int i = 0; i < n; ++i) tasks.push_back({i, 20 * uniform01(rng), 20 * uniform01(rng)});
    Fixture f{make_layout({0, 0}, {20, 20}, tasks), {}};
    Point h{20 * uniform01(rng), 20 * uniform01(rng)};
    f.path.push_back(h);
    const int steps = 1 + static_cast<int>(uniform01(rng) * 12);
    for (int k = 0; k < steps; ++k) {
      const double a = 2 * std::numbers::pi * uniform01(rng);
      const double r = uniform01(rng);
      h = {h.x + r * std::cos(a), h.y + r * std::sin(a)};
      f.path.push_back(h);
    }
    return f;
  }
};

TEST_F(InferenceProperties, SequentialEqualsBatch) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Fixture f = fixture(s);
    const InferenceParams p;
    TaskSet all;
    std::vector<Point> goals;
    for (const Task& t : f.layout.tasks) {
      all.insert(t.id);
      goals.push_back(t.location);
    }
    Belief b = reset_prior(all);
    for (std::size_t k = 0; k + 1 < f.path.size(); ++k) b = posterior_update(b, f.path[k], f.path[k + 1], f.layout, p);
    const std::vector<double> uniform(goals.size(), 1.0 / static_cast<double>(goals.size()));
    const auto ref = hrc::testing::reference_posterior(uniform, goals, f.path, 1.0, p);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(b.probs[i], ref[i], 1e-9) << "seed " << s;
    EXPECT_NEAR(b.total(), 1.0, 1e-9);
  }
}

TEST_F(InferenceProperties, ZeroBetaLeavesPriorUnchanged) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Fixture f = fixture(1000 + s);
    InferenceParams p;
    p.beta = 0.0;
    Belief prior;
    Rng rng(s);
    double total = 0.0;
    for (const Task& t : f.layout.tasks) {
      prior.support.push_back(t.id);
      prior.probs.push_back(0.1 + uniform01(rng));
      total += prior.probs.back();
    }
    for (double& v : prior.probs) v /= total;
    Belief b = prior;
    for (std::size_t k = 0; k + 1 < f.path.size(); ++k) b = posterior_update(b, f.path[k], f.path[k + 1], f.layout, p);
    for (std::size_t i = 0; i < b.probs.size(); ++i) EXPECT_NEAR(b.probs[i], prior.probs[i], 1e-12);
  }
}

TEST_F(InferenceProperties, StraightMotionAttractsMonotonically) {
  const Layout layout = make_layout({0, 0}, {19, 19}, {{0, 15, 4}, {1, 6, 15}});
  for (double beta : {0.3, 1.05, 4.0}) {
    InferenceParams p;
    p.beta = beta;
    Belief b = reset_prior({T(0), T(1)});
    Point h{2, 2};
    double last = b.probs[0];
    while (distance(h, {15, 4}) > 1.0) {
      const Point next = step_agent(h, {15, 4}, 1.0);
      b = posterior_update(b, h, next, layout, p);
      EXPECT_GE(b.probs[0], last - 1e-15);
      last = b.probs[0];
      h = next;
    }
  }
}

TEST_F(InferenceProperties, ConstantValueShiftChangesNothing) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Fixture f = fixture(2000 + s);
    const InferenceParams p;
    TaskSet all;
    for (const Task& t : f.layout.tasks) all.insert(t.id);
    Belief plain = reset_prior(all);
    Belief shifted = plain;
    auto base = [&](Point x, Point g) { return value_function(x, g, p); };
    auto plus = [&](Point x, Point g) { return value_function(x, g, p) + 7.5; };
    for (std::size_t k = 0; k + 1 < f.path.size(); ++k) {
      plain = posterior_update_with(plain, f.path[k], f.path[k + 1], f.layout, p, base);
      shifted = posterior_update_with(shifted, f.path[k], f.path[k + 1], f.layout, p, plus);
    }
    for (std::size_t i = 0; i < plain.probs.size(); ++i) EXPECT_NEAR(plain.probs[i], shifted.probs[i], 1e-9);
    EXPECT_EQ(map_goal(plain), map_goal(shifted));
  }
}
