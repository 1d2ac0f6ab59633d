#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hrc/human.hpp"
#include "hrc/policies.hpp"
#include "hrc/world.hpp"

namespace hrc {

inline constexpr double kMinSeparation = 2.0;
inline constexpr int kPackingAttempts = 10000;

// Task positions and both starts drawn uniformly in the domain, pairwise at
// least kMinSeparation apart. Ids 0.. are the one-agent tasks, then the joint
// tasks. Throws Error(PackingFailure) after kPackingAttempts rejected draws.
Layout random_layout(int n_one, int m_joint, std::uint64_t seed, Rect domain = {});

// Mean completion time over `rollouts` closed-loop trials with derived seeds.
double expected_completion_time(const Layout& layout, PolicyKind policy, const HumanModelSpec& human,
                                int rollouts, std::uint64_t seed, const PolicyOptions& options = {});

// The simulated human used to score candidates.
HumanModelSpec generation_human();

inline constexpr double kRatioHigh = 1.5;
inline constexpr double kRatioLow = 0.6;
inline bool passes_ratio_filter(double ratio) { return ratio > kRatioHigh || ratio < kRatioLow; }

struct LayoutCandidate {
  Layout layout;
  std::uint64_t seed = 0;
  double expected_time_reactive = 0.0;
  double expected_time_bayes = 0.0;
  int rank_reactive = 1;
  int rank_bayes = 1;
  double ratio = 1.0;  // rank_bayes / rank_reactive

  bool accepted() const { return passes_ratio_filter(ratio); }
};

// Ranks the reactive and Bayesian robots' expected times among all plan
// makespans of the layout. Throws Error(TooLarge) beyond the enumeration limit.
LayoutCandidate rank_ratio(const Layout& layout, const HumanModelSpec& human, int rollouts, std::uint64_t seed);

struct GenerationOptions {
  int count = 104;
  std::uint64_t seed = 0;
  int rollouts = 200;
  int min_tasks = 5;
  int max_tasks = 6;
  int min_joint = 1;
  int max_joint = 2;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct GenerationResult {
  std::vector<LayoutCandidate> candidates;  // in candidate order
  std::size_t accepted_count() const;
};

// Candidate i uses derive_seed(seed, i) for its shape, positions and rollouts.
GenerationResult generate_layouts(const GenerationOptions& options);

// Writes accepted layouts as <dir>/layout_XXX.json plus <dir>/manifest.csv.
void write_generation(const GenerationResult& result, const std::filesystem::path& dir);

}  // namespace hrc
