#include "hrc/layout_gen.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "hrc/error.hpp"
#include "hrc/layout_io.hpp"
#include "hrc/parallel.hpp"
#include "hrc/planner.hpp"
#include "hrc/trial.hpp"

namespace hrc {

Layout random_layout(int n_one, int m_joint, std::uint64_t seed, Rect domain) {
  if (n_one < 0 || m_joint < 0 || n_one + m_joint < 1 ||
      n_one + m_joint > static_cast<int>(kEnumerationLimit)) {
    throw Error(ErrorKind::InvalidInput, "task counts must satisfy 1 <= n_one + m_joint <= 8");
  }
  Rng rng(seed);
  const auto total = static_cast<std::size_t>(n_one + m_joint + 2);
  std::vector<Point> placed;
  placed.reserve(total);
  int attempts = 0;
  while (placed.size() < total) {
    if (++attempts > kPackingAttempts) {
      throw Error(ErrorKind::PackingFailure, "could not place all points with the minimum separation");
    }
    const Point p{domain.x_min + uniform01(rng) * domain.width(), domain.y_min + uniform01(rng) * domain.height()};
    const bool clear = std::all_of(placed.begin(), placed.end(),
                                   [&](Point q) { return distance(p, q) >= kMinSeparation; });
    if (clear) placed.push_back(p);
  }

  Layout layout;
  std::ostringstream name;
  name << "random-" << std::hex << seed;
  layout.name = name.str();
  layout.domain = domain;
  layout.human_start = placed[0];
  layout.robot_start = placed[1];
  for (int i = 0; i < n_one + m_joint; ++i) {
    layout.tasks.push_back({task_id(i), placed[static_cast<std::size_t>(i) + 2],
                            i < n_one ? TaskKind::OneAgent : TaskKind::Joint});
  }
  layout.validate();
  return layout;
}

double expected_completion_time(const Layout& layout, PolicyKind policy, const HumanModelSpec& human,
                                int rollouts, std::uint64_t seed, const PolicyOptions& options) {
  if (rollouts < 1) throw Error(ErrorKind::InvalidInput, "rollouts must be positive");
  double sum = 0.0;
  for (int k = 0; k < rollouts; ++k) {
    TrialSetup setup{layout, policy, human, derive_seed(seed, static_cast<std::uint64_t>(k)), options, {}};
    sum += static_cast<double>(run_trial(setup).completion_time);
  }
  return sum / rollouts;
}

HumanModelSpec generation_human() {
  HumanModelSpec spec;
  spec.kind = HumanKind::BoltzmannChoice;
  spec.beta_choice = 1.05;
  return spec;
}

LayoutCandidate rank_ratio(const Layout& layout, const HumanModelSpec& human, int rollouts, std::uint64_t seed) {
  const TeamState start = initial_state(layout);
  const std::vector<double> makespans = enumerate_makespans({start, layout});
  LayoutCandidate c;
  c.layout = layout;
  c.seed = seed;
  c.expected_time_reactive = expected_completion_time(layout, PolicyKind::Reactive, human, rollouts, seed);
  c.expected_time_bayes = expected_completion_time(layout, PolicyKind::PredictiveBayes, human, rollouts, seed);
  c.rank_reactive = rank_of(c.expected_time_reactive, makespans);
  c.rank_bayes = rank_of(c.expected_time_bayes, makespans);
  c.ratio = static_cast<double>(c.rank_bayes) / c.rank_reactive;
  return c;
}

std::size_t GenerationResult::accepted_count() const {
  return static_cast<std::size_t>(
      std::count_if(candidates.begin(), candidates.end(), [](const LayoutCandidate& c) { return c.accepted(); }));
}

GenerationResult generate_layouts(const GenerationOptions& o) {
  if (o.count < 0 || o.min_tasks < 1 || o.max_tasks < o.min_tasks || o.min_joint < 0 ||
      o.max_joint < o.min_joint || o.max_joint > o.min_tasks) {
    throw Error(ErrorKind::InvalidInput, "inconsistent generation options");
  }
  GenerationResult result;
  result.candidates.resize(static_cast<std::size_t>(o.count));
  const HumanModelSpec human = generation_human();
  parallel_for(result.candidates.size(), o.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(o.seed, i);
    Rng shape(derive_seed(seed, 0));
    const int total = o.min_tasks + static_cast<int>(uniform01(shape) * (o.max_tasks - o.min_tasks + 1));
    const int joint = o.min_joint + static_cast<int>(uniform01(shape) * (o.max_joint - o.min_joint + 1));
    const Layout layout = random_layout(total - joint, joint, derive_seed(seed, 1));
    result.candidates[i] = rank_ratio(layout, human, o.rollouts, derive_seed(seed, 2));
    result.candidates[i].seed = seed;
  });
  return result;
}

void write_generation(const GenerationResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest) throw Error(ErrorKind::Io, "cannot write manifest in " + dir.string());
  manifest << "file,seed,n_one,m_joint,ratio,rank_reactive,rank_bayes,expected_time_reactive,"
              "expected_time_bayes\n";
  manifest << std::setprecision(17);
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const LayoutCandidate& c = result.candidates[i];
    if (!c.accepted()) continue;
    std::ostringstream file;
    file << "layout_" << std::setw(3) << std::setfill('0') << i << ".json";
    Layout named = c.layout;
    named.name = std::filesystem::path(file.str()).stem().string();
    save_layout(dir / file.str(), named);
    manifest << file.str() << ',' << c.seed << ',' << c.layout.one_agent_count() << ','
             << c.layout.joint_count() << ',' << c.ratio << ',' << c.rank_reactive << ',' << c.rank_bayes
             << ',' << c.expected_time_reactive << ',' << c.expected_time_bayes << '\n';
  }
  if (!manifest) throw Error(ErrorKind::Io, "write failed for manifest in " + dir.string());
}

}  // namespace hrc
