#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hrc/batch.hpp"
#include "hrc/error.hpp"
#include "hrc/layout_gen.hpp"
#include "hrc/layout_io.hpp"
#include "hrc/service/server.hpp"
#include "hrc/trial.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSimulationError = 3;

int simulate(const std::string& config_file, unsigned threads) {
  hrc::BatchConfig config;
  try {
    config = hrc::load_batch_config(config_file);
  } catch (const hrc::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (threads > 0) config.threads = threads;
  try {
    const hrc::BatchResult result = hrc::run_batch(config);
    std::cout << result.rows.size() << " trials\n";
    hrc::write_aggregate_csv(std::cout, result.aggregates);
  } catch (const std::exception& e) {
    std::cerr << "simulation error: " << e.what() << '\n';
    return kSimulationError;
  }
  return kOk;
}

int generate(int count, std::uint64_t seed, const std::string& out, int rollouts, unsigned threads) {
  hrc::GenerationOptions options;
  options.count = count;
  options.seed = seed;
  options.rollouts = rollouts;
  options.threads = threads;
  try {
    const hrc::GenerationResult result = hrc::generate_layouts(options);
    hrc::write_generation(result, out);
    std::cout << "accepted " << result.accepted_count() << " of " << result.candidates.size()
              << " candidates\n";
  } catch (const hrc::Error& e) {
    std::cerr << "generation error: " << e.what() << '\n';
    return e.kind() == hrc::ErrorKind::InvalidInput ? kConfigError : kSimulationError;
  }
  return kOk;
}

int replay_trace(const std::string& file) {
  std::string original;
  hrc::TrialRecord record;
  try {
    std::ifstream in(file);
    if (!in) throw hrc::Error(hrc::ErrorKind::Io, "cannot open " + file);
    std::stringstream buf;
    buf << in.rdbuf();
    original = buf.str();
    std::istringstream text(original);
    record = hrc::read_trace(text);
  } catch (const hrc::Error& e) {
    std::cerr << "trace error: " << e.what() << '\n';
    return kConfigError;
  }
  std::string again;
  try {
    again = hrc::trace_string(hrc::replay(record));
  } catch (const hrc::Error& e) {
    std::cerr << "simulation error: " << e.what() << '\n';
    return kSimulationError;
  }
  if (again == original) {
    std::cout << "replay identical: " << record.ticks.size() << " ticks, completion time "
              << record.completion_time << '\n';
    return kOk;
  }
  std::istringstream a(original);
  std::istringstream b(again);
  std::string la;
  std::string lb;
  int line = 1;
  while (std::getline(a, la) && std::getline(b, lb) && la == lb) ++line;
  std::cerr << "replay differs at line " << line << '\n';
  return kSimulationError;
}

std::vector<hrc::Layout> load_layout_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<hrc::Layout> layouts;
  for (const auto& f : files) layouts.push_back(hrc::load_layout(f));
  return layouts;
}

int serve(const std::string& address, unsigned short port, const std::string& layouts_dir,
          const std::string& records_dir, int blocks, int trials_per_policy, std::uint64_t seed) {
  auto session = std::make_shared<hrc::service::SessionConfig>();
  try {
    session->layouts = load_layout_dir(layouts_dir);
    session->blocks = blocks;
    session->trials_per_policy = trials_per_policy;
    session->record_dir = records_dir;
    session->validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    hrc::service::Server server({address, port, session, seed});
    std::cout << "listening on " << address << ':' << server.port() << " with " << session->layouts.size()
              << " layouts" << std::endl;
    server.run();
  } catch (const std::exception& e) {
    std::cerr << "server error: " << e.what() << '\n';
    return kSimulationError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human-robot collaborative task allocation testbed"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run a batch experiment");
  std::string config_file;
  unsigned threads = 0;
  sim->add_option("--config", config_file, "Batch configuration (JSON)")->required();
  sim->add_option("--threads", threads, "Worker threads (0: all cores)");

  auto* gen = app.add_subcommand("generate-layouts", "Generate and filter random layouts");
  int count = 104;
  std::uint64_t seed = 0;
  std::string out_dir;
  int rollouts = 200;
  gen->add_option("--count", count, "Number of candidates")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "Master seed")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_option("--rollouts", rollouts, "Rollouts per expected time")->check(CLI::PositiveNumber);
  gen->add_option("--threads", threads, "Worker threads (0: all cores)");

  auto* rep = app.add_subcommand("replay", "Re-simulate a trace and compare");
  std::string trace_file;
  rep->add_option("--trace", trace_file, "Trace file (JSONL)")->required();

  auto* srv = app.add_subcommand("serve", "Host live sessions over WebSocket");
  unsigned short port = 8080;
  std::string address = "0.0.0.0";
  std::string layouts_dir;
  std::string records_dir = "records";
  int blocks = 1;
  int trials_per_policy = 3;
  srv->add_option("--port", port, "TCP port")->required();
  srv->add_option("--layouts", layouts_dir, "Directory of layout files")->required()->check(CLI::ExistingDirectory);
  srv->add_option("--address", address, "Bind address");
  srv->add_option("--records", records_dir, "Directory for trial traces");
  srv->add_option("--blocks", blocks, "Blocks per session")->check(CLI::PositiveNumber);
  srv->add_option("--trials-per-policy", trials_per_policy, "Consecutive trials per robot in a block")
      ->check(CLI::PositiveNumber);
  srv->add_option("--seed", seed, "Session seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (*sim) return simulate(config_file, threads);
  if (*gen) return generate(count, seed, out_dir, rollouts, threads);
  if (*rep) return replay_trace(trace_file);
  return serve(address, port, layouts_dir, records_dir, blocks, trials_per_policy, seed);
}
