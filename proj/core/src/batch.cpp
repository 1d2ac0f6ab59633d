#include "hrc/batch.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "hrc/error.hpp"
#include "hrc/json_io.hpp"
#include "hrc/layout_io.hpp"
#include "hrc/parallel.hpp"

namespace hrc {

void BatchConfig::validate() const {
  if (layouts.empty()) throw Error(ErrorKind::InvalidInput, "batch needs at least one layout");
  if (policies.empty()) throw Error(ErrorKind::InvalidInput, "batch needs at least one policy");
  if (rollouts < 1) throw Error(ErrorKind::InvalidInput, "rollouts must be positive");
  for (const Layout& l : layouts) l.validate();
  human.validate();
  options.inference.validate();
  if (!(world.capture_radius >= 0.0)) throw Error(ErrorKind::InvalidInput, "capture radius must be non-negative");
}

BatchConfig parse_batch_config(const std::string& text, const std::filesystem::path& base_dir) {
  BatchConfig c;
  try {
    const json j = json::parse(text);
    for (const json& f : j.at("layouts")) {
      std::filesystem::path p = f.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      c.layouts.push_back(load_layout(p));
    }
    for (const json& p : j.at("policies")) c.policies.push_back(policy_kind_from_string(p.get<std::string>()));
    c.human = human_spec_from_json(j.at("human_model"));
    c.rollouts = j.at("rollouts").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) {
      std::filesystem::path out = j.at("output").get<std::string>();
      c.output = out.is_relative() ? base_dir / out : out;
    }
    if (j.contains("inference")) c.options.inference = inference_params_from_json(j.at("inference"));
    if (j.contains("confidence_gate")) c.options.confidence_gate = j.at("confidence_gate").get<double>();
    if (j.contains("capture_radius")) c.world.capture_radius = j.at("capture_radius").get<double>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    if (j.contains("write_traces")) c.write_traces = j.at("write_traces").get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed batch config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw Error(ErrorKind::InvalidInput, e.what());
    throw;
  }
  c.validate();
  return c;
}

BatchConfig load_batch_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open config " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_batch_config(buf.str(), file.parent_path());
}

std::uint64_t cell_seed(std::uint64_t master, std::size_t layout_index, int rollout) {
  return derive_seed(derive_seed(master, layout_index), static_cast<std::uint64_t>(rollout));
}

TrialRow make_row(const TrialRecord& r, std::size_t layout_index, int rollout) {
  TrialRow row;
  row.layout_index = layout_index;
  row.layout = r.setup.layout.name;
  row.policy = r.setup.policy;
  row.rollout = rollout;
  row.seed = r.setup.seed;
  row.completion_time = r.completion_time;
  row.optimal_makespan = r.optimal_makespan;
  row.robot_one_agent_count = r.robot_one_agent_count;
  row.simultaneous_count = r.simultaneous_count;
  row.inference_error_rate = r.inference_error_rate;
  row.replans = static_cast<int>(r.replans.size());
  row.max_belief_norm_error = r.max_belief_norm_error;
  return row;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRow>& rows, const std::vector<PolicyKind>& policies,
                                    std::uint64_t seed) {
  std::vector<AggregateRow> out;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    std::vector<double> times;
    std::vector<double> robot;
    std::vector<double> errors;
    for (const TrialRow& r : rows) {
      if (r.policy != policies[p]) continue;
      times.push_back(static_cast<double>(r.completion_time));
      robot.push_back(r.robot_one_agent_count);
      if (r.inference_error_rate) errors.push_back(*r.inference_error_rate);
    }
    if (times.empty()) continue;
    AggregateRow a;
    a.policy = policies[p];
    a.trials = times.size();
    a.completion_time = bootstrap_mean_ci(times, derive_seed(seed, 3 * p));
    a.robot_one_agent_count = bootstrap_mean_ci(robot, derive_seed(seed, 3 * p + 1));
    if (!errors.empty()) a.inference_error_rate = bootstrap_mean_ci(errors, derive_seed(seed, 3 * p + 2));
    out.push_back(a);
  }
  return out;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows) {
  out << "layout,policy,rollout,seed,completion_time,optimal_makespan,robot_one_agent_count,"
         "simultaneous_count,inference_error_rate,replans\n";
  out << std::setprecision(17);
  for (const TrialRow& r : rows) {
    out << r.layout << ',' << to_string(r.policy) << ',' << r.rollout << ',' << r.seed << ','
        << r.completion_time << ',' << r.optimal_makespan << ',' << r.robot_one_agent_count << ','
        << r.simultaneous_count << ',';
    if (r.inference_error_rate) out << *r.inference_error_rate;
    out << ',' << r.replans << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "policy,trials,completion_time_mean,completion_time_ci_low,completion_time_ci_high,"
         "robot_one_agent_count_mean,robot_one_agent_count_ci_low,robot_one_agent_count_ci_high,"
         "inference_error_rate_mean,inference_error_rate_ci_low,inference_error_rate_ci_high\n";
  out << std::setprecision(17);
  for (const AggregateRow& a : rows) {
    out << to_string(a.policy) << ',' << a.trials << ',' << a.completion_time.mean << ','
        << a.completion_time.low << ',' << a.completion_time.high << ',' << a.robot_one_agent_count.mean
        << ',' << a.robot_one_agent_count.low << ',' << a.robot_one_agent_count.high << ',';
    if (a.inference_error_rate) {
      out << a.inference_error_rate->mean << ',' << a.inference_error_rate->low << ','
          << a.inference_error_rate->high;
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

namespace {

template <class Writer>
void write_file(const std::filesystem::path& file, Writer&& writer) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + file.string());
}

}  // namespace

BatchResult run_batch(const BatchConfig& config) {
  config.validate();
  const std::filesystem::path marker = config.output / ".partial";
  const bool to_disk = !config.output.empty();
  if (to_disk) {
    std::error_code ec;
    std::filesystem::create_directories(config.output, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + config.output.string() + ": " + ec.message());
    if (config.write_traces) std::filesystem::create_directories(config.output / "traces", ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create traces directory: " + ec.message());
    write_file(marker, [](std::ostream& out) { out << "incomplete\n"; });
  }

  const std::size_t n_pol = config.policies.size();
  const auto n_roll = static_cast<std::size_t>(config.rollouts);
  BatchResult result;
  result.rows.resize(config.layouts.size() * n_pol * n_roll);
  parallel_for(result.rows.size(), config.threads, [&](std::size_t cell) {
    const std::size_t li = cell / (n_pol * n_roll);
    const std::size_t pi = (cell / n_roll) % n_pol;
    const int rollout = static_cast<int>(cell % n_roll);
    TrialSetup setup{config.layouts[li], config.policies[pi], config.human,
                     cell_seed(config.seed, li, rollout), config.options, config.world};
    const TrialRecord record = run_trial(setup);
    result.rows[cell] = make_row(record, li, rollout);
    if (to_disk && config.write_traces) {
      std::ostringstream name;
      name << setup.layout.name << '_' << to_string(setup.policy) << '_' << rollout << ".jsonl";
      save_trace(config.output / "traces" / name.str(), record);
    }
  });
  result.aggregates = aggregate(result.rows, config.policies, derive_seed(config.seed, 0xa99));

  if (to_disk) {
    write_file(config.output / "trials.csv", [&](std::ostream& out) { write_trials_csv(out, result.rows); });
    write_file(config.output / "aggregate.csv",
               [&](std::ostream& out) { write_aggregate_csv(out, result.aggregates); });
    std::filesystem::remove(marker);
  }
  return result;
}

}  // namespace hrc
