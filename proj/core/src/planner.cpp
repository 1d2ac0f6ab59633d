#include "hrc/planner.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "hrc/error.hpp"

namespace hrc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kSearchLimit = 24;

// Remaining tasks re-indexed 0..n-1 in ascending id order.
struct Problem {
  std::vector<TaskId> ids;
  std::vector<Point> loc;
  std::vector<bool> joint;
  Point human_start;
  Point robot_start;
  double v = 1.0;
  std::optional<int> human_first;
  std::optional<int> robot_first;

  int index(TaskId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return -1;
    return static_cast<int>(it - ids.begin());
  }
  int size() const { return static_cast<int>(ids.size()); }
};

// Waiting agents cannot leave their joint task, so they are pinned to it.
// When two first-task constraints cannot hold together the weaker one is
// dropped: human wait, robot wait, human pin, robot pin, strongest first.
void resolve_firsts(const PlanQuery& q, Problem& p) {
  struct Candidate {
    Agent agent;
    TaskId id;
  };
  std::vector<Candidate> order;
  if (q.state.human_waiting_at) order.push_back({Agent::Human, *q.state.human_waiting_at});
  if (q.state.robot_waiting_at) order.push_back({Agent::Robot, *q.state.robot_waiting_at});
  if (q.pinned_human_first) order.push_back({Agent::Human, *q.pinned_human_first});
  if (q.pinned_robot_first) order.push_back({Agent::Robot, *q.pinned_robot_first});

  for (const Candidate& c : order) {
    const int idx = p.index(c.id);
    if (idx < 0) {
      throw Error(ErrorKind::InvalidInput,
                  "first-task constraint on task " + std::to_string(to_int(c.id)) + " which is not remaining");
    }
    std::optional<int>& mine = c.agent == Agent::Human ? p.human_first : p.robot_first;
    const std::optional<int>& other = c.agent == Agent::Human ? p.robot_first : p.human_first;
    if (mine) continue;
    if (other) {
      const bool same_one_agent = *other == idx && !p.joint[static_cast<std::size_t>(idx)];
      const bool split_joint = *other != idx && p.joint[static_cast<std::size_t>(idx)] &&
                               p.joint[static_cast<std::size_t>(*other)];
      if (same_one_agent || split_joint) continue;
    }
    mine = idx;
  }
}

Problem make_problem(const PlanQuery& q) {
  if (q.state.remaining.empty()) throw Error(ErrorKind::NoTasks, "nothing left to plan");
  Problem p;
  p.human_start = q.state.human_pos;
  p.robot_start = q.state.robot_pos;
  p.v = q.layout.velocity;
  for (TaskId id : q.state.remaining) {
    const Task& t = q.layout.task(id);
    p.ids.push_back(id);
    p.loc.push_back(t.location);
    p.joint.push_back(t.kind == TaskKind::Joint);
  }
  resolve_firsts(q, p);
  return p;
}

// The one schedule simulation. Search, enumeration and schedule_makespan all
// reduce to this arithmetic: t + distance / velocity per leg and a max at
// every rendezvous.
double simulate(const Problem& p, const std::vector<int>& hs, const std::vector<int>& rs,
                std::vector<double>* completion) {
  std::size_t ih = 0;
  std::size_t ir = 0;
  double th = 0.0;
  double tr = 0.0;
  Point hp = p.human_start;
  Point rp = p.robot_start;
  double makespan = 0.0;
  auto record = [&](int i, double t) {
    if (completion) (*completion)[static_cast<std::size_t>(i)] = t;
    makespan = std::max(makespan, t);
  };
  auto run_block = [&](const std::vector<int>& seq, std::size_t& k, double& t, Point& pos) {
    while (k < seq.size() && !p.joint[static_cast<std::size_t>(seq[k])]) {
      const Point to = p.loc[static_cast<std::size_t>(seq[k])];
      t = t + distance(pos, to) / p.v;
      pos = to;
      record(seq[k], t);
      ++k;
    }
  };
  for (;;) {
    run_block(hs, ih, th, hp);
    run_block(rs, ir, tr, rp);
    const bool h_done = ih == hs.size();
    const bool r_done = ir == rs.size();
    if (h_done && r_done) break;
    if (h_done || r_done || hs[ih] != rs[ir]) {
      throw Error(ErrorKind::MalformedSequence, "joint tasks are not visited in the same order by both agents");
    }
    const Point j = p.loc[static_cast<std::size_t>(hs[ih])];
    const double ah = th + distance(hp, j) / p.v;
    const double ar = tr + distance(rp, j) / p.v;
    const double c = std::max(ah, ar);
    th = tr = c;
    hp = rp = j;
    record(hs[ih], c);
    ++ih;
    ++ir;
  }
  return makespan;
}

JointPlan to_plan(const Problem& p, const std::vector<int>& hs, const std::vector<int>& rs) {
  std::vector<double> completion(p.ids.size(), 0.0);
  JointPlan plan;
  plan.makespan = simulate(p, hs, rs, &completion);
  for (int i : hs) plan.human_seq.push_back(p.ids[static_cast<std::size_t>(i)]);
  for (int i : rs) plan.robot_seq.push_back(p.ids[static_cast<std::size_t>(i)]);
  for (std::size_t i = 0; i < p.ids.size(); ++i) plan.completion_times[p.ids[i]] = completion[i];
  return plan;
}

class Search {
 public:
  Search(const Problem& p, const SolveOptions& options) : p_(p), options_(options) {
    const auto n = static_cast<std::size_t>(p.size());
    d_.assign(n, std::vector<double>(n, 0.0));
    dh_.resize(n);
    dr_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      dh_[i] = distance(p.human_start, p.loc[i]);
      dr_[i] = distance(p.robot_start, p.loc[i]);
      for (std::size_t j = 0; j < n; ++j) d_[i][j] = distance(p.loc[i], p.loc[j]);
    }
  }

  void run() {
    Node root;
    for (int i = 0; i < p_.size(); ++i) {
      if (p_.joint[static_cast<std::size_t>(i)]) {
        root.joint_mask |= 1u << i;
      } else {
        root.one_mask |= 1u << i;
      }
    }
    human_block(root);
  }

  bool found() const { return best_ < kInf; }
  const std::vector<int>& best_human() const { return best_hs_; }
  const std::vector<int>& best_robot() const { return best_rs_; }
  double best() const { return best_; }

 private:
  static constexpr int kEnd = -1;
  static constexpr int kStart = -1;

  struct Node {
    int hloc = kStart;
    double th = 0.0;
    int rloc = kStart;
    double tr = 0.0;
    std::uint32_t one_mask = 0;
    std::uint32_t joint_mask = 0;
    double done = 0.0;  // latest completion so far
  };

  double hleg(int from, int to) const {
    return (from == kStart ? dh_[static_cast<std::size_t>(to)]
                           : d_[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)]) / p_.v;
  }
  double rleg(int from, int to) const {
    return (from == kStart ? dr_[static_cast<std::size_t>(to)]
                           : d_[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)]) / p_.v;
  }
  bool is_joint(int i) const { return p_.joint[static_cast<std::size_t>(i)]; }

  bool prune(double bound) const {
    return options_.prune && bound > best_ + 1e-9 * std::max(1.0, best_);
  }

  // Earliest conceivable completion of every open task; straight-line legs
  // from the agents' current commitments.
  double bound_human_block(const Node& s) const {
    double lb = s.done;
    for (int i = 0; i < p_.size(); ++i) {
      const std::uint32_t bit = 1u << i;
      if ((s.one_mask & bit) == 0 && (s.joint_mask & bit) == 0) continue;
      const double h = s.th + hleg(s.hloc, i);
      const double r = s.tr + rleg(s.rloc, i);
      lb = std::max(lb, is_joint(i) ? std::max(h, r) : std::min(h, r));
    }
    return lb;
  }

  double bound_robot_block(const Node& s, int target) const {
    double lb = s.done;
    if (target == kEnd) {
      for (int i = 0; i < p_.size(); ++i) {
        if (s.one_mask & (1u << i)) lb = std::max(lb, s.tr + rleg(s.rloc, i));
      }
      return lb;
    }
    const double human_at_target = s.th + hleg(s.hloc, target);
    for (int i = 0; i < p_.size(); ++i) {
      const std::uint32_t bit = 1u << i;
      if ((s.one_mask & bit) == 0 && (s.joint_mask & bit) == 0) continue;
      const double r = s.tr + rleg(s.rloc, i);
      const double h = i == target ? human_at_target
                                   : human_at_target +
                                         d_[static_cast<std::size_t>(target)][static_cast<std::size_t>(i)] / p_.v;
      lb = std::max(lb, is_joint(i) ? std::max(h, r) : std::min(h, r));
    }
    return lb;
  }

  void human_block(const Node& s) {
    if (prune(bound_human_block(s))) return;
    const bool pinned = hs_.empty() && p_.human_first.has_value();
    const bool meet_robot_first = rs_.empty() && p_.robot_first && is_joint(*p_.robot_first);

    if (!pinned && s.joint_mask == 0) robot_block(s, kEnd);

    for (int i = 0; i < p_.size(); ++i) {
      if (pinned && i != *p_.human_first) continue;
      const std::uint32_t bit = 1u << i;
      if (s.joint_mask & bit) {
        if (meet_robot_first && i != *p_.robot_first) continue;
        hs_.push_back(i);
        robot_block(s, i);
        hs_.pop_back();
      } else if (s.one_mask & bit) {
        if (rs_.empty() && p_.robot_first == i) continue;
        Node next = s;
        next.th = s.th + hleg(s.hloc, i);
        next.hloc = i;
        next.one_mask &= ~bit;
        next.done = std::max(s.done, next.th);
        hs_.push_back(i);
        human_block(next);
        hs_.pop_back();
      }
    }
  }

  void robot_block(const Node& s, int target) {
    if (prune(bound_robot_block(s, target))) return;
    const bool pinned = rs_.empty() && p_.robot_first.has_value();

    if (target == kEnd && s.one_mask == 0) {
      if (!pinned && s.done < best_) {
        best_ = s.done;
        best_hs_ = hs_;
        best_rs_ = rs_;
      }
      return;
    }

    for (int i = 0; i < p_.size(); ++i) {
      if (pinned && i != *p_.robot_first) continue;
      const std::uint32_t bit = 1u << i;
      if (i == target) {
        meet(s, target);
      } else if (s.one_mask & bit) {
        Node next = s;
        next.tr = s.tr + rleg(s.rloc, i);
        next.rloc = i;
        next.one_mask &= ~bit;
        next.done = std::max(s.done, next.tr);
        rs_.push_back(i);
        robot_block(next, target);
        rs_.pop_back();
      }
    }
  }

  void meet(const Node& s, int j) {
    const double ah = s.th + hleg(s.hloc, j);
    const double ar = s.tr + rleg(s.rloc, j);
    const double c = std::max(ah, ar);
    Node next;
    next.hloc = next.rloc = j;
    next.th = next.tr = c;
    next.one_mask = s.one_mask;
    next.joint_mask = s.joint_mask & ~(1u << j);
    next.done = std::max(s.done, c);

    if (options_.prune) {
      // Same open tasks, same meeting place, no later clock: the earlier
      // visit already covers every continuation from here.
      const std::uint64_t key = (static_cast<std::uint64_t>(next.one_mask | next.joint_mask) << 8) |
                                static_cast<std::uint64_t>(j);
      auto [it, inserted] = memo_.try_emplace(key, c);
      if (!inserted) {
        if (it->second <= c) return;
        it->second = c;
      }
    }
    rs_.push_back(j);
    human_block(next);
    rs_.pop_back();
  }

  const Problem& p_;
  SolveOptions options_;
  std::vector<std::vector<double>> d_;
  std::vector<double> dh_;
  std::vector<double> dr_;
  std::vector<int> hs_;
  std::vector<int> rs_;
  std::vector<int> best_hs_;
  std::vector<int> best_rs_;
  double best_ = kInf;
  std::unordered_map<std::uint64_t, double> memo_;
};

// All orderings of `own` one-agent tasks interleaved with `joints` in the
// given order.
void interleavings(const Problem& p, const std::vector<int>& own, const std::vector<int>& joints,
                   std::optional<int> first, std::vector<std::vector<int>>& out) {
  std::vector<int> seq;
  std::vector<bool> used(own.size(), false);
  std::size_t next_joint = 0;
  const std::size_t total = own.size() + joints.size();
  auto rec = [&](auto&& self) -> void {
    if (seq.size() == total) {
      out.push_back(seq);
      return;
    }
    const bool pinned = seq.empty() && first.has_value();
    for (std::size_t k = 0; k < own.size(); ++k) {
      if (used[k] || (pinned && own[k] != *first)) continue;
      used[k] = true;
      seq.push_back(own[k]);
      self(self);
      seq.pop_back();
      used[k] = false;
    }
    if (next_joint < joints.size() && !(pinned && joints[next_joint] != *first)) {
      seq.push_back(joints[next_joint++]);
      self(self);
      --next_joint;
      seq.pop_back();
    }
  };
  if (first && total == 0) return;
  rec(rec);
  (void)p;
}

template <class Visit>
void for_each_plan(const Problem& p, Visit&& visit) {
  std::vector<int> ones;
  std::vector<int> joints;
  for (int i = 0; i < p.size(); ++i) (p.joint[static_cast<std::size_t>(i)] ? joints : ones).push_back(i);
  std::sort(joints.begin(), joints.end());
  std::vector<std::vector<int>> hseqs;
  std::vector<std::vector<int>> rseqs;
  do {
    for (std::uint32_t mask = 0; mask < (1u << ones.size()); ++mask) {
      std::vector<int> mine;
      std::vector<int> theirs;
      for (std::size_t k = 0; k < ones.size(); ++k) ((mask >> k) & 1u ? mine : theirs).push_back(ones[k]);
      hseqs.clear();
      rseqs.clear();
      interleavings(p, mine, joints, p.human_first, hseqs);
      if (hseqs.empty()) continue;
      interleavings(p, theirs, joints, p.robot_first, rseqs);
      for (const auto& h : hseqs) {
        for (const auto& r : rseqs) visit(h, r);
      }
    }
  } while (std::next_permutation(joints.begin(), joints.end()));
}

}  // namespace

ScheduleResult schedule_makespan(const std::vector<TaskId>& human_seq,
                                 const std::vector<TaskId>& robot_seq, const TeamState& state,
                                 const Layout& layout) {
  TeamState bare = state;
  bare.human_waiting_at.reset();
  bare.robot_waiting_at.reset();
  const Problem p = make_problem({bare, layout});

  std::vector<int> hs;
  std::vector<int> rs;
  std::vector<int> seen_h(p.ids.size(), 0);
  std::vector<int> seen_r(p.ids.size(), 0);
  auto convert = [&](const std::vector<TaskId>& seq, std::vector<int>& out, std::vector<int>& seen) {
    for (TaskId id : seq) {
      const int i = p.index(id);
      if (i < 0) {
        throw Error(ErrorKind::MalformedSequence, "task " + std::to_string(to_int(id)) + " is not remaining");
      }
      if (++seen[static_cast<std::size_t>(i)] > 1) {
        throw Error(ErrorKind::MalformedSequence, "task " + std::to_string(to_int(id)) + " repeated");
      }
      out.push_back(i);
    }
  };
  convert(human_seq, hs, seen_h);
  convert(robot_seq, rs, seen_r);
  for (std::size_t i = 0; i < p.ids.size(); ++i) {
    const int visits = seen_h[i] + seen_r[i];
    const bool ok = p.joint[i] ? (seen_h[i] == 1 && seen_r[i] == 1) : visits == 1;
    if (!ok) {
      throw Error(ErrorKind::MalformedSequence,
                  "task " + std::to_string(to_int(p.ids[i])) + " not covered correctly");
    }
  }
  std::vector<double> completion(p.ids.size(), 0.0);
  ScheduleResult out;
  out.makespan = simulate(p, hs, rs, &completion);
  for (std::size_t i = 0; i < p.ids.size(); ++i) out.completion_times[p.ids[i]] = completion[i];
  return out;
}

JointPlan solve(const PlanQuery& query, const SolveOptions& options) {
  const Problem p = make_problem(query);
  if (p.ids.size() > kSearchLimit) throw Error(ErrorKind::TooLarge, "too many tasks for exact search");
  Search search(p, options);
  search.run();
  if (!search.found()) throw Error(ErrorKind::InvalidInput, "no feasible plan for the given constraints");
  JointPlan plan = to_plan(p, search.best_human(), search.best_robot());
  if (plan.makespan != search.best()) throw std::logic_error("search and schedule disagree");
  return plan;
}

std::vector<EnumeratedPlan> enumerate_all(const PlanQuery& query) {
  const Problem p = make_problem(query);
  if (p.ids.size() > kEnumerationLimit) throw Error(ErrorKind::TooLarge, "enumeration guard exceeded");
  std::vector<EnumeratedPlan> out;
  for_each_plan(p, [&](const std::vector<int>& h, const std::vector<int>& r) {
    JointPlan plan = to_plan(p, h, r);
    const double m = plan.makespan;
    out.push_back({std::move(plan), m});
  });
  return out;
}

std::vector<double> enumerate_makespans(const PlanQuery& query) {
  const Problem p = make_problem(query);
  if (p.ids.size() > kEnumerationLimit) throw Error(ErrorKind::TooLarge, "enumeration guard exceeded");
  std::vector<double> out;
  for_each_plan(p, [&](const std::vector<int>& h, const std::vector<int>& r) {
    out.push_back(simulate(p, h, r, nullptr));
  });
  return out;
}

int rank_of(double time, const std::vector<double>& all_times) {
  if (all_times.empty()) throw Error(ErrorKind::InvalidInput, "no times to rank against");
  std::vector<double> sorted = all_times;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct;
  for (double t : sorted) {
    if (distinct.empty() || t - distinct.back() > 1e-9) distinct.push_back(t);
  }
  int below = 0;
  for (double t : distinct) {
    if (t < time - 1e-9) ++below;
  }
  return std::min(below + 1, static_cast<int>(distinct.size()));
}

}  // namespace hrc
