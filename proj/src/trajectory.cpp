#include "rabbi/trajectory.hpp"

namespace rabbi {

std::string to_string(Action a) {
  switch (a) {
    case Action::accept:
      return "accept";
    case Action::reject:
      return "reject";
    case Action::probe:
      return "probe";
    case Action::post:
      return "post";
    case Action::halt:
      return "halt";
  }
  return "unknown";
}

void Trajectory::record(const StepRecord& s, bool keep) {
  ++periods;
  total_reward += s.reward;
  if (s.flags.evaluated) {
    if (s.flags.satisfying)
      ++satisfying_count;
    else
      ++info_loss_count;
  } else {
    ++non_evaluable_count;
  }
  if (s.flags.excluded) ++bellman_loss_count;
  if (s.flags.explore) ++explore_count;
  if (s.flags.ranking_evaluated && !s.flags.ranking_ok) ++ranking_mismatch_count;
  if (keep) steps.push_back(s);
}

}  // namespace rabbi
