#include <doctest.h>

#include "oracles.hpp"
#include "rabbi/error.hpp"
#include "rabbi/probing.hpp"

using namespace rabbi;
using namespace rabbi::probing;

namespace {

ProbingInstance example(int T = 2, int bh = 1, int bp = 2) {
  ProbingInstance x;
  x.rewards = {{2.0, 10.0}};
  x.sub_probs = {{0.5, 0.5}};
  x.arrival_probs = {1.0};
  x.horizon = T;
  x.hire_budget = bh;
  x.probe_budget = bp;
  return x;
}

}  // namespace

TEST_CASE("probing program examples") {
  const auto x = example();
  const Layout L = layout_of(x);
  const std::vector<double> zero{0.0};
  CHECK(probing_value(x, 1, 2, zero) == 0.0);

  const std::vector<double> z{2.0};
  const auto s = probing_lp(x, 1, 2, z);
  REQUIRE(s.optimal());
  CHECK(s.value == doctest::Approx(10.0));
  CHECK(s.primal[L.probe(0)] == doctest::Approx(2.0));
  CHECK(s.primal[L.sub_accept(0, 1)] == doctest::Approx(1.0));
  CHECK(oracle::vertex_enumeration(probing_program(x, 1, 2, z)) == doctest::Approx(10.0));

  const auto blind = probing_lp(x, 1, 0, z);
  CHECK(blind.value == doctest::Approx(6.0));
  CHECK(blind.primal[L.accept(0)] == doctest::Approx(1.0));
  CHECK(x.mean_reward(0) == doctest::Approx(6.0));
  CHECK(probing_value(x, -1, 0, z) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("probing program against vertex enumeration") {
  Stream rng(21);
  for (int i = 0; i < 60; ++i) {
    ProbingInstance x;
    const double lo = rng.uniform(0.0, 3.0);
    x.rewards = {{lo, lo + rng.uniform(0.5, 6.0)}};
    const double q = rng.uniform(0.1, 0.9);
    x.sub_probs = {{q, 1.0 - q}};
    x.arrival_probs = {1.0};
    x.horizon = 5;
    const bool costed = i % 2 == 1;
    x.variant = costed ? Variant::costed : Variant::budgeted;
    x.probe_cost = {rng.uniform(0.0, 1.5)};
    const int bh = static_cast<int>(rng.next_u64() % 4);
    const int bp = static_cast<int>(rng.next_u64() % 4);
    x.hire_budget = bh;
    x.probe_budget = bp;
    const std::vector<double> z{rng.uniform(0.0, 5.0)};
    CHECK(probing_value(x, bh, bp, z) ==
          doctest::Approx(oracle::vertex_enumeration(probing_program(x, bh, bp, z))));
  }
}

TEST_CASE("RABBI probing steps") {
  const auto x = example();
  const std::vector<double> mu{2.0};
  CHECK(probing_rabbi_step(x, {1, 2, Stage::none}, 2, mu, 0) == Action::probe);
  CHECK(probing_rabbi_step(x, {1, 1, Stage::probe}, 2, mu, 0, 1) == Action::accept);
  CHECK(probing_rabbi_step(x, {0, 0, Stage::none}, 2, mu, 0) == Action::reject);
  CHECK_THROWS_AS(probing_rabbi_step(x, {1, 1, Stage::probe}, 2, mu, 0), StructuralError);
}

TEST_CASE("probe needs a hire budget") {
  const auto x = example(2, 0, 2);
  const std::vector<double> mu{2.0};
  CHECK(probing_rabbi_step(x, {0, 2, Stage::none}, 2, mu, 0) == Action::reject);
}

TEST_CASE("offline relaxation at both stages") {
  const auto x = example();
  const std::vector<double> none{0.0};
  CHECK(probing_offline_relaxation(x, {1, 2, Stage::none}, none) == 0.0);
  const std::vector<double> z{2.0};
  CHECK(probing_offline_relaxation(x, {1, 2, Stage::none}, z) == doctest::Approx(10.0));

  // After probing and revealing the high reward, one arrival remains.
  const std::vector<double> rest{1.0};
  const double hire = 10.0 + probing_value(x, 0, 1, rest);
  const double pass = probing_value(x, 1, 1, rest);
  CHECK(probing_offline_relaxation(x, {1, 2, Stage::probe}, rest, 0, 1) ==
        doctest::Approx(std::max(hire, pass)));
  CHECK(probing_offline_relaxation(x, {1, 2, Stage::accept}, rest, 0) ==
        doctest::Approx(6.0 + probing_value(x, 0, 2, rest)));
  CHECK(probing_offline_relaxation(x, {1, 2, Stage::reject}, rest, 0) ==
        doctest::Approx(probing_value(x, 1, 2, rest)));
}

TEST_CASE("exclusion examples") {
  const auto x = example();
  const std::vector<double> z3{3.0};
  const auto all_reject = probing_lp(x, 0, 0, z3);
  CHECK_FALSE(probing_exclusion_check(x, 0, 0, z3, all_reject, 0));

  const std::vector<double> z0{0.0};
  CHECK(probing_exclusion_check(x, 1, 2, z0, probing_lp(x, 1, 2, z0), 0));

  const std::vector<double> z2{2.0};
  CHECK_FALSE(probing_exclusion_check(x, 1, 2, z2, probing_lp(x, 1, 2, z2), 0, 1));
}

TEST_CASE("episode bookkeeping") {
  ProbingInstance x;
  x.rewards = {{1.0, 6.0}, {2.0, 3.0}};
  x.sub_probs = {{0.6, 0.4}, {0.5, 0.5}};
  x.arrival_probs = {0.5, 0.5};
  x.horizon = 10;
  x.hire_budget = 3;
  x.probe_budget = 4;
  for (std::uint64_t s = 0; s < 40; ++s) {
    Stream rng(s);
    const auto tr = run_probing(x, rng, {true, true});
    REQUIRE(tr.steps.size() == 10);
    int hires = 0, probes = 0;
    double reward = 0.0;
    std::size_t info = 0, sat = 0, none = 0;
    for (const auto& st : tr.steps) {
      CHECK(st.budget == x.hire_budget - hires);
      CHECK(st.budget2 == x.probe_budget - probes);
      if (st.action == Action::probe) {
        ++probes;
        REQUIRE(st.sub_input >= 0);
        if (st.second_action == Action::accept) {
          ++hires;
          CHECK(st.reward == x.rewards[st.input][st.sub_input]);
        }
      } else if (st.action == Action::accept) {
        ++hires;
      }
      reward += st.reward;
      info += st.flags.evaluated && !st.flags.satisfying;
      sat += st.flags.satisfying;
      none += !st.flags.evaluated;
    }
    CHECK(hires <= x.hire_budget);
    CHECK(probes <= x.probe_budget);
    CHECK(tr.total_reward == doctest::Approx(reward));
    CHECK(info + sat + none == tr.steps.size());
  }
}

TEST_CASE("empty budgets and horizon") {
  auto x = example(3, 0, 0);
  Stream rng(1);
  const auto tr = run_probing(x, rng, {true, true});
  CHECK(tr.total_reward == 0.0);
  for (const auto& st : tr.steps) CHECK(st.action == Action::reject);
  x.horizon = 0;
  Stream rng2(1);
  CHECK(run_probing(x, rng2, {}).periods == 0);
}

TEST_CASE("two-step replay") {
  const auto x = example();
  for (std::uint64_t s = 0; s < 20; ++s) {
    Stream rng(s);
    const auto tr = run_probing(x, rng, {true, false});
    REQUIRE(tr.steps.size() == 2);
    // Period 1: the program at z = 2 probes. The high reward is hired; after a
    // low reveal the last period is worth a blind hire at mean 6 > 2.
    const auto& a = tr.steps[0];
    CHECK(a.action == Action::probe);
    CHECK(a.second_action == (a.sub_input == 1 ? Action::accept : Action::reject));
    const auto& b = tr.steps[1];
    if (a.sub_input == 1) {
      CHECK(b.action == Action::reject);
      CHECK(tr.total_reward == 10.0);
    } else {
      CHECK(b.action == Action::accept);
      CHECK((tr.total_reward == 2.0 || tr.total_reward == 10.0));
    }
  }
}
