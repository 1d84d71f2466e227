#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "findplan/pddl/ground.hpp"
#include "findplan/pddl/parser.hpp"
#include "findplan/pddl/planner.hpp"
#include "findplan/rng.hpp"
#include "support.hpp"

using namespace findplan;
using namespace findplan::pddl;

namespace {

GroundTask load_task(const std::string& domain, const std::string& problem) {
  const auto d = parse_domain(fptest::read_fixture(domain));
  return ground(d, parse_problem(fptest::read_fixture(problem), d));
}

using State = std::set<std::size_t>;

bool satisfies(const State& s, const GroundTask& t) {
  for (auto f : t.goal) {
    if (!s.contains(f)) return false;
  }
  for (auto f : t.goal_neg) {
    if (s.contains(f)) return false;
  }
  return true;
}

// Uniform-cost search over the explicit state space.
std::optional<double> optimal_cost(const GroundTask& t) {
  if (t.goal_impossible) return std::nullopt;
  const State init(t.initial.begin(), t.initial.end());
  std::map<State, double> best{{init, 0.0}};
  using Entry = std::pair<double, State>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({0.0, init});
  while (!open.empty()) {
    auto [g, s] = open.top();
    open.pop();
    if (g > best[s]) continue;
    if (satisfies(s, t)) return g;
    for (const auto& a : t.actions) {
      bool ok = true;
      for (auto f : a.pre) ok = ok && s.contains(f);
      for (auto f : a.pre_neg) ok = ok && !s.contains(f);
      if (!ok) continue;
      State n = s;
      for (auto f : a.del) n.erase(f);
      for (auto f : a.add) n.insert(f);
      const double ng = g + a.cost;
      auto it = best.find(n);
      if (it == best.end() || ng < it->second) {
        best[n] = ng;
        open.push({ng, n});
      }
    }
  }
  return std::nullopt;
}

// Random logistics-style problem: rooms joined by random one-way corridors
// with integer lengths, items to carry between rooms.
std::string random_problem_domain() {
  return R"((define (domain haul)
  (:requirements :strips :typing :action-costs)
  (:types room item)
  (:predicates (rob-at ?r - room) (obj-at ?o - item ?r - room) (holding ?o - item)
               (hand-is-free) (link ?a ?b - room))
  (:functions (total-cost) (len ?a ?b - room))
  (:action move :parameters (?a ?b - room)
    :precondition (and (rob-at ?a) (link ?a ?b))
    :effect (and (not (rob-at ?a)) (rob-at ?b) (increase (total-cost) (len ?a ?b))))
  (:action pick :parameters (?o - item ?r - room)
    :precondition (and (rob-at ?r) (obj-at ?o ?r) (hand-is-free))
    :effect (and (holding ?o) (not (hand-is-free)) (not (obj-at ?o ?r)) (increase (total-cost) 2)))
  (:action place :parameters (?o - item ?r - room)
    :precondition (and (rob-at ?r) (holding ?o))
    :effect (and (obj-at ?o ?r) (hand-is-free) (not (holding ?o)) (increase (total-cost) 2)))))";
}

std::string random_problem(Rng& rng, int index) {
  const int rooms = rng.range(2, 4);
  const int items = rng.range(1, 3);
  std::string objects;
  for (int r = 0; r < rooms; ++r) objects += " r" + std::to_string(r);
  objects += " - room";
  for (int i = 0; i < items; ++i) objects += " i" + std::to_string(i);
  objects += " - item";
  std::string init = "(rob-at r0) (hand-is-free) (= (total-cost) 0)";
  for (int a = 0; a < rooms; ++a) {
    for (int b = 0; b < rooms; ++b) {
      if (a == b || !rng.bernoulli(0.6)) continue;
      init += " (link r" + std::to_string(a) + " r" + std::to_string(b) + ")";
      init += " (= (len r" + std::to_string(a) + " r" + std::to_string(b) + ") " + std::to_string(rng.range(1, 9)) + ")";
    }
  }
  std::string goal;
  for (int i = 0; i < items; ++i) {
    const auto item = " i" + std::to_string(i);
    init += " (obj-at" + item + " r" + std::to_string(rng.range(0, rooms - 1)) + ")";
    goal += " (obj-at" + item + " r" + std::to_string(rng.range(0, rooms - 1)) + ")";
  }
  return "(define (problem p" + std::to_string(index) + ") (:domain haul) (:objects" + objects + ") (:init " + init +
         ") (:goal (and" + goal + ")) (:metric minimize (total-cost)))";
}

}  // namespace

TEST(Plan, SatisfiedGoalGivesEmptyPlan) {
  const auto t = load_task("pddl/deliver_domain.pddl", "pddl/satisfied_problem.pddl");
  const auto r = plan(t);
  ASSERT_EQ(r.status, PlanStatus::Solved);
  EXPECT_TRUE(r.plan.actions.empty());
  EXPECT_EQ(r.plan.cost, 0.0);
  EXPECT_EQ(validate(r.plan, t), 0.0);
  EXPECT_EQ(format_plan(r.plan), "; cost = 0\n");
}

TEST(Plan, DeliverFixtureOptimal) {
  const auto t = load_task("pddl/deliver_domain.pddl", "pddl/deliver_problem.pddl");
  const auto r = plan(t);
  ASSERT_EQ(r.status, PlanStatus::Solved);
  EXPECT_EQ(r.plan.cost, *optimal_cost(t));
  EXPECT_EQ(r.plan.cost, 3.0);
  EXPECT_EQ(validate(r.plan, t), r.plan.cost);
}

TEST(Plan, FindFixture) {
  const auto t = load_task("pddl/find_domain.pddl", "pddl/find_problem.pddl");
  const auto r = plan(t);
  ASSERT_EQ(r.status, PlanStatus::Solved);
  EXPECT_EQ(r.plan.actions, (std::vector<std::string>{"(find mug kitchen table)"}));
  EXPECT_EQ(r.plan.cost, 17.0);
}

TEST(Plan, Unsolvable) {
  const auto t = load_task("pddl/deliver_domain.pddl", "pddl/unsolvable_problem.pddl");
  EXPECT_EQ(plan(t).status, PlanStatus::Unsolvable);
}

TEST(Plan, ExpansionLimitIsTimeout) {
  const auto t = load_task("pddl/deliver_domain.pddl", "pddl/deliver_problem.pddl");
  PlanOptions o;
  o.max_expansions = 1;
  EXPECT_EQ(plan(t, o).status, PlanStatus::Timeout);
}

TEST(Plan, Deterministic) {
  const auto t = load_task("pddl/deliver_domain.pddl", "pddl/deliver_problem.pddl");
  EXPECT_EQ(plan(t).plan, plan(t).plan);
}

TEST(Validate, SwappedStepsRejectedAtStep) {
  const auto t = load_task("pddl/deliver_domain.pddl", "pddl/deliver_problem.pddl");
  Plan p{{"(move kitchen office)", "(pick cup kitchen)", "(place cup office)"}, 3.0};
  try {
    validate(p, t);
    FAIL() << "expected PlanValidationError";
  } catch (const PlanValidationError& e) {
    EXPECT_EQ(e.step(), 1u);
  }
  Plan short_plan{{"(pick cup kitchen)"}, 1.0};
  try {
    validate(short_plan, t);
    FAIL() << "expected PlanValidationError";
  } catch (const PlanValidationError& e) {
    EXPECT_EQ(e.step(), 1u);
  }
  Plan unknown{{"(fly kitchen office)"}, 1.0};
  EXPECT_THROW(validate(unknown, t), PlanValidationError);
}

TEST(Plan, RandomTasksWithinWeightBound) {
  Rng rng(2024);
  const auto d = parse_domain(random_problem_domain());
  int solved = 0;
  for (int i = 0; i < 50; ++i) {
    const auto p = parse_problem(random_problem(rng, i), d);
    const auto t = ground(d, p);
    const auto best = optimal_cost(t);
    for (double w : {1.0, 2.0}) {
      PlanOptions o;
      o.weight = w;
      const auto r = plan(t, o);
      if (!best) {
        EXPECT_EQ(r.status, PlanStatus::Unsolvable) << "task " << i;
        continue;
      }
      ASSERT_EQ(r.status, PlanStatus::Solved) << "task " << i;
      EXPECT_NEAR(validate(r.plan, t), r.plan.cost, 1e-9);
      // the heuristic is inadmissible, so only the weight-2 bound is claimed
      EXPECT_LE(r.plan.cost, 2.0 * *best + 1e-9) << "task " << i << " weight " << w;
      if (w == 2.0) ++solved;
    }
  }
  EXPECT_GT(solved, 10);
}

TEST(RelaxedPlanCost, ZeroAtGoalInfiniteAtDeadEnd) {
  const auto sat = load_task("pddl/deliver_domain.pddl", "pddl/satisfied_problem.pddl");
  EXPECT_EQ(relaxed_plan_cost(sat, sat.initial), 0.0);
  const auto dead = load_task("pddl/deliver_domain.pddl", "pddl/unsolvable_problem.pddl");
  EXPECT_TRUE(std::isinf(relaxed_plan_cost(dead, dead.initial)));
}
