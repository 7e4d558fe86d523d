#include "support/fixtures.hpp"

namespace sgs::fixtures {

namespace {

// Both players get the single move "-" and the state loops to itself.
void make_sink(ConcurrentGame& g, int s) {
  g.moves1[s] = {"-"};
  g.moves2[s] = {"-"};
  g.delta[s] = {{{{s, Rational(1)}}}};
}

ConcurrentGame pennies_game() {
  ConcurrentGame g;
  g.states = {"s", "good", "bad"};
  g.moves1.resize(3);
  g.moves2.resize(3);
  g.delta.resize(3);
  g.moves1[0] = {"a0", "a1"};
  g.moves2[0] = {"b0", "b1"};
  g.delta[0] = {{{{1, Rational(1)}}, {{2, Rational(1)}}},
                {{{2, Rational(1)}}, {{1, Rational(1)}}}};
  make_sink(g, 1);
  make_sink(g, 2);
  g.rebuild_index();
  require_valid(g);
  return g;
}

}  // namespace

ConcurrentFixture matching_pennies_safety() {
  return {pennies_game(), {true, true, false}};
}

ConcurrentFixture matching_pennies_reach() {
  return {pennies_game(), {false, true, false}};
}

TurnBasedFixture stagnation() {
  TurnBasedGame g;
  g.states = {"s0", "s1", "s2", "c1", "c2", "p0", "home", "bad"};
  g.owners = {Owner::P1,     Owner::Random, Owner::P2, Owner::Random,
              Owner::Random, Owner::P1,     Owner::P1, Owner::P1};
  g.edges = {{1, 2}, {0, 3}, {0, 4}, {6, 7}, {6, 7}, {3, 4}, {6}, {7}};
  g.dist.resize(8);
  g.dist[1] = {{0, Rational(1, 2)}, {3, Rational(1, 2)}};
  g.dist[3] = {{6, Rational(1, 3)}, {7, Rational(2, 3)}};
  g.dist[4] = {{6, Rational(2, 3)}, {7, Rational(1, 3)}};
  g.rebuild_index();
  require_valid(g);
  std::vector<bool> safe(8, true);
  safe[7] = false;
  return {std::move(g), std::move(safe)};
}

ConcurrentFixture irrational() {
  ConcurrentGame g;
  g.states = {"s", "good", "bad"};
  g.moves1.resize(3);
  g.moves2.resize(3);
  g.delta.resize(3);
  g.moves1[0] = {"a0", "a1"};
  g.moves2[0] = {"b0", "b1"};
  g.delta[0] = {{{{0, Rational(1, 2)}, {1, Rational(1, 2)}}, {{2, Rational(1)}}},
                {{{2, Rational(1)}}, {{1, Rational(1)}}}};
  make_sink(g, 1);
  make_sink(g, 2);
  g.rebuild_index();
  require_valid(g);
  return {std::move(g), {true, true, false}};
}

namespace {

TurnBasedFixture one_coin(const Rational& p_t) {
  TurnBasedGame g;
  g.states = {"s", "t", "u"};
  g.owners = {Owner::Random, Owner::P1, Owner::P1};
  g.edges = {{1, 2}, {1}, {2}};
  g.dist.resize(3);
  g.dist[0] = {{1, p_t}, {2, Rational(1) - p_t}};
  g.rebuild_index();
  require_valid(g);
  return {std::move(g), {false, true, false}};
}

}  // namespace

TurnBasedFixture coin_quarter() { return one_coin(Rational(1, 4)); }

TurnBasedFixture third_chain() { return one_coin(Rational(1, 3)); }

TurnBasedFixture tb_reach_demo() {
  TurnBasedGame g;
  g.states = {"s0", "s1", "t", "z"};
  g.owners = {Owner::P1, Owner::Random, Owner::P1, Owner::P1};
  g.edges = {{1, 2}, {2, 3}, {2}, {3}};
  g.dist.resize(4);
  g.dist[1] = {{2, Rational(1, 2)}, {3, Rational(1, 2)}};
  g.rebuild_index();
  require_valid(g);
  return {std::move(g), {false, false, true, false}};
}

}  // namespace sgs::fixtures
