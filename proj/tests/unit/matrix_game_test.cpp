#include <algorithm>

#include "doctest.h"
#include "sgs/matrix_game.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sgs;

namespace {

MatrixGame make_matrix(const std::vector<std::vector<Rational>>& payoff) {
  MatrixGame m;
  for (std::size_t a = 0; a < payoff.size(); ++a) m.row_moves.push_back("a" + std::to_string(a));
  for (std::size_t b = 0; b < payoff[0].size(); ++b) m.col_moves.push_back("b" + std::to_string(b));
  m.payoff = payoff;
  return m;
}

const MatrixGame kPennies = make_matrix({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
const MatrixGame kRps = make_matrix({{Rational(0), Rational(0), Rational(1)},
                                     {Rational(1), Rational(0), Rational(0)},
                                     {Rational(0), Rational(1), Rational(0)}});

std::vector<int> support_of(const Distribution& d) {
  std::vector<int> s;
  for (const auto& [i, p] : d) s.push_back(i);
  return s;
}

// A reported pair must be backed by its own witness.
void check_pair_witness(const ConcurrentGame& g, int s, const Valuation& v,
                        const SupportPair& pair) {
  CHECK(support_of(pair.witness) == pair.support);
  CHECK(dist_sum(pair.witness) == Rational(1));
  CHECK(is_value_optimal(g, s, v, pair.witness));
  CHECK(counter_optimal_moves(g, s, v, pair.witness) == pair.counter_moves);
}

}  // namespace

TEST_CASE("matching pennies has value one half") {
  MatrixGameSolution sol = game_value(kPennies);
  CHECK(sol.value == Rational(1, 2));
  CHECK(sol.row_strategy == Distribution{{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  CHECK(sol.col_strategy == Distribution{{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  CHECK(guarantee_under(kPennies, sol.row_strategy) == Rational(1, 2));
  CHECK(oracle::grid_value_lower(kPennies, 60) == Rational(1, 2));
  CHECK(oracle::grid_value_upper(kPennies, 60) == Rational(1, 2));
  CHECK(oracle::analytic_2x2(kPennies) == Rational(1, 2));
}

TEST_CASE("rock paper scissors has value one third") {
  MatrixGameSolution sol = game_value(kRps);
  CHECK(sol.value == Rational(1, 3));
  for (const auto& [i, p] : sol.row_strategy) CHECK(p == Rational(1, 3));
  CHECK(oracle::grid_value_lower(kRps, 60) == Rational(1, 3));
  CHECK(oracle::grid_value_upper(kRps, 60) == Rational(1, 3));
}

TEST_CASE("pure saddle points are found") {
  // Row 1 dominates; column 0 is the best reply.
  MatrixGame m = make_matrix({{Rational(1, 4), Rational(1, 2)}, {Rational(1, 2), Rational(3, 4)}});
  MatrixGameSolution sol = game_value(m);
  CHECK(sol.value == Rational(1, 2));
  CHECK(oracle::analytic_2x2(m) == Rational(1, 2));
}

TEST_CASE("transpose swaps roles") {
  MatrixGame t = transpose(kRps);
  CHECK(t.rows() == 3);
  CHECK(t.row_moves == kRps.col_moves);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) CHECK(t.payoff[b][a] == kRps.payoff[a][b]);
  }
  // Transposed cyclic game is again cyclic with the same value.
  CHECK(game_value(t).value == Rational(1, 3));
}

TEST_CASE("one_step_value evaluates fixed mixes") {
  const Distribution uniform = {{0, Rational(1, 2)}, {1, Rational(1, 2)}};
  const Distribution pure0 = {{0, Rational(1)}};
  CHECK(one_step_value(kPennies, uniform, pure0) == Rational(1, 2));
  CHECK(one_step_value(kPennies, pure0, pure0) == Rational(1));
  CHECK(guarantee_under(kPennies, pure0) == Rational(0));
}

TEST_CASE("random matrices satisfy exact duality and the 2x2 formula") {
  testgen::Rng rng(11);
  for (int round = 0; round < 120; ++round) {
    const int rows = testgen::pick(rng, 1, 3);
    const int cols = testgen::pick(rng, 1, 3);
    std::vector<std::vector<Rational>> payoff(rows, std::vector<Rational>(cols));
    for (auto& row : payoff) {
      for (auto& cell : row) cell = Rational(testgen::pick(rng, 0, 8), 8);
    }
    MatrixGame m = make_matrix(payoff);
    MatrixGameSolution sol = game_value(m);
    // Row witness guarantees the value from below, column witness from above.
    CHECK(guarantee_under(m, sol.row_strategy) == sol.value);
    Rational worst_reply(0);
    for (int a = 0; a < rows; ++a) {
      Rational reply(0);
      for (const auto& [b, pb] : sol.col_strategy) reply += pb * m.payoff[a][b];
      if (reply > worst_reply) worst_reply = reply;
    }
    CHECK(worst_reply == sol.value);
    // Grid bounds sandwich the exact value.
    CHECK(oracle::grid_value_lower(m, 12) <= sol.value);
    CHECK(oracle::grid_value_upper(m, 12) >= sol.value);
    if (rows == 2 && cols == 2) CHECK(oracle::analytic_2x2(m) == sol.value);
  }
}

TEST_CASE("one_shot_value matches game_value on the local matrix") {
  auto mi = oracle::matrix_as_game({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  CHECK(one_shot_value(mi.g, 0, mi.v) == Rational(1, 2));
  CHECK(game_value(local_matrix(mi.g, 0, mi.v)).value == Rational(1, 2));
}

TEST_CASE("optimal_support_pairs on matching pennies") {
  auto mi = oracle::matrix_as_game({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  auto pairs = optimal_support_pairs(mi.g, 0, mi.v);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].support == std::vector<int>{0, 1});
  CHECK(pairs[0].counter_moves == std::vector<int>{0, 1});
  CHECK(pairs[0].witness == Distribution{{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  check_pair_witness(mi.g, 0, mi.v, pairs[0]);
}

TEST_CASE("optimal_support_pairs with a dominant row") {
  auto mi = oracle::matrix_as_game({{Rational(1), Rational(1)}, {Rational(0), Rational(0)}});
  auto pairs = optimal_support_pairs(mi.g, 0, mi.v);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].support == std::vector<int>{0});
  CHECK(pairs[0].counter_moves == std::vector<int>{0, 1});
  check_pair_witness(mi.g, 0, mi.v, pairs[0]);
}

TEST_CASE("optimal_support_pairs on a flat matrix lists every support") {
  auto mi = oracle::matrix_as_game({{Rational(1, 2), Rational(1, 2)},
                                    {Rational(1, 2), Rational(1, 2)}});
  auto pairs = optimal_support_pairs(mi.g, 0, mi.v);
  REQUIRE(pairs.size() == 3);
  for (const auto& p : pairs) {
    CHECK(p.counter_moves == std::vector<int>{0, 1});
    check_pair_witness(mi.g, 0, mi.v, p);
  }
  CHECK(pairs[0].support == std::vector<int>{0});
  CHECK(pairs[1].support == std::vector<int>{1});
  CHECK(pairs[2].support == std::vector<int>{0, 1});
}

TEST_CASE("grid-discovered pairs are a subset of the exact enumeration") {
  testgen::Rng rng(23);
  for (int round = 0; round < 40; ++round) {
    const int rows = testgen::pick(rng, 2, 3);
    const int cols = testgen::pick(rng, 2, 3);
    std::vector<std::vector<Rational>> payoff(rows, std::vector<Rational>(cols));
    for (auto& row : payoff) {
      for (auto& cell : row) cell = Rational(testgen::pick(rng, 0, 4), 4);
    }
    auto mi = oracle::matrix_as_game(payoff);
    auto pairs = optimal_support_pairs(mi.g, 0, mi.v);
    const Rational value = one_shot_value(mi.g, 0, mi.v);
    oracle::SupportPairSet exact;
    for (const auto& p : pairs) {
      check_pair_witness(mi.g, 0, mi.v, p);
      exact.insert({p.support, p.counter_moves});
    }
    CHECK(exact.size() == pairs.size());
    for (const auto& found : oracle::grid_support_pairs(mi.g, 0, mi.v, 16, value)) {
      CHECK(exact.count(found) == 1);
    }
  }
}

TEST_CASE("enumeration refuses oversized move sets") {
  std::vector<std::vector<Rational>> payoff(21, std::vector<Rational>(1, Rational(1, 2)));
  auto mi = oracle::matrix_as_game(payoff);
  CHECK_THROWS_AS(optimal_support_pairs(mi.g, 0, mi.v), ResourceError);
}

TEST_CASE("malformed matrices are rejected") {
  MatrixGame m = make_matrix({{Rational(1, 2)}});
  m.payoff[0][0] = Rational(3, 2);
  CHECK_THROWS_AS(require_valid(m), std::invalid_argument);
  m = make_matrix({{Rational(1, 2)}});
  m.payoff.clear();
  CHECK_THROWS_AS(require_valid(m), std::invalid_argument);
}
