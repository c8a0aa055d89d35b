#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "coopnet/games.hpp"
#include "coopnet/netcore.hpp"
#include "coopnet/rational.hpp"
#include "coopnet/values.hpp"

namespace coopnet::testsupport {

// Deterministic generator, independent of the library's hashing.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

  long long range(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(int percent) { return range(1, 100) <= percent; }
};

inline Rational random_rational(Rng& rng, int max_abs_num = 10, int max_den = 10) {
  return Rational(rng.range(-max_abs_num, max_abs_num), rng.range(1, max_den));
}

inline Network random_network(Rng& rng, PlayerSet players, int link_percent = 50) {
  std::vector<Link> links;
  for (Player j = 2; j <= players.n; ++j) {
    for (Player i = 1; i < j; ++i) {
      if (rng.chance(link_percent)) links.emplace_back(i, j);
    }
  }
  return Network(players, std::move(links));
}

inline TuGame random_tu_game(Rng& rng, PlayerSet players, int max_abs_num = 10, int max_den = 10) {
  TuGame game(players);
  for (PlayerMask s = 1; s <= players.all(); ++s) {
    game.set(s, random_rational(rng, max_abs_num, max_den));
  }
  return game;
}

inline PffGame random_pff_game(Rng& rng, PlayerSet players, int sparsity_percent = 70,
                               int max_abs_num = 10, int max_den = 10) {
  PffGame game(players);
  const EmbeddedCoalitionSpace& space = EmbeddedCoalitionSpace::get(players.n);
  for (int idx = 0; idx < space.size(); ++idx) {
    if (!rng.chance(sparsity_percent)) continue;
    game.set(space.embedded(idx), random_rational(rng, max_abs_num, max_den));
  }
  return game;
}

// Brute-force Shapley value by enumerating every player ordering; the
// independent oracle for all Shapley-based rules.
inline Allocation shapley_by_permutations(const TuGame& v) {
  PlayerSet players = v.players();
  Allocation sum(players);
  std::vector<Player> order;
  for (Player p = 1; p <= players.n; ++p) order.push_back(p);
  long long count = 0;
  do {
    PlayerMask before = 0;
    for (Player p : order) {
      sum[p] += v.value(before | player_bit(p)) - v.value(before);
      before |= player_bit(p);
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (Player p = 1; p <= players.n; ++p) sum[p] = sum[p] / Rational(count);
  return sum;
}

}  // namespace coopnet::testsupport
