#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coopnet/netcore.hpp"
#include "coopnet/rational.hpp"

namespace coopnet {

// Transferable-utility game: coalition -> worth, empty coalition worth 0.
// Unlisted coalitions read as 0; zero worths are never stored.
class TuGame {
 public:
  explicit TuGame(PlayerSet players) : players_(players) {}
  TuGame(PlayerSet players, const std::vector<std::pair<PlayerMask, Rational>>& worths);

  const PlayerSet& players() const { return players_; }
  void set(PlayerMask coalition, Rational worth);
  Rational value(PlayerMask coalition) const;
  const std::map<PlayerMask, Rational>& worths() const { return worths_; }

  friend bool operator==(const TuGame& a, const TuGame& b) {
    return a.players_ == b.players_ && a.worths_ == b.worths_;
  }

 private:
  PlayerSet players_;
  std::map<PlayerMask, Rational> worths_;
};

// Coalition embedded in a partition that contains it as a block.
struct EmbeddedCoalition {
  PlayerMask coalition;
  Partition partition;
  EmbeddedCoalition(PlayerMask c, Partition p);
  friend bool operator==(const EmbeddedCoalition& a, const EmbeddedCoalition& b) {
    return a.coalition == b.coalition && a.partition == b.partition;
  }
};

std::string embedded_to_string(const EmbeddedCoalition& ec);

// Partition function form game: embedded coalition -> worth. Unlisted
// entries read as 0 and zero worths are never stored, so map equality is
// semantic equality.
class PffGame {
 public:
  explicit PffGame(PlayerSet players) : players_(players) {}

  const PlayerSet& players() const { return players_; }
  void set(const EmbeddedCoalition& ec, Rational worth);
  Rational value(PlayerMask coalition, const Partition& partition) const;
  std::vector<std::pair<EmbeddedCoalition, Rational>> entries() const;

  friend bool operator==(const PffGame& a, const PffGame& b) {
    return a.players_ == b.players_ && a.worths_ == b.worths_;
  }

 private:
  struct Key {
    std::vector<PlayerMask> blocks;
    PlayerMask coalition;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  PlayerSet players_;
  std::map<Key, Rational> worths_;
};

struct WorthTableEntry {
  PlayerMask component;
  Network network;
  Rational worth;
};

// Worth function w(C, g): the value available to component C when the
// network is g. Defined only for C a connected component of g; evaluating
// any other pair is an error, never a silent zero. Instances are immutable
// and cheap to copy.
class WorthFunction {
 public:
  class Impl;

  PlayerSet players() const;
  // Validates that `component` is a component of g, then evaluates.
  Rational operator()(PlayerMask component, const Network& g) const;
  // Skips the component check; callers must guarantee the pair is legal.
  Rational eval_unchecked(PlayerMask component, const Network& g) const;
  std::string describe() const;
  // Stable identity of the underlying evaluator, usable as a cache key.
  const void* impl_id() const;

  static WorthFunction zero(PlayerSet players);
  static WorthFunction table(PlayerSet players, std::vector<WorthTableEntry> entries);
  static WorthFunction from_tu(TuGame game);
  static WorthFunction from_pff(PffGame game);
  // Pays 1 to any component containing `beneficiary` whenever the two
  // players of `pair` sit in the same component.
  static WorthFunction linked_beneficiary(PlayerSet players, Player beneficiary, Link pair);
  // Deterministic pseudo-random worths derived from (seed, C, links). With
  // externality_free, the hash reads only the links inside C.
  static WorthFunction seeded(PlayerSet players, std::uint64_t seed, bool externality_free = false);
  static WorthFunction combination(Rational a, WorthFunction wa, Rational b, WorthFunction wb);

  // g-projected worth function: w^g(C, h) = sum over S in C/g of w(S, g|_{N/h}).
  WorthFunction projected(const Network& g) const;
  // (pi w)(S, h) = w(pi^{-1} S, pi^{-1} h)
  WorthFunction permuted(const Permutation& pi) const;

  const PffGame* as_pff() const;  // non-null iff PFF-induced
  const TuGame* as_tu() const;    // non-null iff TU-induced

 private:
  explicit WorthFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// --- conversions between the game representations --------------------------

// w_v(C, g) = v(C, N/g)
WorthFunction induced_worth_from_pff(PffGame v);

// Inverse of induced_worth_from_pff. For a non-PFF-induced w the result is
// well defined only when w is partition-measurable (w(C,g) depends on g only
// through N/g); unless the caller certifies that, measurability is verified
// by enumerating every network on n players (guarded, n <= 6) and any
// counterexample raises inconsistency_error with a witness.
PffGame pff_from_worth(const WorthFunction& w, bool certified_measurable = false);

WorthFunction project_worth(const WorthFunction& w, const Network& g);

// v^g(C, P) = sum over S in C/g of v(S, g/P)
PffGame graph_restrict_pff(const PffGame& v, const Network& g, int cap = kDefaultPffPlayerCap);

// v_{w^g}(C, P) = sum over S in C/g of w(S, g|_P)
PffGame pff_from_projected(const WorthFunction& w, const Network& g, int cap = kDefaultPffPlayerCap);

class EmbeddedCoalitionSpace;
using NetworkByMask = std::unordered_map<LinkMask, Network, LinkMaskHash>;

// Dense table of v_{w^g} in EmbeddedCoalitionSpace index order; the workhorse
// behind pff_from_projected and the closed-form FCE evaluation. An optional
// network cache amortizes g|_P materialization across calls with the same g.
std::vector<Rational> pff_from_projected_dense(const WorthFunction& w, const Network& g,
                                               const EmbeddedCoalitionSpace& space,
                                               NetworkByMask* net_cache = nullptr);

// v^g(S) = sum over C in S/g of v(C)
TuGame graph_restrict_tu(const TuGame& v, const Network& g);

// TU game behind the Jackson-Wolinsky rule: each coalition S is evaluated in
// the network where all outsiders' links are removed, component by component.
TuGame jw_tu_game(const WorthFunction& w, const Network& g);

// Externality-free TU game: every coalition evaluated with outsiders as
// isolated singletons.
TuGame ef_tu_game(const PffGame& v);
TuGame ef_tu_game(const WorthFunction& w);

struct ExternalityCheck {
  bool externality_free;
  // witness when not free: w(component, network) != w(component, network
  // with outsiders cut off)
  std::optional<std::pair<PlayerMask, Network>> witness;
};

// Checks w(C, h) = w(C, h restricted to C) over every link subset h of g.
ExternalityCheck is_externality_free(const WorthFunction& w, const Network& g,
                                     int link_cap = kDefaultLinkCap);

// A network whose components are exactly the blocks of p (path per block).
Network network_with_components(const Partition& p);

// --- embedded-coalition enumeration ----------------------------------------

// All embedded coalitions on n players together with the refinement order
// used by the dividend recursion. Built once per n and shared.
class EmbeddedCoalitionSpace {
 public:
  static const EmbeddedCoalitionSpace& get(int n);

  struct Entry {
    PlayerMask coalition;
    int partition_index;
    int coalition_size;
    int block_count;
  };

  int players() const { return n_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const Entry& entry(int idx) const { return entries_[idx]; }
  EmbeddedCoalition embedded(int idx) const;

  int partition_count() const { return static_cast<int>(partitions_.size()); }
  const Partition& partition(int pi) const { return partitions_[pi]; }
  int partition_index(const Partition& p) const;
  // links joining players in the same block
  const LinkMask& partition_internal_links(int pi) const { return internal_[pi]; }

  int index_of(PlayerMask coalition, int partition_index) const;

  // Strict predecessors of entry idx under (C subset of T, P refines Q).
  void for_each_predecessor(int idx, const std::function<void(int)>& fn) const;

  // Processing order in which every strict predecessor precedes its successor.
  const std::vector<int>& mobius_order() const { return order_; }

 private:
  explicit EmbeddedCoalitionSpace(int n);
  int n_;
  std::vector<Partition> partitions_;
  std::vector<LinkMask> internal_;
  std::map<std::vector<PlayerMask>, int> partition_lookup_;
  std::vector<Entry> entries_;
  std::vector<int> first_entry_;  // per partition
  std::vector<int> order_;
  std::vector<std::vector<int>> predecessors_;  // empty when built lazily
};

// Deterministic splitmix-style hash helpers shared by the seeded worth
// functions and the adversarial test rule.
std::uint64_t mix_hash(std::uint64_t h);
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);
// maps a hash to a small rational with |num| <= max_abs_num, den <= max_den
Rational rational_from_hash(std::uint64_t h, int max_abs_num = 10, int max_den = 6);

}  // namespace coopnet
