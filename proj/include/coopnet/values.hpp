#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "coopnet/games.hpp"
#include "coopnet/netcore.hpp"
#include "coopnet/rational.hpp"

namespace coopnet {

// Exact payoff vector over players 1..n.
struct Allocation {
  explicit Allocation(PlayerSet players) : players(players), pay(players.n) {}
  PlayerSet players;
  std::vector<Rational> pay;

  Rational& operator[](Player p) { return pay[p - 1]; }
  const Rational& operator[](Player p) const { return pay[p - 1]; }
  Rational total(PlayerMask subset) const;
  std::string to_string() const;  // "1: 1/3, 2: 1/3, 3: 1/3"

  friend bool operator==(const Allocation& a, const Allocation& b) {
    return a.players == b.players && a.pay == b.pay;
  }
};

Allocation apply_permutation(const Allocation& a, const Permutation& pi);

// Memo table for allocations of the subnetworks visited by a recursion; only
// valid for a fixed worth function.
using AllocationByMask = std::unordered_map<LinkMask, Allocation, LinkMaskHash>;

Allocation shapley(const TuGame& v);
Allocation myerson(const TuGame& v, const Network& g);
Allocation jw_value(const WorthFunction& w, const Network& g);

// Unanimity-basis coefficients of a PFF game over embedded coalitions.
class DividendTable {
 public:
  DividendTable(int n, std::vector<Rational> coeffs) : n_(n), coeffs_(std::move(coeffs)) {}
  int players() const { return n_; }
  const std::vector<Rational>& dense() const { return coeffs_; }
  Rational at(PlayerMask coalition, const Partition& partition) const;
  std::vector<std::pair<EmbeddedCoalition, Rational>> nonzero() const;

 private:
  int n_;
  std::vector<Rational> coeffs_;
};

DividendTable pff_dividends(const PffGame& v);
Allocation pff_value(const PffGame& v);
Allocation ef_value(const PffGame& v);

// The balanced-contributions component-efficient rule, built by induction on
// the link count along minimal-index BFS trees. `cache` may be reused across
// calls with the same worth function.
Allocation bce(const WorthFunction& w, const Network& g, AllocationByMask* cache = nullptr);

// Same construction with a caller-supplied spanning forest (one spanning
// tree per component of g) replacing the BFS forest at the top level.
Allocation bce_with_forest(const WorthFunction& w, const Network& g,
                           const std::vector<Link>& forest);

struct FceCache {
  AllocationByMask alloc;
  NetworkByMask nets;
};

// The fairness-based component-efficient rule via its closed form: the
// PFF value of the projected game v_{w^g}.
Allocation fce_formula(const WorthFunction& w, const Network& g, FceCache* cache = nullptr);

// The same rule computed by its inductive characterization: fairness along
// spanning-tree links (referencing single-link deletions) plus component
// efficiency, memoized over link subsets of g.
Allocation fce_direct(const WorthFunction& w, const Network& g, int link_cap = kDefaultLinkCap,
                      AllocationByMask* cache = nullptr);

enum class EqualGainsAxiom { balanced_contributions, fairness };

// Independent certificate for existence/uniqueness: per component, solves the
// full overdetermined linear system (component efficiency plus the chosen
// axiom's equation on EVERY link) by fraction-free elimination, recursing on
// smaller networks for the right-hand sides.
struct OracleReport {
  Allocation allocation;
  bool consistent = true;   // no equation contradicted the others
  bool full_rank = true;    // every component system pinned all its unknowns
  int networks_solved = 0;
  std::string issue;        // human-readable description of the first defect
};

OracleReport oracle_solve(const WorthFunction& w, const Network& g, EqualGainsAxiom axiom,
                          int link_cap = kDefaultLinkCap);

}  // namespace coopnet
