#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopnet/games.hpp"
#include "coopnet/netcore.hpp"
#include "coopnet/values.hpp"

namespace coopnet {

// Any allocation rule fed through the audits: a named, deterministic, total
// evaluator.
struct RuleUnderTest {
  std::string name;
  std::function<Allocation(const WorthFunction&, const Network&)> eval;
};

// Built-in rules. The bce/fce wrappers memoize per worth function, so an
// audit that revisits subnetworks does not recompute them. Instances are not
// safe to share across threads.
RuleUnderTest bce_rule();
RuleUnderTest fce_rule();
RuleUnderTest fce_direct_rule(int link_cap = kDefaultLinkCap);
// Adversarial rule paying each player a pseudo-random rational hashed from
// (seed, player, canonical link set); it ignores the worth function entirely.
RuleUnderTest seeded_rule(std::uint64_t seed);
RuleUnderTest zero_rule();

// Memoized evaluations of one rule under one fixed worth function. Owns a
// copy of the rule, so passing a temporary is fine.
class AllocationCache {
 public:
  AllocationCache(RuleUnderTest rule, WorthFunction w);
  const Allocation& at(const Network& g);
  // allocation at g with all links of the `removed` players deleted
  const Allocation& at_removed(const Network& g, PlayerMask removed);
  PlayerSet players() const { return players_; }

 private:
  RuleUnderTest rule_;
  WorthFunction w_;
  PlayerSet players_;
  AllocationByMask memo_;
};

// Signed imbalance of the balanced-contributions equation for link {i,j},
// measured at the subnetwork g_{-D}:
//   [phi_i(g_-D) - phi_i(g_-D-j)] - [phi_j(g_-D) - phi_j(g_-D-i)]
struct ResidualValue {
  Player i, j;
  PlayerMask removed;
  Rational value;
};

ResidualValue bc_residual(const RuleUnderTest& rule, const WorthFunction& w, const Network& g,
                          Player i, Player j, PlayerMask removed);
Rational bc_residual(AllocationCache& cache, const Network& g, Player i, Player j,
                     PlayerMask removed);

// A failed equation: the players and networks involved plus both exact sides.
struct Violation {
  std::vector<Player> players;
  std::vector<Network> networks;
  Rational lhs, rhs;
  std::string note;
};

struct AuditReport {
  std::string axiom;
  std::string rule;
  std::string game;     // display name, filled by run_suite or the caller
  std::string network;  // display name
  std::size_t checked = 0;
  std::vector<Violation> violations;
  bool passed() const { return violations.empty(); }
};

// Component efficiency: payoffs inside each component sum to its worth.
AuditReport check_ce(const RuleUnderTest& rule, const WorthFunction& w, const Network& g);
// Balanced contributions on every link (full withdrawal of the other player).
AuditReport check_bc(const RuleUnderTest& rule, const WorthFunction& w, const Network& g);
// Fairness on every link (deleting just that link).
AuditReport check_f(const RuleUnderTest& rule, const WorthFunction& w, const Network& g);
// Balanced contributions extended to every (also non-adjacent) pair inside a
// component.
AuditReport check_bcplus(const RuleUnderTest& rule, const WorthFunction& w, const Network& g);
// phi_{pi(i)}(pi w, pi g) = phi_i(w, g); exhaustive over all permutations when
// max_permutations == 0 (requires n <= 6), otherwise a seeded sample.
AuditReport check_symmetry(const RuleUnderTest& rule, const WorthFunction& w, const Network& g,
                           int max_permutations = 0, std::uint64_t seed = 0);

// Both sides of the cycle-sum identity: the sum of BC residuals around a
// cycle equals a signed sum of residuals in strictly smaller subnetworks.
// The identity is algebraic and must hold for every rule whatsoever.
struct CycleSumResult {
  Rational lhs, rhs;
  bool equal;
};

CycleSumResult cycle_sum_check(AllocationCache& cache, const Network& g, const Cycle& z);
CycleSumResult cycle_sum_check(const RuleUnderTest& rule, const WorthFunction& w, const Network& g,
                               const Cycle& z);

enum class Axiom { ce, bc, fairness, bcplus, symmetry };
std::string axiom_name(Axiom axiom);
std::optional<Axiom> axiom_from_name(const std::string& name);

struct SuiteSpec {
  std::vector<RuleUnderTest> rules;
  std::vector<std::pair<std::string, WorthFunction>> games;
  std::vector<std::pair<std::string, Network>> networks;
  std::vector<Axiom> axioms;
  int symmetry_sample = 0;  // 0 = exhaustive
  std::uint64_t seed = 1;
};

// Cross product of audits in deterministic (rule, game, network, axiom)
// order; individual violations are collected, never fatal.
std::vector<AuditReport> run_suite(const SuiteSpec& spec);

}  // namespace coopnet
