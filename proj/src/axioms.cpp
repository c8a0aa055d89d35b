#include "coopnet/axioms.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <stdexcept>

#include "coopnet/errors.hpp"

namespace coopnet {

namespace {

// per-worth-function memo shared by the closures below
template <typename Cache>
struct PerWorthState {
  std::map<const void*, std::pair<WorthFunction, Cache>> entries;
  Cache& cache_for(const WorthFunction& w) {
    auto it = entries.find(w.impl_id());
    if (it == entries.end()) {
      it = entries.emplace(w.impl_id(), std::make_pair(w, Cache{})).first;
    }
    return it->second.second;
  }
};

}  // namespace

RuleUnderTest bce_rule() {
  auto state = std::make_shared<PerWorthState<AllocationByMask>>();
  return RuleUnderTest{"bce", [state](const WorthFunction& w, const Network& g) {
                         return bce(w, g, &state->cache_for(w));
                       }};
}

RuleUnderTest fce_rule() {
  auto state = std::make_shared<PerWorthState<FceCache>>();
  return RuleUnderTest{"fce", [state](const WorthFunction& w, const Network& g) {
                         return fce_formula(w, g, &state->cache_for(w));
                       }};
}

RuleUnderTest fce_direct_rule(int link_cap) {
  auto state = std::make_shared<PerWorthState<AllocationByMask>>();
  return RuleUnderTest{"fce-direct", [state, link_cap](const WorthFunction& w, const Network& g) {
                         return fce_direct(w, g, link_cap, &state->cache_for(w));
                       }};
}

RuleUnderTest seeded_rule(std::uint64_t seed) {
  return RuleUnderTest{"seeded-hash", [seed](const WorthFunction& w, const Network& g) {
                         Allocation out(w.players());
                         for (Player p = 1; p <= g.player_count(); ++p) {
                           std::uint64_t h = hash_combine(seed, static_cast<std::uint64_t>(p));
                           h = hash_combine(h, g.link_mask().lo);
                           h = hash_combine(h, g.link_mask().hi);
                           out[p] = rational_from_hash(h);
                         }
                         return out;
                       }};
}

RuleUnderTest zero_rule() {
  return RuleUnderTest{"zero", [](const WorthFunction& w, const Network&) {
                         return Allocation(w.players());
                       }};
}

AllocationCache::AllocationCache(RuleUnderTest rule, WorthFunction w)
    : rule_(std::move(rule)), w_(std::move(w)), players_(w_.players()) {}

const Allocation& AllocationCache::at(const Network& g) {
  auto hit = memo_.find(g.link_mask());
  if (hit != memo_.end()) return hit->second;
  return memo_.emplace(g.link_mask(), rule_.eval(w_, g)).first->second;
}

const Allocation& AllocationCache::at_removed(const Network& g, PlayerMask removed) {
  LinkMask incident;
  for (PlayerMask rest = removed; rest; rest &= rest - 1) {
    incident = incident | LinkMask::incident(std::countr_zero(rest) + 1);
  }
  LinkMask m = g.link_mask().without(incident);
  auto hit = memo_.find(m);
  if (hit != memo_.end()) return hit->second;
  Network sub = Network::from_mask(players_, m);
  return memo_.emplace(m, rule_.eval(w_, sub)).first->second;
}

Rational bc_residual(AllocationCache& cache, const Network& g, Player i, Player j,
                     PlayerMask removed) {
  if (removed & (player_bit(i) | player_bit(j))) {
    throw std::domain_error("the removed set may not contain the link's endpoints");
  }
  if (!g.has_link(i, j)) {
    throw std::domain_error("{" + std::to_string(i) + "," + std::to_string(j) +
                            "} is not a link of the network");
  }
  const Allocation& base = cache.at_removed(g, removed);
  Rational gain_i = base[i] - cache.at_removed(g, removed | player_bit(j))[i];
  Rational gain_j = base[j] - cache.at_removed(g, removed | player_bit(i))[j];
  return gain_i - gain_j;
}

ResidualValue bc_residual(const RuleUnderTest& rule, const WorthFunction& w, const Network& g,
                          Player i, Player j, PlayerMask removed) {
  AllocationCache cache(rule, w);
  return ResidualValue{i, j, removed, bc_residual(cache, g, i, j, removed)};
}

AuditReport check_ce(const RuleUnderTest& rule, const WorthFunction& w, const Network& g) {
  AuditReport report{axiom_name(Axiom::ce), rule.name, "", "", 0, {}};
  Allocation alloc = rule.eval(w, g);
  for (PlayerMask comp : components(g).blocks()) {
    ++report.checked;
    Rational total = alloc.total(comp);
    Rational worth = w.eval_unchecked(comp, g);
    if (total != worth) {
      report.violations.push_back(
          Violation{players_of(comp), {g}, total, worth, "payoffs within the component vs its worth"});
    }
  }
  return report;
}

AuditReport check_bc(const RuleUnderTest& rule, const WorthFunction& w, const Network& g) {
  AuditReport report{axiom_name(Axiom::bc), rule.name, "", "", 0, {}};
  AllocationCache cache(rule, w);
  const Allocation& base = cache.at(g);
  for (const Link& l : g.links()) {
    ++report.checked;
    Rational lhs = base[l.a] - cache.at_removed(g, player_bit(l.b))[l.a];
    Rational rhs = base[l.b] - cache.at_removed(g, player_bit(l.a))[l.b];
    if (lhs != rhs) {
      report.violations.push_back(Violation{
          {l.a, l.b},
          {g, Network::from_mask(g.players(), g.link_mask().without(LinkMask::incident(l.b))),
           Network::from_mask(g.players(), g.link_mask().without(LinkMask::incident(l.a)))},
          lhs,
          rhs,
          "gains from each other's full network presence"});
    }
  }
  return report;
}

AuditReport check_f(const RuleUnderTest& rule, const WorthFunction& w, const Network& g) {
  AuditReport report{axiom_name(Axiom::fairness), rule.name, "", "", 0, {}};
  AllocationCache cache(rule, w);
  const Allocation& base = cache.at(g);
  for (const Link& l : g.links()) {
    ++report.checked;
    Network cut = Network::from_mask(g.players(), g.link_mask().without(LinkMask::of(l)));
    const Allocation& cut_alloc = cache.at(cut);
    Rational lhs = base[l.a] - cut_alloc[l.a];
    Rational rhs = base[l.b] - cut_alloc[l.b];
    if (lhs != rhs) {
      report.violations.push_back(
          Violation{{l.a, l.b}, {g, cut}, lhs, rhs, "gains from the single link between them"});
    }
  }
  return report;
}

AuditReport check_bcplus(const RuleUnderTest& rule, const WorthFunction& w, const Network& g) {
  AuditReport report{axiom_name(Axiom::bcplus), rule.name, "", "", 0, {}};
  AllocationCache cache(rule, w);
  const Allocation& base = cache.at(g);
  for (PlayerMask comp : components(g).blocks()) {
    std::vector<Player> members = players_of(comp);
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        Player i = members[x], j = members[y];
        ++report.checked;
        Rational lhs = base[i] - cache.at_removed(g, player_bit(j))[i];
        Rational rhs = base[j] - cache.at_removed(g, player_bit(i))[j];
        if (lhs != rhs) {
          report.violations.push_back(Violation{
              {i, j},
              {g, Network::from_mask(g.players(), g.link_mask().without(LinkMask::incident(j))),
               Network::from_mask(g.players(), g.link_mask().without(LinkMask::incident(i)))},
              lhs,
              rhs,
              "pair in the same component, possibly non-adjacent"});
        }
      }
    }
  }
  return report;
}

AuditReport check_symmetry(const RuleUnderTest& rule, const WorthFunction& w, const Network& g,
                           int max_permutations, std::uint64_t seed) {
  AuditReport report{axiom_name(Axiom::symmetry), rule.name, "", "", 0, {}};
  int n = g.player_count();
  std::vector<Permutation> perms;
  if (max_permutations == 0) {
    if (n > 6) {
      throw resource_limit_error("exhaustive symmetry check is limited to n <= 6; sample instead");
    }
    perms = enumerate_permutations(g.players());
  } else {
    // seeded Fisher-Yates draws
    std::uint64_t h = seed;
    for (int k = 0; k < max_permutations; ++k) {
      std::vector<Player> im(n);
      for (Player p = 1; p <= n; ++p) im[p - 1] = p;
      for (int i = n - 1; i > 0; --i) {
        h = mix_hash(h + static_cast<std::uint64_t>(k * 131 + i));
        std::swap(im[i], im[h % static_cast<std::uint64_t>(i + 1)]);
      }
      perms.emplace_back(std::move(im));
    }
  }
  Allocation base = rule.eval(w, g);
  for (const Permutation& pi : perms) {
    ++report.checked;
    Network pg = apply_permutation(g, pi);
    WorthFunction pw = w.permuted(pi);
    Allocation mapped = rule.eval(pw, pg);
    for (Player i = 1; i <= n; ++i) {
      if (mapped[pi(i)] != base[i]) {
        std::string images = "pi=";
        for (Player p = 1; p <= n; ++p) images += (p > 1 ? "," : "") + std::to_string(pi(p));
        report.violations.push_back(
            Violation{{i, pi(i)}, {g, pg}, base[i], mapped[pi(i)], images});
      }
    }
  }
  return report;
}

CycleSumResult cycle_sum_check(AllocationCache& cache, const Network& g, const Cycle& z) {
  validate_cycle(g, z);
  int len = z.length();
  Rational lhs(0);
  for (int s = 0; s < len; ++s) {
    lhs += bc_residual(cache, g, z.vertices[s], z.vertices[(s + 1) % len], 0);
  }
  PlayerMask cycle_mask = 0;
  for (Player p : z.vertices) cycle_mask |= player_bit(p);
  Rational rhs(0);
  for (int s = 0; s < len; ++s) {
    Player i = z.vertices[s], j = z.vertices[(s + 1) % len];
    PlayerMask others = cycle_mask & ~player_bit(i) & ~player_bit(j);
    for (PlayerMask removed = others; removed; removed = (removed - 1) & others) {
      Rational term = bc_residual(cache, g, i, j, removed);
      if (popcount(removed) % 2 == 1) {
        rhs += term;
      } else {
        rhs -= term;
      }
    }
  }
  bool equal = lhs == rhs;
  return CycleSumResult{std::move(lhs), std::move(rhs), equal};
}

CycleSumResult cycle_sum_check(const RuleUnderTest& rule, const WorthFunction& w, const Network& g,
                               const Cycle& z) {
  AllocationCache cache(rule, w);
  return cycle_sum_check(cache, g, z);
}

std::string axiom_name(Axiom axiom) {
  switch (axiom) {
    case Axiom::ce: return "ce";
    case Axiom::bc: return "bc";
    case Axiom::fairness: return "f";
    case Axiom::bcplus: return "bcplus";
    case Axiom::symmetry: return "sym";
  }
  return "?";
}

std::optional<Axiom> axiom_from_name(const std::string& name) {
  if (name == "ce") return Axiom::ce;
  if (name == "bc") return Axiom::bc;
  if (name == "f" || name == "fairness") return Axiom::fairness;
  if (name == "bcplus" || name == "bc+") return Axiom::bcplus;
  if (name == "sym" || name == "symmetry") return Axiom::symmetry;
  return std::nullopt;
}

std::vector<AuditReport> run_suite(const SuiteSpec& spec) {
  std::vector<AuditReport> reports;
  for (const RuleUnderTest& rule : spec.rules) {
    for (const auto& [game_name, w] : spec.games) {
      for (const auto& [net_name, g] : spec.networks) {
        for (Axiom axiom : spec.axioms) {
          AuditReport report;
          switch (axiom) {
            case Axiom::ce: report = check_ce(rule, w, g); break;
            case Axiom::bc: report = check_bc(rule, w, g); break;
            case Axiom::fairness: report = check_f(rule, w, g); break;
            case Axiom::bcplus: report = check_bcplus(rule, w, g); break;
            case Axiom::symmetry:
              report = check_symmetry(rule, w, g, spec.symmetry_sample, spec.seed);
              break;
          }
          report.game = game_name;
          report.network = net_name;
          reports.push_back(std::move(report));
        }
      }
    }
  }
  return reports;
}

}  // namespace coopnet
