#include "coopnet/values.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "coopnet/errors.hpp"

namespace coopnet {

Rational Allocation::total(PlayerMask subset) const {
  Rational sum(0);
  for (Player p : players_of(subset)) sum += pay[p - 1];
  return sum;
}

std::string Allocation::to_string() const {
  std::string out;
  for (Player p = 1; p <= players.n; ++p) {
    if (p > 1) out += ", ";
    out += std::to_string(p) + ": " + pay[p - 1].to_string();
  }
  return out;
}

Allocation apply_permutation(const Allocation& a, const Permutation& pi) {
  Allocation out(a.players);
  for (Player p = 1; p <= a.players.n; ++p) out[pi(p)] = a[p];
  return out;
}

Allocation shapley(const TuGame& v) {
  PlayerSet players = v.players();
  int n = players.n;
  std::vector<Bigint> fact(n + 1);
  fact[0] = Bigint(1);
  for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * Bigint(k);
  std::vector<Rational> weight(n);  // |S|!(n-|S|-1)!/n! for S not containing i
  for (int s = 0; s < n; ++s) weight[s] = Rational(fact[s] * fact[n - 1 - s], fact[n]);

  Allocation out(players);
  for (Player i = 1; i <= n; ++i) {
    PlayerMask bit = player_bit(i);
    Rational phi(0);
    for (PlayerMask s = 0; s <= players.all(); ++s) {
      if (s & bit) continue;
      phi += weight[popcount(s)] * (v.value(s | bit) - v.value(s));
    }
    out[i] = std::move(phi);
  }
  return out;
}

Allocation myerson(const TuGame& v, const Network& g) {
  return shapley(graph_restrict_tu(v, g));
}

Allocation jw_value(const WorthFunction& w, const Network& g) {
  return shapley(jw_tu_game(w, g));
}

// --- dividends and the PFF value ---------------------------------------------

namespace {

// Moebius pass: entering values v(T,Q), leaving unanimity coefficients b.
// The processing order guarantees every strict predecessor is final before
// its successors are read. The pass runs over a common denominator so the
// inner loop is integer subtraction only; the result is identical to the
// rational-by-rational recursion.
void dividends_in_place(const EmbeddedCoalitionSpace& space, std::vector<Rational>& v) {
  Bigint common(1);
  for (const Rational& x : v) {
    Bigint g = Bigint::gcd(common, x.den());
    common = common / g * x.den();
  }
  std::vector<Bigint> nums(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    nums[i] = v[i].num() * (common / v[i].den());
  }
  for (int idx : space.mobius_order()) {
    Bigint val = std::move(nums[idx]);
    space.for_each_predecessor(idx, [&](int p) { val -= nums[p]; });
    nums[idx] = std::move(val);
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = Rational(std::move(nums[i]), common);
  }
}

Allocation distribute_dividends(const EmbeddedCoalitionSpace& space,
                                const std::vector<Rational>& b) {
  Allocation out(PlayerSet(space.players()));
  for (int idx = 0; idx < space.size(); ++idx) {
    if (b[idx].is_zero()) continue;
    const auto& e = space.entry(idx);
    Rational share = b[idx] / Rational(e.coalition_size);
    for (Player p : players_of(e.coalition)) out[p] += share;
  }
  return out;
}

std::vector<Rational> dense_from_pff(const PffGame& v, const EmbeddedCoalitionSpace& space) {
  std::vector<Rational> dense(space.size());
  for (int idx = 0; idx < space.size(); ++idx) {
    const auto& e = space.entry(idx);
    dense[idx] = v.value(e.coalition, space.partition(e.partition_index));
  }
  return dense;
}

}  // namespace

Rational DividendTable::at(PlayerMask coalition, const Partition& partition) const {
  const EmbeddedCoalitionSpace& space = EmbeddedCoalitionSpace::get(n_);
  return coeffs_[space.index_of(coalition, space.partition_index(partition))];
}

std::vector<std::pair<EmbeddedCoalition, Rational>> DividendTable::nonzero() const {
  const EmbeddedCoalitionSpace& space = EmbeddedCoalitionSpace::get(n_);
  std::vector<std::pair<EmbeddedCoalition, Rational>> out;
  for (int idx = 0; idx < space.size(); ++idx) {
    if (!coeffs_[idx].is_zero()) out.emplace_back(space.embedded(idx), coeffs_[idx]);
  }
  return out;
}

DividendTable pff_dividends(const PffGame& v) {
  const EmbeddedCoalitionSpace& space = EmbeddedCoalitionSpace::get(v.players().n);
  std::vector<Rational> dense = dense_from_pff(v, space);
  dividends_in_place(space, dense);
  return DividendTable(v.players().n, std::move(dense));
}

Allocation pff_value(const PffGame& v) {
  const EmbeddedCoalitionSpace& space = EmbeddedCoalitionSpace::get(v.players().n);
  std::vector<Rational> dense = dense_from_pff(v, space);
  dividends_in_place(space, dense);
  return distribute_dividends(space, dense);
}

Allocation ef_value(const PffGame& v) { return shapley(ef_tu_game(v)); }

// --- the BCE rule -------------------------------------------------------------

namespace {

class BceSolver {
 public:
  BceSolver(const WorthFunction& w, AllocationByMask& cache)
      : w_(w), players_(w.players()), cache_(cache) {}

  const Allocation& solve(const Network& g) {
    auto hit = cache_.find(g.link_mask());
    if (hit != cache_.end()) return hit->second;
    Allocation out(players_);
    for (PlayerMask comp : components(g).blocks()) {
      if (popcount(comp) == 1) {
        out[min_player(comp)] = worth_of(comp, g);
      } else {
        fill_component(g, comp, minimal_index_bfs(g, comp), out);
      }
    }
    return cache_.emplace(g.link_mask(), std::move(out)).first->second;
  }

  // top-level variant with a caller-supplied spanning forest; the result
  // never enters the cache under g's key, keeping comparisons against the
  // BFS construction independent
  Allocation solve_with_forest(const Network& g, const Network& forest) {
    Allocation out(players_);
    for (PlayerMask comp : components(g).blocks()) {
      if (popcount(comp) == 1) {
        out[min_player(comp)] = worth_of(comp, g);
      } else {
        fill_component(g, comp, minimal_index_bfs(forest, comp), out);
      }
    }
    return out;
  }

 private:
  void fill_component(const Network& g, PlayerMask comp, const BfsTree& tree, Allocation& out) {
    std::vector<Rational> gamma(players_.n + 1);
    for (std::size_t k = 1; k < tree.order.size(); ++k) {
      Player j = tree.order[k];
      Player pj = tree.parent_of(j);
      // gamma_j = gamma_p - [BCE_p(w, g_-j) - BCE_j(w, g_-p)]
      const Allocation& without_j = solve_removed(g, j);
      Rational lead = without_j[pj];
      const Allocation& without_p = solve_removed(g, pj);
      gamma[j] = gamma[pj] - (std::move(lead) - without_p[j]);
    }
    Rational offset_sum(0);
    for (Player k : players_of(comp)) offset_sum += gamma[k];
    Rational share = (worth_of(comp, g) - offset_sum) / Rational(popcount(comp));
    for (Player i : players_of(comp)) out[i] = share + gamma[i];
  }

  const Allocation& solve_removed(const Network& g, Player p) {
    LinkMask m = g.link_mask().without(LinkMask::incident(p));
    auto hit = cache_.find(m);
    if (hit != cache_.end()) return hit->second;
    Network sub = Network::from_mask(players_, m);
    return solve(sub);
  }

  Rational worth_of(PlayerMask comp, const Network& g) {
    try {
      return w_.eval_unchecked(comp, g);
    } catch (const std::exception& e) {
      throw std::domain_error(std::string(e.what()) + " [while evaluating w(" +
                              subset_to_string(comp) + ", " + network_to_string(g) + ")]");
    }
  }

  const WorthFunction& w_;
  PlayerSet players_;
  AllocationByMask& cache_;
};

}  // namespace

Allocation bce(const WorthFunction& w, const Network& g, AllocationByMask* cache) {
  if (g.players() != w.players()) {
    throw std::domain_error("network is on the wrong player set for this worth function");
  }
  AllocationByMask local;
  BceSolver solver(w, cache ? *cache : local);
  return solver.solve(g);
}

Allocation bce_with_forest(const WorthFunction& w, const Network& g,
                           const std::vector<Link>& forest) {
  if (g.players() != w.players()) {
    throw std::domain_error("network is on the wrong player set for this worth function");
  }
  for (const Link& l : forest) {
    if (!g.has_link(l.a, l.b)) {
      throw std::domain_error("forest link {" + std::to_string(l.a) + "," + std::to_string(l.b) +
                              "} is not a link of the network");
    }
  }
  Network f(g.players(), forest);
  Partition comps = components(g);
  if (!(components(f) == comps)) {
    throw std::domain_error("forest does not span every component of the network");
  }
  int expected = 0;
  for (PlayerMask c : comps.blocks()) expected += popcount(c) - 1;
  if (f.link_count() != expected) {
    throw std::domain_error("spanning forest must have exactly |C|-1 links per component");
  }
  AllocationByMask local;
  BceSolver solver(w, local);
  return solver.solve_with_forest(g, f);
}

// --- the FCE rule -------------------------------------------------------------

Allocation fce_formula(const WorthFunction& w, const Network& g, FceCache* cache) {
  if (g.players() != w.players()) {
    throw std::domain_error("network is on the wrong player set for this worth function");
  }
  if (cache) {
    auto hit = cache->alloc.find(g.link_mask());
    if (hit != cache->alloc.end()) return hit->second;
  }
  const EmbeddedCoalitionSpace& space = EmbeddedCoalitionSpace::get(g.player_count());
  std::vector<Rational> dense =
      pff_from_projected_dense(w, g, space, cache ? &cache->nets : nullptr);
  dividends_in_place(space, dense);
  Allocation out = distribute_dividends(space, dense);
  if (cache) cache->alloc.emplace(g.link_mask(), out);
  return out;
}

namespace {

class FceDirectSolver {
 public:
  FceDirectSolver(const WorthFunction& w, AllocationByMask& cache)
      : w_(w), players_(w.players()), cache_(cache) {}

  const Allocation& solve(const Network& h) {
    auto hit = cache_.find(h.link_mask());
    if (hit != cache_.end()) return hit->second;
    Allocation out(players_);
    for (PlayerMask comp : components(h).blocks()) {
      if (popcount(comp) == 1) {
        out[min_player(comp)] = w_.eval_unchecked(comp, h);
        continue;
      }
      BfsTree tree = minimal_index_bfs(h, comp);
      std::vector<Rational> delta(players_.n + 1);
      for (std::size_t k = 1; k < tree.order.size(); ++k) {
        Player j = tree.order[k];
        Player pj = tree.parent_of(j);
        // fairness against deleting the single link {j, p(j)}
        LinkMask m = h.link_mask().without(LinkMask::of(Link(j, pj)));
        const Allocation* cut;
        auto sub = cache_.find(m);
        if (sub != cache_.end()) {
          cut = &sub->second;
        } else {
          Network less = Network::from_mask(players_, m);
          cut = &solve(less);
        }
        delta[j] = delta[pj] + ((*cut)[j] - (*cut)[pj]);
      }
      Rational delta_sum(0);
      for (Player k : players_of(comp)) delta_sum += delta[k];
      Rational share = (w_.eval_unchecked(comp, h) - delta_sum) / Rational(popcount(comp));
      for (Player i : players_of(comp)) out[i] = share + delta[i];
    }
    return cache_.emplace(h.link_mask(), std::move(out)).first->second;
  }

 private:
  const WorthFunction& w_;
  PlayerSet players_;
  AllocationByMask& cache_;
};

}  // namespace

Allocation fce_direct(const WorthFunction& w, const Network& g, int link_cap,
                      AllocationByMask* cache) {
  if (g.players() != w.players()) {
    throw std::domain_error("network is on the wrong player set for this worth function");
  }
  if (g.link_count() > link_cap) {
    throw resource_limit_error("fce_direct recurses over 2^" + std::to_string(g.link_count()) +
                               " link subsets, over the link cap " + std::to_string(link_cap));
  }
  AllocationByMask local;
  FceDirectSolver solver(w, cache ? *cache : local);
  return solver.solve(g);
}

// --- oracle: full overdetermined systems, solved independently ----------------

namespace {

struct EchelonResult {
  std::vector<Rational> solution;
  int rank = 0;
  bool consistent = true;
  std::string detail;
};

// Fraction-free (Bareiss) elimination over Bigint rows, then exact back
// substitution. Rows are [coefficients | rhs].
EchelonResult solve_exact(std::vector<std::vector<Rational>> rows, int unknowns) {
  int n_rows = static_cast<int>(rows.size());
  // clear denominators row by row
  std::vector<std::vector<Bigint>> m(n_rows, std::vector<Bigint>(unknowns + 1));
  for (int r = 0; r < n_rows; ++r) {
    Bigint lcm(1);
    for (const Rational& x : rows[r]) {
      Bigint g = Bigint::gcd(lcm, x.den());
      lcm = lcm / g * x.den();
    }
    for (int c = 0; c <= unknowns; ++c) {
      m[r][c] = rows[r][c].num() * (lcm / rows[r][c].den());
    }
  }
  EchelonResult res;
  std::vector<int> pivot_col;
  Bigint prev(1);
  int rank = 0;
  for (int col = 0; col <= unknowns - 1 && rank < n_rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < n_rows; ++r) {
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = rank + 1; r < n_rows; ++r) {
      for (int c = col + 1; c <= unknowns; ++c) {
        // Sylvester's identity makes this division exact; a remainder would
        // mean corrupted elimination, so it is checked rather than trusted
        Bigint q, rem;
        Bigint::divmod(m[rank][col] * m[r][c] - m[r][col] * m[rank][c], prev, q, rem);
        if (!rem.is_zero()) throw std::logic_error("fraction-free elimination lost exactness");
        m[r][c] = std::move(q);
      }
      m[r][col] = Bigint(0);
    }
    prev = m[rank][col];
    pivot_col.push_back(col);
    ++rank;
  }
  res.rank = rank;
  for (int r = rank; r < n_rows; ++r) {
    if (!m[r][unknowns].is_zero()) {
      res.consistent = false;
      res.detail = "an equation reduces to 0 = " + m[r][unknowns].to_string();
      break;
    }
  }
  // back substitution on the pivot rows; free unknowns (if any) are set to 0
  res.solution.assign(unknowns, Rational(0));
  for (int k = rank - 1; k >= 0; --k) {
    int col = pivot_col[k];
    Rational acc(m[k][unknowns], Bigint(1));
    for (int c = col + 1; c < unknowns; ++c) {
      acc -= Rational(m[k][c], Bigint(1)) * res.solution[c];
    }
    res.solution[col] = acc / Rational(m[k][col], Bigint(1));
  }
  return res;
}

class OracleSolver {
 public:
  OracleSolver(const WorthFunction& w, EqualGainsAxiom axiom)
      : w_(w), players_(w.players()), axiom_(axiom) {}

  const Allocation& solve(const Network& h) {
    auto hit = memo_.find(h.link_mask());
    if (hit != memo_.end()) return hit->second;
    Allocation out(players_);
    for (PlayerMask comp : components(h).blocks()) {
      if (popcount(comp) == 1) {
        out[min_player(comp)] = w_.eval_unchecked(comp, h);
        continue;
      }
      solve_component(h, comp, out);
    }
    ++solved_;
    return memo_.emplace(h.link_mask(), std::move(out)).first->second;
  }

  bool consistent = true;
  bool full_rank = true;
  std::string issue;
  int solved_count() const { return solved_; }

 private:
  void solve_component(const Network& h, PlayerMask comp, Allocation& out) {
    std::vector<Player> members = players_of(comp);
    int m = static_cast<int>(members.size());
    std::vector<int> col(players_.n + 1, -1);
    for (int i = 0; i < m; ++i) col[members[i]] = i;

    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> ce(m + 1, Rational(1));
    ce[m] = w_.eval_unchecked(comp, h);
    rows.push_back(std::move(ce));
    for (const Link& l : h.links()) {
      if ((player_bit(l.a) & comp) == 0 || (player_bit(l.b) & comp) == 0) continue;
      Rational rhs;
      if (axiom_ == EqualGainsAxiom::balanced_contributions) {
        // x_a - x_b = phi_a(h_-b) - phi_b(h_-a)
        Rational first = at_removed(h, l.b)[l.a];
        rhs = std::move(first) - at_removed(h, l.a)[l.b];
      } else {
        // x_a - x_b = phi_a(h \ {a,b}) - phi_b(h \ {a,b})
        const Allocation& cut = at_mask(h.link_mask().without(LinkMask::of(l)));
        rhs = cut[l.a] - cut[l.b];
      }
      std::vector<Rational> row(m + 1, Rational(0));
      row[col[l.a]] = Rational(1);
      row[col[l.b]] = Rational(-1);
      row[m] = std::move(rhs);
      rows.push_back(std::move(row));
    }

    EchelonResult res = solve_exact(std::move(rows), m);
    if (!res.consistent && consistent) {
      consistent = false;
      issue = "inconsistent system for component " + subset_to_string(comp) + " at " +
              network_to_string(h) + ": " + res.detail;
    }
    if (res.rank < m && full_rank) {
      full_rank = false;
      if (issue.empty()) {
        issue = "rank-deficient system (" + std::to_string(res.rank) + " of " + std::to_string(m) +
                ") for component " + subset_to_string(comp) + " at " + network_to_string(h);
      }
    }
    for (int i = 0; i < m; ++i) out[members[i]] = res.solution[i];
  }

  const Allocation& at_removed(const Network& h, Player p) {
    return at_mask(h.link_mask().without(LinkMask::incident(p)));
  }

  const Allocation& at_mask(LinkMask m) {
    auto hit = memo_.find(m);
    if (hit != memo_.end()) return hit->second;
    Network sub = Network::from_mask(players_, m);
    return solve(sub);
  }

  const WorthFunction& w_;
  PlayerSet players_;
  EqualGainsAxiom axiom_;
  AllocationByMask memo_;
  int solved_ = 0;
};

}  // namespace

OracleReport oracle_solve(const WorthFunction& w, const Network& g, EqualGainsAxiom axiom,
                          int link_cap) {
  if (g.players() != w.players()) {
    throw std::domain_error("network is on the wrong player set for this worth function");
  }
  if (axiom == EqualGainsAxiom::fairness && g.link_count() > link_cap) {
    throw resource_limit_error("fairness oracle recurses over 2^" +
                               std::to_string(g.link_count()) + " link subsets, over the cap " +
                               std::to_string(link_cap));
  }
  OracleSolver solver(w, axiom);
  OracleReport report{solver.solve(g), true, true, 0, ""};
  report.consistent = solver.consistent;
  report.full_rank = solver.full_rank;
  report.networks_solved = solver.solved_count();
  report.issue = solver.issue;
  return report;
}

}  // namespace coopnet
