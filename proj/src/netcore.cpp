#include "coopnet/netcore.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>
#include <stdexcept>

#include "coopnet/errors.hpp"

namespace coopnet {

PlayerMask mask_of(std::initializer_list<Player> players) {
  PlayerMask m = 0;
  for (Player p : players) m |= player_bit(p);
  return m;
}

std::vector<Player> players_of(PlayerMask m) {
  std::vector<Player> out;
  for (PlayerMask rest = m; rest;) {
    int b = std::countr_zero(rest);
    out.push_back(b + 1);
    rest &= rest - 1;
  }
  return out;
}

Player min_player(PlayerMask m) { return std::countr_zero(m) + 1; }

int popcount(PlayerMask m) { return std::popcount(m); }

PlayerSet::PlayerSet(int count, int cap) : n(count) {
  if (count < 1) throw std::domain_error("player set must contain at least one player");
  if (count > kMaxPlayers || count > cap) {
    throw resource_limit_error("player count " + std::to_string(count) + " exceeds cap " +
                               std::to_string(std::min(cap, kMaxPlayers)));
  }
}

Link::Link(Player i, Player j) : a(std::min(i, j)), b(std::max(i, j)) {
  if (i == j) throw std::domain_error("self-loop {" + std::to_string(i) + "," + std::to_string(j) + "}");
  if (a < 1 || b > kMaxPlayers) {
    throw std::domain_error("link endpoint out of range in {" + std::to_string(i) + "," +
                            std::to_string(j) + "}");
  }
}

int LinkMask::pair_index(Player i, Player j) {
  int a = std::min(i, j) - 1, b = std::max(i, j) - 1;
  return b * (b - 1) / 2 + a;
}

LinkMask LinkMask::single(int idx) {
  if (idx < 64) return {std::uint64_t{1} << idx, 0};
  return {0, std::uint64_t{1} << (idx - 64)};
}

LinkMask LinkMask::incident(Player p) {
  static const std::array<LinkMask, kMaxPlayers + 1> table = [] {
    std::array<LinkMask, kMaxPlayers + 1> t{};
    for (Player i = 1; i <= kMaxPlayers; ++i) {
      for (Player q = 1; q <= kMaxPlayers; ++q) {
        if (q != i) t[i] = t[i] | single(pair_index(i, q));
      }
    }
    return t;
  }();
  return table[p];
}

LinkMask LinkMask::complete(PlayerMask members) {
  LinkMask m;
  auto ps = players_of(members);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      m = m | single(pair_index(ps[i], ps[j]));
    }
  }
  return m;
}

bool LinkMask::test(const Link& l) const {
  int idx = pair_index(l.a, l.b);
  return idx < 64 ? (lo >> idx) & 1 : (hi >> (idx - 64)) & 1;
}

int LinkMask::count() const { return std::popcount(lo) + std::popcount(hi); }

Network::Network(PlayerSet players, std::vector<Link> links)
    : players_(players), links_(std::move(links)), adj_(players.n, 0) {
  std::sort(links_.begin(), links_.end());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (l.b > players_.n) {
      throw std::domain_error("link {" + std::to_string(l.a) + "," + std::to_string(l.b) +
                              "} references a player beyond " + std::to_string(players_.n));
    }
    if (i > 0 && links_[i - 1] == l) {
      throw std::domain_error("duplicate link {" + std::to_string(l.a) + "," + std::to_string(l.b) + "}");
    }
    mask_ = mask_ | LinkMask::of(l);
    adj_[l.a - 1] |= player_bit(l.b);
    adj_[l.b - 1] |= player_bit(l.a);
  }
}

Network Network::complete(PlayerSet players) {
  return complete_on(players, players.all());
}

Network Network::complete_on(PlayerSet players, PlayerMask members) {
  std::vector<Link> links;
  auto ps = players_of(members);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) links.emplace_back(ps[i], ps[j]);
  }
  return Network(players, std::move(links));
}

Network Network::from_mask(PlayerSet players, LinkMask mask) {
  std::vector<Link> links;
  for (Player j = 2; j <= players.n; ++j) {
    for (Player i = 1; i < j; ++i) {
      Link l(i, j);
      if (mask.test(l)) links.push_back(l);
    }
  }
  return Network(players, std::move(links));
}

bool Network::has_link(Player i, Player j) const {
  return i != j && players_.contains(i) && players_.contains(j) &&
         (adj_[i - 1] & player_bit(j)) != 0;
}

Partition::Partition(PlayerSet players, std::vector<PlayerMask> blocks)
    : players_(players), blocks_(std::move(blocks)) {
  PlayerMask seen = 0;
  for (PlayerMask b : blocks_) {
    if (b == 0) throw std::domain_error("partition contains an empty block");
    if (b & seen) throw std::domain_error("partition blocks overlap");
    seen |= b;
  }
  if (seen != players_.all()) throw std::domain_error("partition does not cover the player set");
  std::sort(blocks_.begin(), blocks_.end(),
            [](PlayerMask a, PlayerMask b) { return std::countr_zero(a) < std::countr_zero(b); });
}

Partition Partition::singletons(PlayerSet players) {
  std::vector<PlayerMask> blocks;
  for (Player p = 1; p <= players.n; ++p) blocks.push_back(player_bit(p));
  return Partition(players, std::move(blocks));
}

Partition Partition::one_block(PlayerSet players) {
  return Partition(players, {players.all()});
}

PlayerMask Partition::block_of(Player p) const {
  for (PlayerMask b : blocks_) {
    if (b & player_bit(p)) return b;
  }
  throw std::domain_error("player " + std::to_string(p) + " not covered by partition");
}

bool Partition::has_block(PlayerMask b) const {
  return std::find(blocks_.begin(), blocks_.end(), b) != blocks_.end();
}

bool Partition::refines(const Partition& coarser) const {
  for (PlayerMask b : blocks_) {
    if ((b & ~coarser.block_of(min_player(b))) != 0) return false;
  }
  return true;
}

bool BfsTree::is_tree_link(const Link& l) const {
  return parent_of(l.a) == l.b || parent_of(l.b) == l.a;
}

Permutation::Permutation(std::vector<Player> images) : images_(std::move(images)) {
  PlayerMask seen = 0;
  int n = static_cast<int>(images_.size());
  for (Player v : images_) {
    if (v < 1 || v > n || (seen & player_bit(v))) {
      throw std::domain_error("permutation images are not a bijection on 1.." + std::to_string(n));
    }
    seen |= player_bit(v);
  }
}

Permutation Permutation::identity(PlayerSet players) {
  std::vector<Player> im(players.n);
  for (Player p = 1; p <= players.n; ++p) im[p - 1] = p;
  return Permutation(std::move(im));
}

Permutation Permutation::transposition(PlayerSet players, Player a, Player b) {
  Permutation pi = identity(players);
  std::swap(pi.images_[a - 1], pi.images_[b - 1]);
  return pi;
}

Permutation Permutation::inverse() const {
  std::vector<Player> im(images_.size());
  for (Player p = 1; p <= size(); ++p) im[images_[p - 1] - 1] = p;
  return Permutation(std::move(im));
}

Permutation Permutation::then(const Permutation& b) const {
  std::vector<Player> im(images_.size());
  for (Player p = 1; p <= size(); ++p) im[p - 1] = b(images_[p - 1]);
  return Permutation(std::move(im));
}

PlayerMask Permutation::apply(PlayerMask m) const {
  PlayerMask out = 0;
  for (Player p : players_of(m)) out |= player_bit((*this)(p));
  return out;
}

namespace {

PlayerMask flood(const Network& g, Player seed, PlayerMask within) {
  PlayerMask comp = player_bit(seed) & within;
  PlayerMask frontier = comp;
  while (frontier) {
    PlayerMask next = 0;
    for (PlayerMask m = frontier; m; m &= m - 1) {
      next |= g.adjacency(std::countr_zero(m) + 1);
    }
    next &= within & ~comp;
    comp |= next;
    frontier = next;
  }
  return comp;
}

}  // namespace

Partition components(const Network& g) {
  std::vector<PlayerMask> blocks;
  PlayerMask remaining = g.players().all();
  while (remaining) {
    Player seed = min_player(remaining);
    PlayerMask comp = flood(g, seed, g.players().all());
    blocks.push_back(comp);
    remaining &= ~comp;
  }
  return Partition(g.players(), std::move(blocks));
}

PlayerMask component_of(const Network& g, Player p) {
  if (!g.players().contains(p)) throw std::domain_error("player out of range");
  return flood(g, p, g.players().all());
}

bool same_component(const Network& g, Player i, Player j) {
  return (component_of(g, i) & player_bit(j)) != 0;
}

Network induced_subnetwork(const Network& g, PlayerMask s) {
  if ((s & ~g.players().all()) != 0) {
    throw std::domain_error("subset " + subset_to_string(s) + " contains unknown players");
  }
  return Network::from_mask(g.players(), g.link_mask() & LinkMask::complete(s));
}

Network remove_players(const Network& g, PlayerMask d) {
  LinkMask removed;
  for (Player p : players_of(d & g.players().all())) removed = removed | LinkMask::incident(p);
  return Network::from_mask(g.players(), g.link_mask().without(removed));
}

Network remove_player(const Network& g, Player p) { return remove_players(g, player_bit(p)); }

Network restrict_to_partition(const Network& g, const Partition& p) {
  LinkMask kept;
  for (PlayerMask b : p.blocks()) kept = kept | (g.link_mask() & LinkMask::complete(b));
  return Network::from_mask(g.players(), kept);
}

Partition partition_by_graph(const Partition& p, const Network& g) {
  std::vector<PlayerMask> blocks;
  for (PlayerMask b : p.blocks()) {
    PlayerMask remaining = b;
    while (remaining) {
      PlayerMask piece = flood(g, min_player(remaining), b);
      blocks.push_back(piece);
      remaining &= ~piece;
    }
  }
  return Partition(p.players(), std::move(blocks));
}

BfsTree minimal_index_bfs(const Network& g, PlayerMask component) {
  if (!components(g).has_block(component)) {
    throw std::domain_error(subset_to_string(component) + " is not a component of the network");
  }
  if (popcount(component) < 2) {
    throw std::domain_error("BFS tree requires a component with at least two players");
  }
  BfsTree tree;
  tree.root = min_player(component);
  tree.component = component;
  tree.parent.assign(g.player_count(), 0);
  tree.order.push_back(tree.root);
  PlayerMask visited = player_bit(tree.root);
  for (std::size_t head = 0; head < tree.order.size(); ++head) {
    Player i = tree.order[head];
    PlayerMask fresh = g.adjacency(i) & component & ~visited;
    for (Player j : players_of(fresh)) {  // ascending label order
      tree.parent[j - 1] = i;
      tree.order.push_back(j);
      visited |= player_bit(j);
    }
  }
  return tree;
}

Cycle fundamental_cycle(const BfsTree& tree, const Link& e) {
  PlayerMask both = player_bit(e.a) | player_bit(e.b);
  if ((both & ~tree.component) != 0) {
    throw std::domain_error("link endpoints are outside the tree's component");
  }
  if (tree.is_tree_link(e)) {
    throw std::domain_error("{" + std::to_string(e.a) + "," + std::to_string(e.b) +
                            "} is a tree edge, not a chord");
  }
  auto chain_to_root = [&](Player p) {
    std::vector<Player> chain{p};
    while (p != tree.root) {
      p = tree.parent_of(p);
      chain.push_back(p);
    }
    return chain;
  };
  std::vector<Player> chain_a = chain_to_root(e.a);
  PlayerMask on_a = 0;
  for (Player p : chain_a) on_a |= player_bit(p);
  std::vector<Player> chain_b;
  Player x = e.b;
  while ((player_bit(x) & on_a) == 0) {
    chain_b.push_back(x);
    x = tree.parent_of(x);
  }
  Player lca = x;
  Cycle z;
  for (Player p : chain_a) {
    z.vertices.push_back(p);
    if (p == lca) break;
  }
  for (auto it = chain_b.rbegin(); it != chain_b.rend(); ++it) z.vertices.push_back(*it);
  return z;
}

void validate_cycle(const Network& g, const Cycle& z) {
  int len = z.length();
  if (len < 3) throw std::domain_error("a cycle needs at least three vertices");
  PlayerMask seen = 0;
  for (Player p : z.vertices) {
    if (!g.players().contains(p)) throw std::domain_error("cycle vertex out of range");
    if (seen & player_bit(p)) throw std::domain_error("cycle vertices are not distinct");
    seen |= player_bit(p);
  }
  for (int s = 0; s < len; ++s) {
    Player i = z.vertices[s], j = z.vertices[(s + 1) % len];
    if (!g.has_link(i, j)) {
      throw std::domain_error("cycle edge {" + std::to_string(i) + "," + std::to_string(j) +
                              "} is not a link of the network");
    }
  }
}

Network apply_permutation(const Network& g, const Permutation& pi) {
  std::vector<Link> links;
  links.reserve(g.links().size());
  for (const Link& l : g.links()) links.emplace_back(pi(l.a), pi(l.b));
  return Network(g.players(), std::move(links));
}

Partition apply_permutation(const Partition& p, const Permutation& pi) {
  std::vector<PlayerMask> blocks;
  blocks.reserve(p.blocks().size());
  for (PlayerMask b : p.blocks()) blocks.push_back(pi.apply(b));
  return Partition(p.players(), std::move(blocks));
}

std::vector<Partition> enumerate_partitions(PlayerSet players, int cap) {
  if (players.n > cap) {
    throw resource_limit_error("partition enumeration for n=" + std::to_string(players.n) +
                               " exceeds cap " + std::to_string(cap));
  }
  std::vector<Partition> out;
  int n = players.n;
  std::vector<int> rgs(n, 0);
  while (true) {
    int block_count = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<PlayerMask> blocks(block_count, 0);
    for (Player p = 1; p <= n; ++p) blocks[rgs[p - 1]] |= player_bit(p);
    out.emplace_back(players, std::move(blocks));
    // next restricted growth string
    int i = n - 1;
    for (; i > 0; --i) {
      int prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
      if (rgs[i] <= prefix_max) break;
    }
    if (i == 0) break;
    ++rgs[i];
    std::fill(rgs.begin() + i + 1, rgs.end(), 0);
  }
  return out;
}

std::vector<Permutation> enumerate_permutations(PlayerSet players) {
  std::vector<Player> im(players.n);
  for (Player p = 1; p <= players.n; ++p) im[p - 1] = p;
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

namespace {

struct CycleCandidate {
  std::vector<Player> vertices;
  LinkMask edges;
};

// Candidate cycles of the complete graph on n players, canonically oriented
// and deduplicated; a cycle of g is a candidate whose edges all lie in g.
const std::vector<CycleCandidate>& cycle_candidates(int n) {
  static std::array<std::vector<CycleCandidate>, 11> cache;
  static std::array<std::once_flag, 11> flags;
  std::call_once(flags[n], [n] {
    std::vector<CycleCandidate>& list = cache[n];
    for (PlayerMask s = 0; s < (PlayerMask{1} << n); ++s) {
      if (popcount(s) < 3) continue;
      auto ps = players_of(s);
      Player r = ps.front();
      std::vector<Player> rest(ps.begin() + 1, ps.end());
      do {
        if (rest.front() > rest.back()) continue;  // one orientation per cycle
        CycleCandidate c;
        c.vertices.push_back(r);
        c.vertices.insert(c.vertices.end(), rest.begin(), rest.end());
        for (std::size_t i = 0; i < c.vertices.size(); ++i) {
          Player u = c.vertices[i], v = c.vertices[(i + 1) % c.vertices.size()];
          c.edges = c.edges | LinkMask::single(LinkMask::pair_index(u, v));
        }
        list.push_back(std::move(c));
      } while (std::next_permutation(rest.begin(), rest.end()));
    }
    std::sort(list.begin(), list.end(), [](const CycleCandidate& a, const CycleCandidate& b) {
      if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
      return a.vertices < b.vertices;
    });
  });
  return cache[n];
}

}  // namespace

std::vector<Cycle> enumerate_cycles(const Network& g, int cap) {
  if (g.player_count() > cap || g.player_count() > 10) {
    throw resource_limit_error("cycle enumeration for n=" + std::to_string(g.player_count()) +
                               " exceeds cap " + std::to_string(std::min(cap, 10)));
  }
  std::vector<Cycle> out;
  for (const CycleCandidate& c : cycle_candidates(g.player_count())) {
    if (g.link_mask().contains(c.edges)) out.push_back(Cycle{c.vertices});
  }
  return out;
}

std::vector<std::vector<Link>> enumerate_spanning_forests(const Network& g) {
  std::vector<std::vector<std::vector<Link>>> per_component;
  for (PlayerMask comp : components(g).blocks()) {
    int size = popcount(comp);
    if (size < 2) continue;
    std::vector<Link> comp_links;
    for (const Link& l : g.links()) {
      if ((player_bit(l.a) & comp) && (player_bit(l.b) & comp)) comp_links.push_back(l);
    }
    int need = size - 1;
    std::vector<std::vector<Link>> trees;
    std::vector<int> pick(need);
    // all size-(|C|-1) link subsets that connect the component
    auto connects = [&](const std::vector<Link>& chosen) {
      Network t(g.players(), chosen);
      return flood(t, min_player(comp), comp) == comp;
    };
    std::function<void(int, int)> rec = [&](int start, int depth) {
      if (depth == need) {
        std::vector<Link> chosen;
        for (int idx : pick) chosen.push_back(comp_links[idx]);
        if (connects(chosen)) trees.push_back(std::move(chosen));
        return;
      }
      for (int i = start; i < static_cast<int>(comp_links.size()); ++i) {
        pick[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
    per_component.push_back(std::move(trees));
  }
  std::vector<std::vector<Link>> forests{{}};
  for (const auto& trees : per_component) {
    std::vector<std::vector<Link>> next;
    for (const auto& base : forests) {
      for (const auto& tree : trees) {
        std::vector<Link> f = base;
        f.insert(f.end(), tree.begin(), tree.end());
        next.push_back(std::move(f));
      }
    }
    forests = std::move(next);
  }
  for (auto& f : forests) std::sort(f.begin(), f.end());
  return forests;
}

std::string subset_to_string(PlayerMask m) {
  std::string out = "{";
  bool first = true;
  for (Player p : players_of(m)) {
    if (!first) out += ",";
    out += std::to_string(p);
    first = false;
  }
  return out + "}";
}

std::string partition_to_string(const Partition& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.blocks().size(); ++i) {
    if (i) out += ",";
    out += subset_to_string(p.blocks()[i]);
  }
  return out + "}";
}

std::string network_to_string(const Network& g) {
  std::string out = "{";
  for (std::size_t i = 0; i < g.links().size(); ++i) {
    if (i) out += ",";
    out += "{" + std::to_string(g.links()[i].a) + "," + std::to_string(g.links()[i].b) + "}";
  }
  return out + "} on " + std::to_string(g.player_count()) + " players";
}

}  // namespace coopnet
