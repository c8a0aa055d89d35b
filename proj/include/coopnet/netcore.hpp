#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace coopnet {

// Players are labeled 1..n. A subset of players is a bitmask with bit (p-1)
// standing for player p.
using Player = int;
using PlayerMask = std::uint32_t;

constexpr int kMaxPlayers = 16;  // structural limit of the bitmask encodings
constexpr int kDefaultPlayerCap = 16;
constexpr int kDefaultPffPlayerCap = 10;
constexpr int kDefaultLinkCap = 20;

constexpr PlayerMask player_bit(Player p) { return PlayerMask{1} << (p - 1); }
PlayerMask mask_of(std::initializer_list<Player> players);
std::vector<Player> players_of(PlayerMask m);
Player min_player(PlayerMask m);  // lowest labeled member; m must be nonempty
int popcount(PlayerMask m);

struct PlayerSet {
  int n = 0;
  explicit PlayerSet(int count, int cap = kDefaultPlayerCap);
  PlayerMask all() const { return (PlayerMask{1} << n) - 1; }
  bool contains(Player p) const { return p >= 1 && p <= n; }
  friend bool operator==(const PlayerSet&, const PlayerSet&) = default;
};

// Unordered link {a,b}; stored with a < b.
struct Link {
  Player a = 0, b = 0;
  Link() = default;
  Link(Player i, Player j);  // normalizes; throws on i == j or nonpositive
  friend bool operator==(const Link&, const Link&) = default;
  friend auto operator<=>(const Link&, const Link&) = default;
};

// Set of links as a 120-bit mask over the pairs of a 16-player universe.
// This is the canonical identity of a network's link set and the key type
// for every memo table.
struct LinkMask {
  std::uint64_t lo = 0, hi = 0;

  static int pair_index(Player i, Player j);
  static LinkMask of(const Link& l) { return single(pair_index(l.a, l.b)); }
  static LinkMask single(int idx);
  // all pairs incident to player p (within the 16-player universe)
  static LinkMask incident(Player p);
  // all pairs inside the given player subset
  static LinkMask complete(PlayerMask members);

  bool test(const Link& l) const;
  bool empty() const { return lo == 0 && hi == 0; }
  int count() const;
  bool contains(const LinkMask& other) const {
    return (other.lo & ~lo) == 0 && (other.hi & ~hi) == 0;
  }
  friend LinkMask operator&(const LinkMask& a, const LinkMask& b) {
    return {a.lo & b.lo, a.hi & b.hi};
  }
  friend LinkMask operator|(const LinkMask& a, const LinkMask& b) {
    return {a.lo | b.lo, a.hi | b.hi};
  }
  LinkMask without(const LinkMask& other) const { return {lo & ~other.lo, hi & ~other.hi}; }
  friend bool operator==(const LinkMask&, const LinkMask&) = default;
  friend auto operator<=>(const LinkMask&, const LinkMask&) = default;
};

struct LinkMaskHash {
  std::size_t operator()(const LinkMask& m) const {
    std::uint64_t h = m.lo * 0x9e3779b97f4a7c15ULL;
    h ^= (m.hi + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h);
  }
};

// Undirected simple graph on players 1..n. Isolated players are first-class
// members: deleting a player's links keeps the player. The canonical form
// (links sorted, endpoints normalized) is the equality and caching key.
class Network {
 public:
  Network(PlayerSet players, std::vector<Link> links);
  static Network empty(PlayerSet players) { return Network(players, {}); }
  static Network complete(PlayerSet players);
  // complete subnetwork on `members`, everyone else isolated
  static Network complete_on(PlayerSet players, PlayerMask members);
  static Network from_mask(PlayerSet players, LinkMask mask);

  const PlayerSet& players() const { return players_; }
  int player_count() const { return players_.n; }
  // ref-qualified so that iterating a temporary's links stays safe
  const std::vector<Link>& links() const& { return links_; }
  std::vector<Link> links() && { return std::move(links_); }
  int link_count() const { return static_cast<int>(links_.size()); }
  const LinkMask& link_mask() const { return mask_; }
  PlayerMask adjacency(Player p) const { return adj_[p - 1]; }
  bool has_link(Player i, Player j) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.players_ == b.players_ && a.mask_ == b.mask_;
  }

 private:
  PlayerSet players_;
  std::vector<Link> links_;
  LinkMask mask_;
  std::vector<PlayerMask> adj_;
};

// Partition of {1..n} into nonempty disjoint blocks, canonically sorted by
// least member.
class Partition {
 public:
  Partition(PlayerSet players, std::vector<PlayerMask> blocks);
  static Partition singletons(PlayerSet players);
  static Partition one_block(PlayerSet players);

  const PlayerSet& players() const { return players_; }
  // ref-qualified so that iterating a temporary's blocks stays safe
  const std::vector<PlayerMask>& blocks() const& { return blocks_; }
  std::vector<PlayerMask> blocks() && { return std::move(blocks_); }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  PlayerMask block_of(Player p) const;
  bool has_block(PlayerMask b) const;
  // true iff every block of *this lies inside a block of coarser
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.players_ == b.players_ && a.blocks_ == b.blocks_;
  }
  friend auto operator<=>(const Partition& a, const Partition& b) {
    return a.blocks_ <=> b.blocks_;
  }

 private:
  PlayerSet players_;
  std::vector<PlayerMask> blocks_;
};

// Breadth-first spanning tree of one component, rooted at the component's
// least player, neighbors visited in increasing label order.
struct BfsTree {
  Player root = 0;
  PlayerMask component = 0;
  std::vector<Player> parent;  // indexed by player-1; 0 for root and non-members
  std::vector<Player> order;   // BFS visitation sequence, starts with root
  Player parent_of(Player p) const { return parent[p - 1]; }
  bool is_tree_link(const Link& l) const;
};

// Cycle as its vertex sequence; consecutive vertices (and last->first) must
// be linked in the host network.
struct Cycle {
  std::vector<Player> vertices;
  int length() const { return static_cast<int>(vertices.size()); }
};

// Bijection on {1..n}.
class Permutation {
 public:
  explicit Permutation(std::vector<Player> images);  // images[i-1] = pi(i)
  static Permutation identity(PlayerSet players);
  static Permutation transposition(PlayerSet players, Player a, Player b);

  int size() const { return static_cast<int>(images_.size()); }
  Player operator()(Player p) const { return images_[p - 1]; }
  Permutation inverse() const;
  // (a.then(b))(i) = b(a(i))
  Permutation then(const Permutation& b) const;
  PlayerMask apply(PlayerMask m) const;

 private:
  std::vector<Player> images_;
};

// --- structural operations ------------------------------------------------

// Partition of the player set into connected components (singletons for
// isolated players).
Partition components(const Network& g);
PlayerMask component_of(const Network& g, Player p);
bool same_component(const Network& g, Player i, Player j);

// Links with both endpoints in S; player set unchanged. Throws if S contains
// an unknown player.
Network induced_subnetwork(const Network& g, PlayerMask s);

// Deletes every link incident to a player in D; removed players stay as
// isolated members.
Network remove_players(const Network& g, PlayerMask d);
Network remove_player(const Network& g, Player p);

// Keeps only links joining players in the same block of P.
Network restrict_to_partition(const Network& g, const Partition& p);

// Refines every block of P into its g-connected pieces.
Partition partition_by_graph(const Partition& p, const Network& g);

// Deterministic BFS spanning tree of component C (|C| >= 2). Throws if C is
// not a component of g or is a singleton.
BfsTree minimal_index_bfs(const Network& g, PlayerMask component);

// The unique cycle formed by non-tree link e plus the tree path between its
// endpoints. Emitted starting at e's smaller endpoint, walking the tree path
// first; the closing edge back to the start is e itself.
Cycle fundamental_cycle(const BfsTree& tree, const Link& e);

// Throws std::domain_error unless z is a genuine cycle of g.
void validate_cycle(const Network& g, const Cycle& z);

Network apply_permutation(const Network& g, const Permutation& pi);
Partition apply_permutation(const Partition& p, const Permutation& pi);

// All partitions of {1..n}, each exactly once, in restricted-growth-string
// order. Guarded by the partition enumeration cap.
std::vector<Partition> enumerate_partitions(PlayerSet players, int cap = kDefaultPffPlayerCap);

// All permutations of {1..n} in lexicographic order.
std::vector<Permutation> enumerate_permutations(PlayerSet players);

// Every simple cycle of g, canonically oriented (least vertex first, smaller
// neighbor second), sorted by (length, vertex sequence). Guarded for n <= 10.
std::vector<Cycle> enumerate_cycles(const Network& g, int cap = 10);

// Every spanning forest of g (one spanning tree per component), as link
// vectors. Intended for small, test-sized networks.
std::vector<std::vector<Link>> enumerate_spanning_forests(const Network& g);

std::string subset_to_string(PlayerMask m);    // "{1,3,4}"
std::string partition_to_string(const Partition& p);
std::string network_to_string(const Network& g);

}  // namespace coopnet
