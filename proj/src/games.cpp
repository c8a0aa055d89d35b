#include "coopnet/games.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>
#include <set>
#include <stdexcept>

#include "coopnet/errors.hpp"

namespace coopnet {

TuGame::TuGame(PlayerSet players, const std::vector<std::pair<PlayerMask, Rational>>& worths)
    : players_(players) {
  for (const auto& [coalition, worth] : worths) set(coalition, worth);
}

void TuGame::set(PlayerMask coalition, Rational worth) {
  if ((coalition & ~players_.all()) != 0) {
    throw std::domain_error("coalition " + subset_to_string(coalition) + " has unknown players");
  }
  if (coalition == 0) {
    if (!worth.is_zero()) throw std::domain_error("the empty coalition's worth must be 0");
    return;
  }
  if (worth.is_zero()) {
    worths_.erase(coalition);
  } else {
    worths_[coalition] = std::move(worth);
  }
}

Rational TuGame::value(PlayerMask coalition) const {
  if ((coalition & ~players_.all()) != 0) {
    throw std::domain_error("coalition " + subset_to_string(coalition) + " has unknown players");
  }
  auto it = worths_.find(coalition);
  return it == worths_.end() ? Rational(0) : it->second;
}

EmbeddedCoalition::EmbeddedCoalition(PlayerMask c, Partition p)
    : coalition(c), partition(std::move(p)) {
  if (!partition.has_block(coalition)) {
    throw std::domain_error("coalition " + subset_to_string(coalition) + " is not a block of " +
                            partition_to_string(partition));
  }
}

std::string embedded_to_string(const EmbeddedCoalition& ec) {
  return "(" + subset_to_string(ec.coalition) + " | " + partition_to_string(ec.partition) + ")";
}

void PffGame::set(const EmbeddedCoalition& ec, Rational worth) {
  if (ec.partition.players() != players_) {
    throw std::domain_error("embedded coalition is on the wrong player set");
  }
  Key key{ec.partition.blocks(), ec.coalition};
  if (worth.is_zero()) {
    worths_.erase(key);
  } else {
    worths_[key] = std::move(worth);
  }
}

Rational PffGame::value(PlayerMask coalition, const Partition& partition) const {
  if (partition.players() != players_) {
    throw std::domain_error("partition is on the wrong player set");
  }
  if (!partition.has_block(coalition)) {
    throw std::domain_error("coalition " + subset_to_string(coalition) + " is not a block of " +
                            partition_to_string(partition));
  }
  auto it = worths_.find(Key{partition.blocks(), coalition});
  return it == worths_.end() ? Rational(0) : it->second;
}

std::vector<std::pair<EmbeddedCoalition, Rational>> PffGame::entries() const {
  std::vector<std::pair<EmbeddedCoalition, Rational>> out;
  out.reserve(worths_.size());
  for (const auto& [key, worth] : worths_) {
    out.emplace_back(EmbeddedCoalition(key.coalition, Partition(players_, key.blocks)), worth);
  }
  return out;
}

// --- worth function implementations -----------------------------------------

class WorthFunction::Impl {
 public:
  explicit Impl(PlayerSet players) : players_(players) {}
  virtual ~Impl() = default;
  virtual Rational eval(PlayerMask c, const Network& g) const = 0;
  virtual std::string describe() const = 0;
  virtual const PffGame* as_pff() const { return nullptr; }
  virtual const TuGame* as_tu() const { return nullptr; }
  const PlayerSet& players() const { return players_; }

 private:
  PlayerSet players_;
};

namespace {

class TableWorth final : public WorthFunction::Impl {
 public:
  TableWorth(PlayerSet players, std::vector<WorthTableEntry> entries) : Impl(players) {
    std::set<std::pair<PlayerMask, LinkMask>> seen;
    for (WorthTableEntry& e : entries) {
      if (e.network.players() != players) {
        throw std::domain_error("worth table entry network is on the wrong player set");
      }
      if (!components(e.network).has_block(e.component)) {
        throw std::domain_error("worth table entry: " + subset_to_string(e.component) +
                                " is not a component of " + network_to_string(e.network));
      }
      auto key = std::make_pair(e.component, e.network.link_mask());
      if (!seen.insert(key).second) {
        throw std::domain_error("worth table has a duplicate entry for " +
                                subset_to_string(e.component) + " at " +
                                network_to_string(e.network));
      }
      if (!e.worth.is_zero()) map_.emplace(key, std::move(e.worth));
    }
  }

  Rational eval(PlayerMask c, const Network& g) const override {
    auto it = map_.find(std::make_pair(c, g.link_mask()));
    return it == map_.end() ? Rational(0) : it->second;
  }

  std::string describe() const override {
    return "worth-table(" + std::to_string(map_.size()) + " entries)";
  }

 private:
  std::map<std::pair<PlayerMask, LinkMask>, Rational> map_;
};

class TuWorth final : public WorthFunction::Impl {
 public:
  TuWorth(TuGame game) : Impl(game.players()), game_(std::move(game)) {}
  Rational eval(PlayerMask c, const Network&) const override { return game_.value(c); }
  std::string describe() const override { return "tu-induced"; }
  const TuGame* as_tu() const override { return &game_; }

 private:
  TuGame game_;
};

class PffWorth final : public WorthFunction::Impl {
 public:
  PffWorth(PffGame game) : Impl(game.players()), game_(std::move(game)) {}
  Rational eval(PlayerMask c, const Network& g) const override {
    return game_.value(c, components(g));
  }
  std::string describe() const override { return "pff-induced"; }
  const PffGame* as_pff() const override { return &game_; }

 private:
  PffGame game_;
};

class LinkedBeneficiaryWorth final : public WorthFunction::Impl {
 public:
  LinkedBeneficiaryWorth(PlayerSet players, Player beneficiary, Link pair)
      : Impl(players), beneficiary_(beneficiary), pair_(pair) {
    if (!players.contains(beneficiary) || !players.contains(pair.a) || !players.contains(pair.b)) {
      throw std::domain_error("linked-beneficiary players out of range");
    }
  }

  Rational eval(PlayerMask c, const Network& g) const override {
    if ((c & player_bit(beneficiary_)) == 0) return Rational(0);
    return same_component(g, pair_.a, pair_.b) ? Rational(1) : Rational(0);
  }

  std::string describe() const override {
    return "linked-beneficiary(" + std::to_string(beneficiary_) + ";{" + std::to_string(pair_.a) +
           "," + std::to_string(pair_.b) + "})";
  }

  Player beneficiary() const { return beneficiary_; }
  Link pair() const { return pair_; }

 private:
  Player beneficiary_;
  Link pair_;
};

class SeededWorth final : public WorthFunction::Impl {
 public:
  SeededWorth(PlayerSet players, std::uint64_t seed, bool externality_free)
      : Impl(players), seed_(seed), externality_free_(externality_free) {}

  Rational eval(PlayerMask c, const Network& g) const override {
    LinkMask m = g.link_mask();
    if (externality_free_) m = m & LinkMask::complete(c);
    std::uint64_t h = hash_combine(seed_, c);
    h = hash_combine(h, m.lo);
    h = hash_combine(h, m.hi);
    return rational_from_hash(h);
  }

  std::string describe() const override {
    return std::string(externality_free_ ? "seeded-local" : "seeded") + "(" +
           std::to_string(seed_) + ")";
  }

 private:
  std::uint64_t seed_;
  bool externality_free_;
};

class CombinationWorth final : public WorthFunction::Impl {
 public:
  CombinationWorth(PlayerSet players, Rational a, WorthFunction wa, Rational b, WorthFunction wb)
      : Impl(players), a_(std::move(a)), wa_(std::move(wa)), b_(std::move(b)), wb_(std::move(wb)) {}

  Rational eval(PlayerMask c, const Network& g) const override {
    return a_ * wa_.eval_unchecked(c, g) + b_ * wb_.eval_unchecked(c, g);
  }

  std::string describe() const override {
    return "combination(" + a_.to_string() + "*" + wa_.describe() + " + " + b_.to_string() + "*" +
           wb_.describe() + ")";
  }

 private:
  Rational a_;
  WorthFunction wa_;
  Rational b_;
  WorthFunction wb_;
};

class ProjectedWorth final : public WorthFunction::Impl {
 public:
  ProjectedWorth(Network g, WorthFunction inner)
      : Impl(inner.players()), g_(std::move(g)), inner_(std::move(inner)) {}

  Rational eval(PlayerMask c, const Network& h) const override {
    Network restricted = restrict_to_partition(g_, components(h));
    Rational total(0);
    PlayerMask remaining = c;
    while (remaining) {
      PlayerMask piece = player_bit(min_player(remaining));
      PlayerMask frontier = piece;
      while (frontier) {
        PlayerMask next = 0;
        for (PlayerMask m = frontier; m; m &= m - 1) {
          next |= g_.adjacency(std::countr_zero(m) + 1);
        }
        next &= c & ~piece;
        piece |= next;
        frontier = next;
      }
      total += inner_.eval_unchecked(piece, restricted);
      remaining &= ~piece;
    }
    return total;
  }

  std::string describe() const override { return "projected(" + inner_.describe() + ")"; }

 private:
  Network g_;
  WorthFunction inner_;
};

class PermutedWorth final : public WorthFunction::Impl {
 public:
  PermutedWorth(Permutation pi, WorthFunction inner)
      : Impl(inner.players()), inverse_(pi.inverse()), inner_(std::move(inner)) {}

  Rational eval(PlayerMask c, const Network& g) const override {
    return inner_.eval_unchecked(inverse_.apply(c), apply_permutation(g, inverse_));
  }

  std::string describe() const override { return "permuted(" + inner_.describe() + ")"; }

 private:
  Permutation inverse_;
  WorthFunction inner_;
};

}  // namespace

PlayerSet WorthFunction::players() const { return impl_->players(); }

Rational WorthFunction::operator()(PlayerMask component, const Network& g) const {
  if (g.players() != impl_->players()) {
    throw std::domain_error("network is on the wrong player set for this worth function");
  }
  if (component == 0 || (component & ~g.players().all()) != 0 ||
      component_of(g, min_player(component)) != component) {
    throw std::domain_error("worth function evaluated outside its domain: " +
                            subset_to_string(component) + " is not a component of " +
                            network_to_string(g));
  }
  return impl_->eval(component, g);
}

Rational WorthFunction::eval_unchecked(PlayerMask component, const Network& g) const {
  return impl_->eval(component, g);
}

std::string WorthFunction::describe() const { return impl_->describe(); }

const void* WorthFunction::impl_id() const { return impl_.get(); }

WorthFunction WorthFunction::zero(PlayerSet players) {
  return table(players, {});
}

WorthFunction WorthFunction::table(PlayerSet players, std::vector<WorthTableEntry> entries) {
  return WorthFunction(std::make_shared<TableWorth>(players, std::move(entries)));
}

WorthFunction WorthFunction::from_tu(TuGame game) {
  return WorthFunction(std::make_shared<TuWorth>(std::move(game)));
}

WorthFunction WorthFunction::from_pff(PffGame game) {
  return WorthFunction(std::make_shared<PffWorth>(std::move(game)));
}

WorthFunction WorthFunction::linked_beneficiary(PlayerSet players, Player beneficiary, Link pair) {
  return WorthFunction(std::make_shared<LinkedBeneficiaryWorth>(players, beneficiary, pair));
}

WorthFunction WorthFunction::seeded(PlayerSet players, std::uint64_t seed, bool externality_free) {
  return WorthFunction(std::make_shared<SeededWorth>(players, seed, externality_free));
}

WorthFunction WorthFunction::combination(Rational a, WorthFunction wa, Rational b, WorthFunction wb) {
  if (wa.players() != wb.players()) {
    throw std::domain_error("combined worth functions must share a player set");
  }
  PlayerSet players = wa.players();
  return WorthFunction(std::make_shared<CombinationWorth>(players, std::move(a), std::move(wa),
                                                          std::move(b), std::move(wb)));
}

WorthFunction WorthFunction::projected(const Network& g) const {
  if (g.players() != players()) {
    throw std::domain_error("projection network is on the wrong player set");
  }
  return WorthFunction(std::make_shared<ProjectedWorth>(g, *this));
}

WorthFunction WorthFunction::permuted(const Permutation& pi) const {
  if (pi.size() != players().n) {
    throw std::domain_error("permutation is on the wrong player set");
  }
  return WorthFunction(std::make_shared<PermutedWorth>(pi, *this));
}

const PffGame* WorthFunction::as_pff() const { return impl_->as_pff(); }

const TuGame* WorthFunction::as_tu() const { return impl_->as_tu(); }

// --- conversions ------------------------------------------------------------

WorthFunction induced_worth_from_pff(PffGame v) { return WorthFunction::from_pff(std::move(v)); }

Network network_with_components(const Partition& p) {
  std::vector<Link> links;
  for (PlayerMask b : p.blocks()) {
    auto ps = players_of(b);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) links.emplace_back(ps[i], ps[i + 1]);
  }
  return Network(p.players(), std::move(links));
}

PffGame pff_from_worth(const WorthFunction& w, bool certified_measurable) {
  if (const PffGame* direct = w.as_pff()) return *direct;
  PlayerSet players = w.players();
  std::vector<Partition> partitions = enumerate_partitions(players);
  PffGame v(players);
  for (const Partition& p : partitions) {
    Network representative = network_with_components(p);
    for (PlayerMask c : p.blocks()) {
      v.set(EmbeddedCoalition(c, p), w.eval_unchecked(c, representative));
    }
  }
  if (!certified_measurable) {
    int pairs = players.n * (players.n - 1) / 2;
    if (players.n > 6) {
      throw resource_limit_error(
          "verifying partition-measurability enumerates 2^" + std::to_string(pairs) +
          " networks; pass certified_measurable for n > 6");
    }
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs); ++m) {
      Network h = Network::from_mask(players, LinkMask{m, 0});
      Partition nh = components(h);
      for (PlayerMask c : nh.blocks()) {
        Rational got = w.eval_unchecked(c, h);
        Rational expected = v.value(c, nh);
        if (got != expected) {
          throw inconsistency_error(
              "worth function is not partition-measurable: w(" + subset_to_string(c) + ", " +
              network_to_string(h) + ") = " + got.to_string() + " but w(" +
              subset_to_string(c) + ", " + network_to_string(network_with_components(nh)) +
              ") = " + expected.to_string() + " although both networks induce " +
              partition_to_string(nh));
        }
      }
    }
  }
  return v;
}

WorthFunction project_worth(const WorthFunction& w, const Network& g) { return w.projected(g); }

namespace {

// calls fn with each connected piece of `subset` under g's adjacency,
// ascending by least member
template <typename Fn>
void for_each_piece(const Network& g, PlayerMask subset, Fn&& fn) {
  PlayerMask remaining = subset;
  while (remaining) {
    PlayerMask piece = player_bit(min_player(remaining));
    PlayerMask frontier = piece;
    while (frontier) {
      PlayerMask next = 0;
      for (PlayerMask m = frontier; m; m &= m - 1) {
        next |= g.adjacency(std::countr_zero(m) + 1);
      }
      next &= subset & ~piece;
      piece |= next;
      frontier = next;
    }
    fn(piece);
    remaining &= ~piece;
  }
}

std::vector<PlayerMask> split_by_graph(const Network& g, PlayerMask subset) {
  std::vector<PlayerMask> pieces;
  for_each_piece(g, subset, [&](PlayerMask piece) { pieces.push_back(piece); });
  return pieces;
}

}  // namespace

PffGame graph_restrict_pff(const PffGame& v, const Network& g, int cap) {
  PlayerSet players = v.players();
  if (g.players() != players) throw std::domain_error("network is on the wrong player set");
  PffGame out(players);
  for (const Partition& q : enumerate_partitions(players, cap)) {
    Partition refined = partition_by_graph(q, g);
    for (PlayerMask c : q.blocks()) {
      Rational total(0);
      for (PlayerMask s : split_by_graph(g, c)) total += v.value(s, refined);
      out.set(EmbeddedCoalition(c, q), std::move(total));
    }
  }
  return out;
}

std::vector<Rational> pff_from_projected_dense(const WorthFunction& w, const Network& g,
                                               const EmbeddedCoalitionSpace& space,
                                               NetworkByMask* net_cache) {
  std::vector<Rational> dense(space.size());
  NetworkByMask local;
  NetworkByMask& nets = net_cache ? *net_cache : local;
  for (int pi = 0; pi < space.partition_count(); ++pi) {
    LinkMask restricted_mask = g.link_mask() & space.partition_internal_links(pi);
    auto it = nets.find(restricted_mask);
    if (it == nets.end()) {
      it = nets.emplace(restricted_mask, Network::from_mask(g.players(), restricted_mask)).first;
    }
    const Network& gp = it->second;
    const Partition& p = space.partition(pi);
    for (PlayerMask c : p.blocks()) {
      Rational total(0);
      for_each_piece(g, c, [&](PlayerMask s) { total += w.eval_unchecked(s, gp); });
      dense[space.index_of(c, pi)] = std::move(total);
    }
  }
  return dense;
}

PffGame pff_from_projected(const WorthFunction& w, const Network& g, int cap) {
  PlayerSet players = w.players();
  if (g.players() != players) throw std::domain_error("network is on the wrong player set");
  if (players.n > cap) {
    throw resource_limit_error("pff_from_projected for n=" + std::to_string(players.n) +
                               " exceeds cap " + std::to_string(cap));
  }
  const EmbeddedCoalitionSpace& space = EmbeddedCoalitionSpace::get(players.n);
  std::vector<Rational> dense = pff_from_projected_dense(w, g, space, nullptr);
  PffGame out(players);
  for (int i = 0; i < space.size(); ++i) {
    if (!dense[i].is_zero()) out.set(space.embedded(i), dense[i]);
  }
  return out;
}

TuGame graph_restrict_tu(const TuGame& v, const Network& g) {
  if (g.players() != v.players()) throw std::domain_error("network is on the wrong player set");
  TuGame out(v.players());
  for (PlayerMask s = 1; s <= v.players().all(); ++s) {
    Rational total(0);
    for (PlayerMask piece : split_by_graph(g, s)) total += v.value(piece);
    out.set(s, std::move(total));
  }
  return out;
}

TuGame jw_tu_game(const WorthFunction& w, const Network& g) {
  if (g.players() != w.players()) throw std::domain_error("network is on the wrong player set");
  PlayerSet players = w.players();
  TuGame out(players);
  for (PlayerMask s = 1; s <= players.all(); ++s) {
    Network cut = remove_players(g, players.all() & ~s);
    Rational total(0);
    for (PlayerMask piece : split_by_graph(g, s)) total += w.eval_unchecked(piece, cut);
    out.set(s, std::move(total));
  }
  return out;
}

TuGame ef_tu_game(const PffGame& v) {
  PlayerSet players = v.players();
  TuGame out(players);
  for (PlayerMask s = 1; s <= players.all(); ++s) {
    std::vector<PlayerMask> blocks{s};
    for (Player p : players_of(players.all() & ~s)) blocks.push_back(player_bit(p));
    out.set(s, v.value(s, Partition(players, std::move(blocks))));
  }
  return out;
}

TuGame ef_tu_game(const WorthFunction& w) {
  PlayerSet players = w.players();
  TuGame out(players);
  for (PlayerMask s = 1; s <= players.all(); ++s) {
    out.set(s, w.eval_unchecked(s, Network::complete_on(players, s)));
  }
  return out;
}

ExternalityCheck is_externality_free(const WorthFunction& w, const Network& g, int link_cap) {
  if (g.players() != w.players()) throw std::domain_error("network is on the wrong player set");
  int link_count = g.link_count();
  if (link_count > link_cap) {
    throw resource_limit_error("externality check enumerates 2^" + std::to_string(link_count) +
                               " subnetworks, over the link cap " + std::to_string(link_cap));
  }
  const std::vector<Link>& links = g.links();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << link_count); ++bits) {
    std::vector<Link> chosen;
    for (int i = 0; i < link_count; ++i) {
      if ((bits >> i) & 1) chosen.push_back(links[i]);
    }
    Network h(g.players(), std::move(chosen));
    for (PlayerMask c : components(h).blocks()) {
      Network cut = Network::from_mask(g.players(), h.link_mask() & LinkMask::complete(c));
      if (w.eval_unchecked(c, h) != w.eval_unchecked(c, cut)) {
        return ExternalityCheck{false, std::make_pair(c, h)};
      }
    }
  }
  return ExternalityCheck{true, std::nullopt};
}

// --- embedded-coalition space -----------------------------------------------

EmbeddedCoalitionSpace::EmbeddedCoalitionSpace(int n) : n_(n) {
  PlayerSet players(n);
  partitions_ = enumerate_partitions(players, kDefaultPffPlayerCap);
  internal_.reserve(partitions_.size());
  first_entry_.reserve(partitions_.size());
  for (int pi = 0; pi < static_cast<int>(partitions_.size()); ++pi) {
    const Partition& p = partitions_[pi];
    partition_lookup_.emplace(p.blocks(), pi);
    LinkMask internal;
    first_entry_.push_back(static_cast<int>(entries_.size()));
    for (PlayerMask b : p.blocks()) {
      internal = internal | LinkMask::complete(b);
      entries_.push_back(Entry{b, pi, popcount(b), p.block_count()});
    }
    internal_.push_back(internal);
  }
  order_.resize(entries_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  std::sort(order_.begin(), order_.end(), [this](int a, int b) {
    const Entry& ea = entries_[a];
    const Entry& eb = entries_[b];
    if (ea.coalition_size != eb.coalition_size) return ea.coalition_size < eb.coalition_size;
    if (ea.block_count != eb.block_count) return ea.block_count > eb.block_count;
    return a < b;
  });
  if (n <= 7) {
    // precompute strict predecessor lists from the pairwise refinement relation
    std::vector<std::vector<int>> refining(partitions_.size());
    for (int pi = 0; pi < static_cast<int>(partitions_.size()); ++pi) {
      for (int qi = 0; qi < static_cast<int>(partitions_.size()); ++qi) {
        if (partitions_[pi].refines(partitions_[qi])) refining[qi].push_back(pi);
      }
    }
    predecessors_.resize(entries_.size());
    for (int idx = 0; idx < static_cast<int>(entries_.size()); ++idx) {
      const Entry& e = entries_[idx];
      for (int pi : refining[e.partition_index]) {
        for (PlayerMask c : partitions_[pi].blocks()) {
          if ((c & ~e.coalition) != 0) continue;
          int pidx = index_of(c, pi);
          if (pidx != idx) predecessors_[idx].push_back(pidx);
        }
      }
    }
  }
}

const EmbeddedCoalitionSpace& EmbeddedCoalitionSpace::get(int n) {
  if (n < 1 || n > kDefaultPffPlayerCap) {
    throw resource_limit_error("embedded coalitions are enumerated only for 1 <= n <= " +
                               std::to_string(kDefaultPffPlayerCap));
  }
  static std::array<std::unique_ptr<EmbeddedCoalitionSpace>, kDefaultPffPlayerCap + 1> cache;
  static std::array<std::once_flag, kDefaultPffPlayerCap + 1> flags;
  std::call_once(flags[n], [n] { cache[n].reset(new EmbeddedCoalitionSpace(n)); });
  return *cache[n];
}

EmbeddedCoalition EmbeddedCoalitionSpace::embedded(int idx) const {
  const Entry& e = entries_[idx];
  return EmbeddedCoalition(e.coalition, partitions_[e.partition_index]);
}

int EmbeddedCoalitionSpace::partition_index(const Partition& p) const {
  auto it = partition_lookup_.find(p.blocks());
  if (it == partition_lookup_.end()) throw std::domain_error("unknown partition");
  return it->second;
}

int EmbeddedCoalitionSpace::index_of(PlayerMask coalition, int pi) const {
  const auto& blocks = partitions_[pi].blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i] == coalition) return first_entry_[pi] + static_cast<int>(i);
  }
  throw std::domain_error("coalition " + subset_to_string(coalition) + " is not a block of " +
                          partition_to_string(partitions_[pi]));
}

void EmbeddedCoalitionSpace::for_each_predecessor(int idx, const std::function<void(int)>& fn) const {
  if (!predecessors_.empty()) {
    for (int p : predecessors_[idx]) fn(p);
    return;
  }
  // lazily enumerate refinements of Q as products of per-block partitions
  const Entry& e = entries_[idx];
  const Partition& q = partitions_[e.partition_index];
  const auto& qblocks = q.blocks();
  std::vector<std::vector<std::vector<PlayerMask>>> per_block;
  per_block.reserve(qblocks.size());
  for (PlayerMask b : qblocks) {
    std::vector<std::vector<PlayerMask>> parts;
    auto members = players_of(b);
    std::vector<int> rgs(members.size(), 0);
    while (true) {
      int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
      std::vector<PlayerMask> blocks_masks(blocks, 0);
      for (std::size_t i = 0; i < members.size(); ++i) blocks_masks[rgs[i]] |= player_bit(members[i]);
      parts.push_back(std::move(blocks_masks));
      int i = static_cast<int>(members.size()) - 1;
      for (; i > 0; --i) {
        int prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
        if (rgs[i] <= prefix_max) break;
      }
      if (i == 0) break;
      ++rgs[i];
      std::fill(rgs.begin() + i + 1, rgs.end(), 0);
    }
    per_block.push_back(std::move(parts));
  }
  std::vector<PlayerMask> acc;
  std::vector<int> choice(qblocks.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t bi) {
    if (bi == qblocks.size()) {
      std::vector<PlayerMask> sorted = acc;
      std::sort(sorted.begin(), sorted.end(),
                [](PlayerMask a, PlayerMask b) { return std::countr_zero(a) < std::countr_zero(b); });
      auto it = partition_lookup_.find(sorted);
      int pi = it->second;
      std::size_t t_pos = 0;
      for (std::size_t i = 0; i < qblocks.size(); ++i) {
        if (qblocks[i] == e.coalition) {
          t_pos = i;
          break;
        }
      }
      for (PlayerMask c : per_block[t_pos][static_cast<std::size_t>(choice[t_pos])]) {
        int pidx = index_of(c, pi);
        if (pidx != idx) fn(pidx);
      }
      return;
    }
    for (std::size_t k = 0; k < per_block[bi].size(); ++k) {
      choice[bi] = static_cast<int>(k);
      std::size_t before = acc.size();
      acc.insert(acc.end(), per_block[bi][k].begin(), per_block[bi][k].end());
      rec(bi + 1);
      acc.resize(before);
    }
  };
  rec(0);
}

// --- deterministic hashing ---------------------------------------------------

std::uint64_t mix_hash(std::uint64_t h) {
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix_hash(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 12) + (a >> 7)));
}

Rational rational_from_hash(std::uint64_t h, int max_abs_num, int max_den) {
  long long num = static_cast<long long>(h % (2 * static_cast<unsigned>(max_abs_num) + 1)) - max_abs_num;
  long long den = 1 + static_cast<long long>((h >> 32) % static_cast<unsigned>(max_den));
  return Rational(num, den);
}

}  // namespace coopnet
