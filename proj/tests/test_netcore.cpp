#include "coopnet/netcore.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"

#include "coopnet/errors.hpp"
#include "support.hpp"

using namespace coopnet;
using testsupport::Rng;

namespace {

Network net(int n, std::initializer_list<std::pair<int, int>> links) {
  std::vector<Link> ls;
  for (auto [a, b] : links) ls.emplace_back(a, b);
  return Network(PlayerSet(n), std::move(ls));
}

}  // namespace

TEST_CASE("network construction and canonical form") {
  Network g = net(3, {{2, 1}, {1, 3}});
  CHECK(g.links() == std::vector<Link>{Link(1, 2), Link(1, 3)});
  CHECK(g.has_link(2, 1));
  CHECK(!g.has_link(2, 3));
  CHECK_THROWS_AS(net(3, {{1, 1}}), std::domain_error);
  CHECK_THROWS_AS(net(3, {{1, 4}}), std::domain_error);
  CHECK_THROWS_AS(net(3, {{1, 2}, {2, 1}}), std::domain_error);
  CHECK_THROWS_AS(PlayerSet(0), std::domain_error);
  CHECK_THROWS_AS(PlayerSet(17), resource_limit_error);
  CHECK(Network::from_mask(PlayerSet(3), g.link_mask()) == g);
}

TEST_CASE("components") {
  CHECK(components(Network::empty(PlayerSet(3))) ==
        Partition(PlayerSet(3), {mask_of({1}), mask_of({2}), mask_of({3})}));
  CHECK(components(net(4, {{1, 2}, {1, 4}, {3, 4}})) == Partition::one_block(PlayerSet(4)));
  CHECK(components(net(3, {{1, 2}})) == Partition(PlayerSet(3), {mask_of({1, 2}), mask_of({3})}));
  CHECK(same_component(net(3, {{1, 2}}), 1, 2));
  CHECK(!same_component(net(3, {{1, 2}}), 1, 3));
}

TEST_CASE("induced subnetwork") {
  Network g = net(3, {{1, 2}, {2, 3}});
  CHECK(induced_subnetwork(g, mask_of({1, 2})) == net(3, {{1, 2}}));
  CHECK(induced_subnetwork(g, mask_of({1, 3})) == Network::empty(PlayerSet(3)));
  CHECK(induced_subnetwork(g, g.players().all()) == g);
  CHECK_THROWS_AS(induced_subnetwork(g, player_bit(4)), std::domain_error);
}

TEST_CASE("remove players") {
  Network g = net(4, {{1, 2}, {1, 4}, {3, 4}});
  CHECK(remove_players(g, mask_of({3})) == net(4, {{1, 2}, {1, 4}}));
  CHECK(remove_players(g, mask_of({1})) == net(4, {{3, 4}}));
  CHECK(remove_players(g, 0) == g);
  CHECK(remove_player(g, 2).player_count() == 4);  // removed players stay as members

  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Network h = testsupport::random_network(rng, PlayerSet(6));
    PlayerMask d1 = static_cast<PlayerMask>(rng.below(64));
    PlayerMask d2 = static_cast<PlayerMask>(rng.below(64));
    CHECK(remove_players(h, d1 | d2) == remove_players(remove_players(h, d1), d2));
    // deleted players split off; every other piece stays within an original component
    Partition before = components(h);
    for (PlayerMask b : components(remove_players(h, d1)).blocks()) {
      if (b & d1) {
        CHECK(popcount(b) == 1);
      } else {
        CHECK((b & ~before.block_of(min_player(b))) == 0);
      }
    }
  }
}

TEST_CASE("restrict to partition and partition refinement") {
  Network g = net(3, {{1, 2}, {1, 3}});
  Partition p(PlayerSet(3), {mask_of({1, 2}), mask_of({3})});
  CHECK(restrict_to_partition(g, p) == net(3, {{1, 2}}));
  CHECK(restrict_to_partition(g, Partition::one_block(PlayerSet(3))) == g);
  CHECK(restrict_to_partition(g, Partition::singletons(PlayerSet(3))) ==
        Network::empty(PlayerSet(3)));

  CHECK(partition_by_graph(Partition::one_block(PlayerSet(3)), net(3, {{1, 2}})) ==
        Partition(PlayerSet(3), {mask_of({1, 2}), mask_of({3})}));
  Network h = net(3, {{1, 2}});
  CHECK(partition_by_graph(components(h), h) == components(h));
  CHECK(partition_by_graph(p, Network::complete(PlayerSet(3))) == p);

  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    Network k = testsupport::random_network(rng, PlayerSet(6));
    Network other = testsupport::random_network(rng, PlayerSet(6));
    for (const Partition& q : {components(other), Partition::singletons(PlayerSet(6)),
                               Partition::one_block(PlayerSet(6))}) {
      CHECK(partition_by_graph(q, k) == components(restrict_to_partition(k, q)));
    }
  }
}

TEST_CASE("minimal index bfs") {
  BfsTree t1 = minimal_index_bfs(net(3, {{1, 2}, {1, 3}, {2, 3}}), mask_of({1, 2, 3}));
  CHECK(t1.root == 1);
  CHECK(t1.parent_of(2) == 1);
  CHECK(t1.parent_of(3) == 1);
  CHECK(t1.order == std::vector<Player>{1, 2, 3});

  BfsTree t2 = minimal_index_bfs(net(3, {{1, 2}, {2, 3}}), mask_of({1, 2, 3}));
  CHECK(t2.root == 1);
  CHECK(t2.parent_of(2) == 1);
  CHECK(t2.parent_of(3) == 2);

  BfsTree t3 = minimal_index_bfs(net(4, {{2, 4}}), mask_of({2, 4}));
  CHECK(t3.root == 2);
  CHECK(t3.parent_of(4) == 2);

  CHECK_THROWS_AS(minimal_index_bfs(net(3, {{1, 2}}), mask_of({1, 2, 3})), std::domain_error);
  CHECK_THROWS_AS(minimal_index_bfs(net(3, {{1, 2}}), mask_of({3})), std::domain_error);

  // deterministic, bit for bit
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Network g = testsupport::random_network(rng, PlayerSet(7), 40);
    for (PlayerMask comp : components(g).blocks()) {
      if (popcount(comp) < 2) continue;
      BfsTree a = minimal_index_bfs(g, comp);
      BfsTree b = minimal_index_bfs(g, comp);
      CHECK(a.parent == b.parent);
      CHECK(a.order == b.order);
      // parents precede children in the visitation order
      for (std::size_t i = 1; i < a.order.size(); ++i) {
        Player parent = a.parent_of(a.order[i]);
        auto pos = std::find(a.order.begin(), a.order.end(), parent);
        CHECK(pos < a.order.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }
}

TEST_CASE("fundamental cycle") {
  Network triangle = net(3, {{1, 2}, {1, 3}, {2, 3}});
  BfsTree tree = minimal_index_bfs(triangle, mask_of({1, 2, 3}));
  Cycle z = fundamental_cycle(tree, Link(2, 3));
  CHECK(z.vertices == std::vector<Player>{2, 1, 3});
  validate_cycle(triangle, z);
  CHECK_THROWS_AS(fundamental_cycle(tree, Link(1, 2)), std::domain_error);

  Network square = net(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
  BfsTree stree = minimal_index_bfs(net(4, {{1, 2}, {2, 3}, {3, 4}}), mask_of({1, 2, 3, 4}));
  Cycle zs = fundamental_cycle(stree, Link(1, 4));
  CHECK(zs.vertices == std::vector<Player>{1, 2, 3, 4});
  validate_cycle(square, zs);

  Rng rng(14);
  for (int trial = 0; trial < 60; ++trial) {
    Network g = testsupport::random_network(rng, PlayerSet(6), 60);
    for (PlayerMask comp : components(g).blocks()) {
      if (popcount(comp) < 2) continue;
      BfsTree t = minimal_index_bfs(g, comp);
      for (const Link& l : g.links()) {
        if (!(player_bit(l.a) & comp) || t.is_tree_link(l)) continue;
        Cycle c = fundamental_cycle(t, l);
        validate_cycle(g, c);  // distinct, wrap-connected
        CHECK(c.length() >= 3);
        CHECK(c.vertices.front() == l.a);
        CHECK(c.vertices.back() == l.b);
      }
    }
  }
}

TEST_CASE("cycle validation rejects junk") {
  Network g = net(3, {{1, 2}, {1, 3}, {2, 3}});
  CHECK_THROWS_AS(validate_cycle(g, Cycle{{1, 2}}), std::domain_error);
  CHECK_THROWS_AS(validate_cycle(g, Cycle{{1, 2, 2}}), std::domain_error);
  CHECK_THROWS_AS(validate_cycle(net(3, {{1, 2}, {2, 3}}), Cycle{{1, 2, 3}}), std::domain_error);
}

TEST_CASE("permutations") {
  PlayerSet three(3);
  Permutation id = Permutation::identity(three);
  Network g = net(3, {{1, 2}});
  CHECK(apply_permutation(g, id) == g);
  Permutation swap13 = Permutation::transposition(three, 1, 3);
  CHECK(apply_permutation(g, swap13) == net(3, {{2, 3}}));
  CHECK_THROWS_AS(Permutation({1, 1, 2}), std::domain_error);

  Rng rng(15);
  auto perms = enumerate_permutations(PlayerSet(4));
  CHECK(perms.size() == 24);
  Network h = testsupport::random_network(rng, PlayerSet(4));
  for (const auto& p1 : perms) {
    CHECK(apply_permutation(apply_permutation(h, p1), p1.inverse()) == h);
    const Permutation& p2 = perms[rng.below(perms.size())];
    CHECK(apply_permutation(apply_permutation(h, p1), p2) ==
          apply_permutation(h, p1.then(p2)));
    Partition q = components(h);
    CHECK(apply_permutation(q, p1) == components(apply_permutation(h, p1)));
  }
}

TEST_CASE("partition enumeration in restricted growth order") {
  CHECK(enumerate_partitions(PlayerSet(1)).size() == 1);
  auto p3 = enumerate_partitions(PlayerSet(3));
  REQUIRE(p3.size() == 5);
  PlayerSet three(3);
  CHECK(p3[0] == Partition::one_block(three));
  CHECK(p3[1] == Partition(three, {mask_of({1, 2}), mask_of({3})}));
  CHECK(p3[2] == Partition(three, {mask_of({1, 3}), mask_of({2})}));
  CHECK(p3[3] == Partition(three, {mask_of({1}), mask_of({2, 3})}));
  CHECK(p3[4] == Partition::singletons(three));
  CHECK(enumerate_partitions(PlayerSet(4)).size() == 15);
  CHECK(enumerate_partitions(PlayerSet(6)).size() == 203);
  CHECK_THROWS_AS(enumerate_partitions(PlayerSet(11), 10), resource_limit_error);

  // every partition is realizable as the component structure of a network
  for (const Partition& p : enumerate_partitions(PlayerSet(5))) {
    CHECK(components(network_with_components(p)) == p);
  }
}

TEST_CASE("cycle enumeration") {
  CHECK(enumerate_cycles(net(3, {{1, 2}, {1, 3}, {2, 3}})).size() == 1);
  CHECK(enumerate_cycles(net(3, {{1, 2}, {2, 3}})).empty());
  CHECK(enumerate_cycles(net(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}})).size() == 1);
  CHECK(enumerate_cycles(Network::complete(PlayerSet(4))).size() == 7);
  CHECK(enumerate_cycles(Network::complete(PlayerSet(6))).size() == 197);
  for (const Cycle& z : enumerate_cycles(Network::complete(PlayerSet(5)))) {
    validate_cycle(Network::complete(PlayerSet(5)), z);
  }
}

TEST_CASE("spanning forest enumeration") {
  CHECK(enumerate_spanning_forests(net(3, {{1, 2}, {1, 3}, {2, 3}})).size() == 3);
  CHECK(enumerate_spanning_forests(Network::complete(PlayerSet(4))).size() == 16);
  CHECK(enumerate_spanning_forests(Network::empty(PlayerSet(3))).size() == 1);  // empty forest
  auto forests = enumerate_spanning_forests(net(5, {{1, 2}, {3, 4}, {4, 5}, {3, 5}}));
  CHECK(forests.size() == 3);  // one tree choice for {1,2}, three for the triangle
  for (const auto& f : forests) CHECK(f.size() == 3);
}
