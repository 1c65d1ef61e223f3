#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include <pgame/arena.hpp>

#include "fixtures.hpp"

using namespace pgame;

TEST_CASE("builder produces a consistent arena")
{
  ParityGame g = fixtures::fig1();
  REQUIRE(g.node_count() == 7);
  REQUIRE(g.edge_count() == 9);
  REQUIRE(g.semantics() == Semantics::min);
  REQUIRE(g.is_canonical());
  REQUIRE(g.max_priority() == 5);
  REQUIRE(g.min_priority() == 1);
  REQUIRE(g.owner(0) == 0);
  REQUIRE(g.owner(2) == 1);
  REQUIRE(g.priority(1) == 1);
  REQUIRE(g.name(6) == "q6");

  // the predecessor lists are exactly the transposed successor lists
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fwd, bwd;
  for (std::uint32_t v = 0; v < g.node_count(); ++v)
    {
      for (std::uint32_t w : g.successors(v))
        fwd.emplace_back(v, w);
      for (std::uint32_t u : g.predecessors(v))
        bwd.emplace_back(u, v);
    }
  std::sort(fwd.begin(), fwd.end());
  std::sort(bwd.begin(), bwd.end());
  REQUIRE(fwd == bwd);

  REQUIRE(g.has_edge(2, 6));
  REQUIRE(!g.has_edge(2, 5));
}

TEST_CASE("builder rejects malformed games")
{
  auto make = [](auto&& fill) {
    GameBuilder b(Semantics::min);
    fill(b);
    return std::move(b).build();
  };

  // a node with no moves breaks left-totality
  REQUIRE_THROWS_AS(make([](GameBuilder& b) { b.add_node(0, 1, {}); }),
                    std::invalid_argument);
  // successor out of range
  REQUIRE_THROWS_AS(make([](GameBuilder& b) { b.add_node(0, 1, {3}); }),
                    std::invalid_argument);
  // duplicate edge
  REQUIRE_THROWS_AS(make([](GameBuilder& b) { b.add_node(0, 1, {0, 0}); }),
                    std::invalid_argument);
  // owner outside {0, 1}
  REQUIRE_THROWS_AS(make([](GameBuilder& b) { b.add_node(2, 1, {0}); }),
                    std::invalid_argument);
  // declared but never defined
  REQUIRE_THROWS_AS(make([](GameBuilder& b) {
                      b.ensure_node(1);
                      b.define_node(0, 0, 1, {1});
                    }),
                    std::invalid_argument);
  // defined twice
  REQUIRE_THROWS_AS(make([](GameBuilder& b) {
                      b.add_node(0, 1, {0});
                      b.define_node(0, 0, 1, {0});
                    }),
                    std::invalid_argument);
}

TEST_CASE("structural equality tracks every component")
{
  ParityGame a = fixtures::fig1();
  REQUIRE(a == fixtures::fig1());

  GameBuilder b(Semantics::min, 2);
  b.add_node(0, 1, {1});
  b.add_node(1, 2, {0});
  ParityGame base = std::move(b).build();

  GameBuilder c(Semantics::min, 2);
  c.add_node(0, 1, {1});
  c.add_node(1, 3, {0}); // priority differs
  REQUIRE(!(base == std::move(c).build()));

  GameBuilder d(Semantics::max, 2);
  d.add_node(0, 1, {1});
  d.add_node(1, 2, {0});
  REQUIRE(!(base == std::move(d).build())); // semantics differs
}

TEST_CASE("force matches its one-step definition")
{
  ParityGame g = fixtures::fig1();
  NodeSet target = fixtures::make_set(7, {6});
  REQUIRE(force(g, 1, target) == fixtures::make_set(7, {2, 4, 6}));

  for (std::uint32_t i = 0; i < 40; ++i)
    {
      ParityGame r = fixtures::small_game(i, 12, 4);
      std::uint32_t n = r.node_count();
      SplitMix64 mix(i * 977 + 5);
      NodeSet x(n);
      for (std::uint32_t v = 0; v < n; ++v)
        if (mix.below(2))
          x.set(v);
      for (int player = 0; player < 2; ++player)
        {
          NodeSet f = force(r, player, x);
          for (std::uint32_t v = 0; v < n; ++v)
            {
              bool any = false, all = true;
              for (std::uint32_t w : r.successors(v))
                {
                  any |= x.test(w);
                  all &= x.test(w);
                }
              bool expect = r.owner(v) == player ? any : all;
              REQUIRE(f.test(v) == expect);
            }
        }
    }
}

TEST_CASE("normalization flips max games onto the canonical range")
{
  // even top priority: 4 -> 2, 0 -> 6, parity kept
  GameBuilder b(Semantics::max, 3);
  b.add_node(0, 0, {1});
  b.add_node(1, 3, {2});
  b.add_node(0, 4, {0});
  NormalizeResult nr = normalize(std::move(b).build());
  REQUIRE(nr.game.semantics() == Semantics::min);
  REQUIRE(nr.game.is_canonical());
  REQUIRE(nr.game.priority(0) == 6);
  REQUIRE(nr.game.priority(1) == 3);
  REQUIRE(nr.game.priority(2) == 2);
  for (auto [from, to] : nr.priority_map)
    REQUIRE((from % 2) == (to % 2));

  // odd top priority: M' = M + 1 keeps parities intact
  GameBuilder c(Semantics::max, 2);
  c.add_node(0, 5, {1});
  c.add_node(1, 0, {0});
  NormalizeResult nc = normalize(std::move(c).build());
  REQUIRE(nc.game.priority(0) == 3);
  REQUIRE(nc.game.priority(1) == 8);

  // min game with zeroes only needs the parity-preserving shift
  GameBuilder d(Semantics::min, 2);
  d.add_node(0, 0, {1});
  d.add_node(1, 1, {0});
  NormalizeResult nd = normalize(std::move(d).build());
  REQUIRE(nd.game.priority(0) == 2);
  REQUIRE(nd.game.priority(1) == 3);

  // already canonical games pass through unchanged
  ParityGame fig = fixtures::fig1();
  REQUIRE(normalize(fig).game == fig);
}

TEST_CASE("alpha partition splits nodes by priority, empties retained")
{
  ParityGame g = fixtures::fig1();
  AlphaSequence a = alpha_partition(g);
  REQUIRE(a.depth() == 5);
  REQUIRE(a.at(0) == fixtures::make_set(7, {1}));
  REQUIRE(a.at(1) == fixtures::make_set(7, {3, 4, 6}));
  REQUIRE(a.at(2) == fixtures::make_set(7, {0}));
  REQUIRE(a.at(3).empty());
  REQUIRE(a.at(4) == fixtures::make_set(7, {2, 5}));
}

TEST_CASE("result validation catches broken containers")
{
  ParityGame g = fixtures::fig1();
  SolveResult r;
  r.w0 = NodeSet::full(7);
  r.w1 = NodeSet(7);
  validate_result(g, r); // fine

  SolveResult overlap = r;
  overlap.w1.set(0);
  REQUIRE_THROWS_AS(validate_result(g, overlap), std::logic_error);

  SolveResult gap;
  gap.w0 = NodeSet(7);
  gap.w1 = NodeSet(7);
  REQUIRE_THROWS_AS(validate_result(g, gap), std::logic_error);

  SolveResult bad_edge = r;
  bad_edge.strategy0.assign(7, -1);
  bad_edge.strategy0[0] = 5; // q0 has no edge to q5
  REQUIRE_THROWS_AS(validate_result(g, bad_edge), std::logic_error);

  SolveResult off_region = r;
  off_region.strategy1.assign(7, -1);
  off_region.strategy1[2] = 6; // q2 is not in w1
  REQUIRE_THROWS_AS(validate_result(g, off_region), std::logic_error);
}

TEST_CASE("region digest separates distinct regions")
{
  NodeSet a(100), b(100);
  a.set(3);
  b.set(4);
  REQUIRE(region_digest(a) != region_digest(b));
  NodeSet c = a;
  REQUIRE(region_digest(a) == region_digest(c));
  // same bits, different universe
  NodeSet d(101);
  d.set(3);
  REQUIRE(region_digest(a) != region_digest(d));
}
