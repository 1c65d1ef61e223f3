#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include <pgame/node_set.hpp>

using pgame::NodeSet;

TEST_CASE("bit basics across the word boundary")
{
  for (std::uint32_t n : {1u, 63u, 64u, 65u, 200u})
    {
      NodeSet s(n);
      REQUIRE(s.universe() == n);
      REQUIRE(s.empty());
      REQUIRE(s.count() == 0);
      REQUIRE(s.first() == NodeSet::npos);
      s.set(n - 1);
      REQUIRE(s.test(n - 1));
      REQUIRE(s.count() == 1);
      REQUIRE(s.first() == n - 1);
      s.reset(n - 1);
      REQUIRE(s.empty());
    }
}

TEST_CASE("complement stays inside the universe")
{
  NodeSet s(65);
  s.set(0);
  s.set(64);
  NodeSet c = s.complement();
  REQUIRE(c.count() == 63);
  REQUIRE(!c.test(0));
  REQUIRE(!c.test(64));
  REQUIRE(c.test(1));
  REQUIRE(c.complement() == s);
  REQUIRE((s | c) == NodeSet::full(65));
  REQUIRE(NodeSet::full(65).count() == 65);
  REQUIRE(NodeSet::full(64).complement().empty());
}

TEST_CASE("set algebra agrees with a reference implementation")
{
  std::mt19937 rng(7);
  for (int round = 0; round < 60; ++round)
    {
      std::uint32_t n = 1 + rng() % 150;
      NodeSet a(n), b(n);
      std::set<std::uint32_t> ra, rb;
      for (std::uint32_t i = 0; i < n; ++i)
        {
          if (rng() % 3 == 0)
            {
              a.set(i);
              ra.insert(i);
            }
          if (rng() % 3 == 0)
            {
              b.set(i);
              rb.insert(i);
            }
        }

      auto as_vector = [](const NodeSet& s) {
        std::vector<std::uint32_t> v;
        s.for_each([&](std::uint32_t x) { v.push_back(x); });
        return v;
      };
      REQUIRE(as_vector(a) ==
              std::vector<std::uint32_t>(ra.begin(), ra.end()));

      std::set<std::uint32_t> runion, rinter, rdiff;
      std::set_union(ra.begin(), ra.end(), rb.begin(), rb.end(),
                     std::inserter(runion, runion.end()));
      std::set_intersection(ra.begin(), ra.end(), rb.begin(), rb.end(),
                            std::inserter(rinter, rinter.end()));
      std::set_difference(ra.begin(), ra.end(), rb.begin(), rb.end(),
                          std::inserter(rdiff, rdiff.end()));
      REQUIRE(as_vector(a | b) ==
              std::vector<std::uint32_t>(runion.begin(), runion.end()));
      REQUIRE(as_vector(a & b) ==
              std::vector<std::uint32_t>(rinter.begin(), rinter.end()));
      REQUIRE(as_vector(a - b) ==
              std::vector<std::uint32_t>(rdiff.begin(), rdiff.end()));

      bool subset = std::includes(rb.begin(), rb.end(), ra.begin(), ra.end());
      REQUIRE(a.is_subset_of(b) == subset);
      REQUIRE(a.intersects(b) == !rinter.empty());
      REQUIRE((a == b) == (ra == rb));
    }
}

TEST_CASE("compound assignment matches the free operators")
{
  NodeSet a(100), b(100);
  for (std::uint32_t i = 0; i < 100; i += 3)
    a.set(i);
  for (std::uint32_t i = 0; i < 100; i += 5)
    b.set(i);
  NodeSet u = a, n = a, d = a;
  u |= b;
  n &= b;
  d -= b;
  REQUIRE(u == (a | b));
  REQUIRE(n == (a & b));
  REQUIRE(d == (a - b));
}

TEST_CASE("allocation counter advances when sets are created")
{
  std::uint64_t before = pgame::detail::nodeset_alloc_words;
  NodeSet big(64 * 100);
  REQUIRE(pgame::detail::nodeset_alloc_words >= before + 100);
  NodeSet copy = big;
  REQUIRE(pgame::detail::nodeset_alloc_words >= before + 200);
  NodeSet moved = std::move(big); // moves are free
  std::uint64_t after_move = pgame::detail::nodeset_alloc_words;
  NodeSet other(64);
  other = copy;
  REQUIRE(pgame::detail::nodeset_alloc_words >= after_move + 100);
}
