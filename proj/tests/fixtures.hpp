#pragma once

#include <initializer_list>

#include <pgame/arena.hpp>
#include <pgame/generator.hpp>

namespace fixtures
{
  /// Seven-node worked example, min semantics; player 0 wins everywhere.
  inline pgame::ParityGame fig1()
  {
    pgame::GameBuilder b(pgame::Semantics::min, 7);
    b.add_node(0, 3, {1}, "q0");
    b.add_node(1, 1, {5}, "q1");
    b.add_node(1, 5, {3, 6}, "q2");
    b.add_node(0, 2, {3}, "q3");
    b.add_node(0, 2, {6}, "q4");
    b.add_node(0, 5, {2}, "q5");
    b.add_node(1, 2, {6, 5}, "q6");
    return std::move(b).build();
  }

  /// Random max-semantics game whose size is derived from the index.
  /// max_degree = 0 leaves the out-degree range at 1..n.
  inline pgame::ParityGame small_game(std::uint32_t i, std::uint32_t max_n,
                                      std::uint32_t max_k,
                                      std::uint32_t max_degree = 0)
  {
    pgame::SplitMix64 mix(pgame::sub_seed(0x5eedf00d, i));
    pgame::GenSpec s;
    s.n = 1 + mix.below(max_n);
    s.k = 1 + mix.below(max_k);
    s.seed = 0x5eedf00dull + i;
    if (max_degree)
      {
        s.min_degree = 1;
        s.max_degree = std::min(max_degree, s.n);
      }
    return pgame::generate_one(s, 0);
  }

  inline pgame::NodeSet make_set(std::uint32_t universe,
                                 std::initializer_list<std::uint32_t> bits)
  {
    pgame::NodeSet s(universe);
    for (std::uint32_t b : bits)
      s.set(b);
    return s;
  }
}
