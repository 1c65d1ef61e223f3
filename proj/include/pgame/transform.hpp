#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <pgame/apt.hpp>
#include <pgame/arena.hpp>
#include <pgame/classic.hpp>
#include <pgame/limits.hpp>
#include <pgame/scc.hpp>

namespace pgame
{
  // Winner-preserving reductions, composable in front of any backend:
  // priority compression, self-loop elimination, and bottom-up solving of
  // the condensation. All three expect the canonical form.

  struct CompressResult
  {
    ParityGame game;
    /// map[p] is the compressed value of used priority p, npos elsewhere.
    std::vector<std::uint32_t> map;
    static constexpr std::uint32_t npos = 0xffffffffu;
  };

  /// Monotone parity-preserving relabeling onto the least possible range:
  /// consecutive used priorities of equal parity collapse, the smallest
  /// used priority maps to 1 or 2 by parity. The result is dense, that is
  /// the used priorities afterwards are exactly {1..d} or {2..d}, and d is
  /// minimal among all such relabelings.
  inline CompressResult compress_priorities(const ParityGame& g)
  {
    if (!g.is_canonical())
      throw std::logic_error("compress_priorities(): game is not canonical");
    CompressResult res;
    std::uint32_t n = g.node_count();
    if (n == 0)
      {
        res.game = g;
        return res;
      }
    res.map.assign(g.max_priority() + 1, CompressResult::npos);
    for (std::uint32_t v = 0; v < n; ++v)
      res.map[g.priority(v)] = 0;

    std::uint32_t next = 0;
    bool started = false;
    for (std::uint32_t p = 0; p < res.map.size(); ++p)
      {
        if (res.map[p] == CompressResult::npos)
          continue;
        if (!started)
          {
            next = (p & 1) ? 1 : 2;
            started = true;
          }
        else if ((p & 1) != (next & 1))
          ++next;
        res.map[p] = next;
      }

    GameBuilder b(Semantics::min, n);
    for (std::uint32_t v = 0; v < n; ++v)
      b.add_node(g.owner(v), res.map[g.priority(v)],
                 {g.successors(v).begin(), g.successors(v).end()},
                 g.has_names() ? g.name(v) : std::string());
    res.game = std::move(b).build();
    return res;
  }

  struct SelfLoopResult
  {
    /// Loop-free remainder, reindexed densely.
    ParityGame residual;
    std::vector<std::uint32_t> residual_to_original;
    /// Nodes decided during elimination, original indexing, with the
    /// strategies realizing those wins.
    NodeSet predecided_w0, predecided_w1;
    MemorylessStrategy strategy0, strategy1;
  };

  /// Eliminate self loops. A loop whose priority parity matches its owner
  /// decides the node at once (loop forever) and its attractor with it; a
  /// harmful loop is deleted as an edge, or, when it is the node's only
  /// remaining move, decides the node for the opponent. Repeats until
  /// loop-free; the residual stays total.
  inline SelfLoopResult remove_self_loops(const ParityGame& g)
  {
    if (!g.is_canonical())
      throw std::logic_error("remove_self_loops(): game is not canonical");
    std::uint32_t n = g.node_count();
    SelfLoopResult res;
    res.predecided_w0 = NodeSet(n);
    res.predecided_w1 = NodeSet(n);
    res.strategy0.assign(n, -1);
    res.strategy1.assign(n, -1);

    NodeSet alive = NodeSet::full(n);
    NodeSet cut_loops(n); // loop edges logically deleted

    auto decide = [&](std::uint32_t v, int winner) {
      MemorylessStrategy* strat = winner == 0 ? &res.strategy0 : &res.strategy1;
      NodeSet won(n);
      won.set(v);
      NodeSet a = attractor(g, winner, won, &alive, strat, &cut_loops);
      (winner == 0 ? res.predecided_w0 : res.predecided_w1) |= a;
      alive -= a;
    };

    bool changed = true;
    while (changed)
      {
        changed = false;
        for (std::uint32_t v = 0; v < n; ++v)
          {
            if (!alive.test(v) || cut_loops.test(v) || !g.has_edge(v, v))
              continue;
            int owner = g.owner(v);
            if (static_cast<int>(g.priority(v) & 1) == owner)
              {
                // looping forever at v is optimal for its owner
                (owner == 0 ? res.strategy0 : res.strategy1)[v] = v;
                decide(v, owner);
                changed = true;
                continue;
              }
            std::uint32_t others = 0;
            for (std::uint32_t w : g.successors(v))
              if (w != v && alive.test(w))
                ++others;
            if (others > 0)
              {
                cut_loops.set(v); // harmful loop is never played
                changed = true;
              }
            else
              {
                // stuck: the owner must play the loop and loses
                decide(v, 1 - owner);
                changed = true;
              }
          }
      }

    // reindex the survivors
    std::vector<std::uint32_t> to_res(n, 0xffffffffu);
    alive.for_each([&](std::uint32_t v) {
      to_res[v] = static_cast<std::uint32_t>(res.residual_to_original.size());
      res.residual_to_original.push_back(v);
    });
    GameBuilder b(Semantics::min,
                  static_cast<std::uint32_t>(res.residual_to_original.size()));
    for (std::uint32_t v : res.residual_to_original)
      {
        std::vector<std::uint32_t> succs;
        for (std::uint32_t w : g.successors(v))
          {
            if (!alive.test(w))
              continue;
            if (w == v && cut_loops.test(v))
              continue;
            succs.push_back(to_res[w]);
          }
        if (succs.empty())
          throw std::logic_error("remove_self_loops(): residual not total");
        b.add_node(g.owner(v), g.priority(v), std::move(succs));
      }
    res.residual = std::move(b).build();
    return res;
  }

  namespace detail
  {
    inline SolveResult run_backend(const ParityGame& g, Algorithm a,
                                   Budget* budget, std::uint32_t oracle_bound)
    {
      switch (a)
        {
        case Algorithm::apt:
          return solve_apt(g, budget);
        case Algorithm::zielonka:
          return solve_zielonka(g, budget);
        case Algorithm::spm:
          return solve_spm(g, budget);
        case Algorithm::oracle:
          return solve_oracle(g, oracle_bound, budget);
        }
      throw std::logic_error("run_backend(): bad algorithm");
    }
  }

  /// Solve bottom-up along the condensation: repeatedly take the terminal
  /// component with the smallest node index, solve it with the backend,
  /// attract both winning regions (player 0 first) and drop them from the
  /// arena. Sound because a region attractor never cuts the other player's
  /// wins, and terminal components are closed subgames.
  inline SolveResult scc_solve(const ParityGame& g, Algorithm backend,
                               Budget* budget = nullptr,
                               std::uint32_t oracle_bound = 12)
  {
    if (!g.is_canonical())
      throw std::logic_error("scc_solve(): game is not canonical");
    if (backend == Algorithm::oracle)
      throw std::invalid_argument("scc_solve(): oracle backend not supported");
    std::uint32_t n = g.node_count();
    SolveResult res;
    res.algorithm = algorithm_name(backend);
    res.w0 = NodeSet(n);
    res.w1 = NodeSet(n);
    bool strategies = backend == Algorithm::zielonka;
    if (strategies)
      {
        res.strategy0.assign(n, -1);
        res.strategy1.assign(n, -1);
      }

    NodeSet alive = NodeSet::full(n);
    while (!alive.empty())
      {
        budget_tick(budget);
        SccResult scc = scc_decompose(
            n, &alive, [&g](std::uint32_t v) { return g.successors(v); });

        // terminal = no alive edge leaves the component
        std::vector<bool> terminal(scc.count, true);
        alive.for_each([&](std::uint32_t v) {
          for (std::uint32_t w : g.successors(v))
            if (alive.test(w) && scc.comp[w] != scc.comp[v])
              {
                terminal[scc.comp[v]] = false;
                return;
              }
        });
        // smallest alive node in any terminal component decides the pick
        std::uint32_t chosen = SccResult::unassigned;
        alive.for_each([&](std::uint32_t v) {
          if (chosen == SccResult::unassigned && terminal[scc.comp[v]])
            chosen = scc.comp[v];
        });
        if (chosen == SccResult::unassigned)
          throw std::logic_error("scc_solve(): no terminal component");

        std::vector<std::uint32_t> members;
        std::vector<std::uint32_t> to_sub(n, 0);
        alive.for_each([&](std::uint32_t v) {
          if (scc.comp[v] == chosen)
            {
              to_sub[v] = static_cast<std::uint32_t>(members.size());
              members.push_back(v);
            }
        });

        GameBuilder b(Semantics::min,
                      static_cast<std::uint32_t>(members.size()));
        for (std::uint32_t v : members)
          {
            std::vector<std::uint32_t> succs;
            for (std::uint32_t w : g.successors(v))
              if (alive.test(w)) // terminal: stays within the component
                succs.push_back(to_sub[w]);
            b.add_node(g.owner(v), g.priority(v), std::move(succs));
          }
        ParityGame sub = std::move(b).build();
        SolveResult sr = detail::run_backend(sub, backend, budget,
                                             oracle_bound);
        res.work += sr.work;

        NodeSet c0(n), c1(n);
        for (std::uint32_t i = 0; i < members.size(); ++i)
          {
            if (sr.w0.test(i))
              c0.set(members[i]);
            else
              c1.set(members[i]);
            if (strategies)
              {
                if (!sr.strategy0.empty() && sr.strategy0[i] >= 0)
                  res.strategy0[members[i]] = members[sr.strategy0[i]];
                if (!sr.strategy1.empty() && sr.strategy1[i] >= 0)
                  res.strategy1[members[i]] = members[sr.strategy1[i]];
              }
          }

        NodeSet a0 = attractor(g, 0, c0, &alive,
                               strategies ? &res.strategy0 : nullptr);
        res.w0 |= a0;
        alive -= a0;
        NodeSet a1 = attractor(g, 1, c1, &alive,
                               strategies ? &res.strategy1 : nullptr);
        res.w1 |= a1;
        alive -= a1;
      }
    return res;
  }
}
