#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <pgame/arena.hpp>
#include <pgame/limits.hpp>

namespace pgame
{
  // Fixpoint solver over extended parity games.
  //
  // An extended game carries two disjoint node sets besides the arena: the
  // visiting set V (player 0 wins any play that enters it from position 2
  // on) and the avoiding set A (symmetrically good for player 1). Winning
  // regions satisfy
  //
  //   win(i, eps,        reach, avoid) = force_i(reach)
  //   win(i, F . alpha', reach, avoid) =
  //     lfp Y . P \ win(1-i, alpha', avoid | (F \ Y), reach | (F & Y))
  //
  // where for player 0 (reach, avoid) starts at (V, A) and for player 1 at
  // (A, V). The head class F is always the one whose parity is bad for the
  // current player; a decomposition starts at the odd index 1, so player 0
  // runs it as is and player 1 runs it behind an empty head class. Kleene
  // iteration from Y = empty ascends and converges within n+1 rounds per
  // level. A plain game is solved by running win over its full priority
  // decomposition.

  struct ExtendedParityGame
  {
    ParityGame game;
    NodeSet visiting;
    NodeSet avoiding;
  };

  inline void validate_epg(const ExtendedParityGame& epg)
  {
    std::uint32_t n = epg.game.node_count();
    if (epg.visiting.universe() != n || epg.avoiding.universe() != n)
      throw std::logic_error("validate_epg(): set universe mismatch");
    if (epg.visiting.intersects(epg.avoiding))
      throw std::logic_error("validate_epg(): visiting and avoiding overlap");
    if (!epg.game.is_canonical())
      throw std::logic_error("validate_epg(): game is not canonical");
  }

  /// Priority decomposition of the nodes outside visiting and avoiding;
  /// membership of those two sets overrides the priority label.
  inline AlphaSequence alpha_partition(const ExtendedParityGame& epg)
  {
    validate_epg(epg);
    const ParityGame& g = epg.game;
    std::uint32_t n = g.node_count();
    std::uint32_t d = 0;
    for (std::uint32_t v = 0; v < n; ++v)
      if (!epg.visiting.test(v) && !epg.avoiding.test(v) &&
          g.priority(v) > d)
        d = g.priority(v);
    AlphaSequence a;
    a.sets.assign(d, NodeSet(n));
    for (std::uint32_t v = 0; v < n; ++v)
      if (!epg.visiting.test(v) && !epg.avoiding.test(v))
        a.sets[g.priority(v) - 1].set(v);
    return a;
  }

  struct AptStats
  {
    std::uint64_t recursive_calls = 0;
    /// Fixpoint rounds taken, indexed by recursion level (0 = outermost).
    std::vector<std::uint64_t> outer_iterations;
    std::uint32_t depth = 0;
  };

  /// First-descent snapshot: reach argument of the first call reaching each
  /// level, and the first leaf force result. Mirrors the V^i bookkeeping of
  /// a hand trace, used by the worked-example tests.
  struct AptTrace
  {
    std::vector<std::optional<NodeSet>> first_reach;
    std::optional<NodeSet> first_leaf_result;
  };

  namespace detail
  {
    struct AptCtx
    {
      const ParityGame& game;
      const AlphaSequence& alpha;
      NodeSet all;
      AptStats* stats;
      Budget* budget;
      AptTrace* trace;
    };

    inline NodeSet apt_win(AptCtx& ctx, int player, std::uint32_t level,
                           const NodeSet& reach, const NodeSet& avoid)
    {
      if (ctx.stats)
        ++ctx.stats->recursive_calls;
      budget_tick(ctx.budget);
      if (ctx.trace && level < ctx.trace->first_reach.size() &&
          !ctx.trace->first_reach[level])
        ctx.trace->first_reach[level] = reach;

      if (level == ctx.alpha.depth())
        {
          NodeSet leaf = force(ctx.game, player, reach);
          if (ctx.trace && !ctx.trace->first_leaf_result)
            ctx.trace->first_leaf_result = leaf;
          return leaf;
        }

      const NodeSet& f = ctx.alpha.at(level);
      if (f.empty())
        {
          // Y cannot occur in the body, one evaluation settles the fixpoint
          if (ctx.stats)
            ++ctx.stats->outer_iterations[level];
          return ctx.all - apt_win(ctx, 1 - player, level + 1, avoid, reach);
        }
      NodeSet y(ctx.game.node_count());
      for (;;)
        {
          if (ctx.stats)
            ++ctx.stats->outer_iterations[level];
          NodeSet sub_reach = avoid | (f - y);
          NodeSet sub_avoid = reach | (f & y);
          NodeSet next =
              ctx.all - apt_win(ctx, 1 - player, level + 1, sub_reach, sub_avoid);
          if (next == y)
            return y;
          // Kleene iteration from the empty set must ascend
          if (!y.is_subset_of(next))
            throw std::logic_error("apt_win(): fixpoint chain not ascending");
          y = std::move(next);
        }
    }
  }

  /// Winning region of `player` in the extended game, alpha ranging over the
  /// unlabeled part (empty alpha turns the call into a single force step).
  /// The recursion peels the class that is bad for the current player, and a
  /// decomposition starts at priority 1, which is bad for player 0 only; a
  /// player 1 call therefore runs one level deeper, behind an empty head
  /// class, so that the parities line up again. The extra level costs a
  /// single converging outer iteration.
  inline NodeSet win(const ExtendedParityGame& epg, int player,
                     const AlphaSequence& alpha, AptStats* stats = nullptr,
                     Budget* budget = nullptr, AptTrace* trace = nullptr)
  {
    validate_epg(epg);
    const AlphaSequence* seq = &alpha;
    AlphaSequence shifted;
    if (player == 1 && alpha.depth() > 0)
      {
        shifted.sets.reserve(alpha.depth() + 1);
        shifted.sets.emplace_back(epg.game.node_count());
        shifted.sets.insert(shifted.sets.end(), alpha.sets.begin(),
                            alpha.sets.end());
        seq = &shifted;
      }
    if (stats)
      {
        stats->recursive_calls = 0;
        stats->outer_iterations.assign(seq->depth(), 0);
        stats->depth = seq->depth();
      }
    if (trace)
      trace->first_reach.assign(seq->depth() + 1, std::nullopt);
    detail::AptCtx ctx{epg.game, *seq, NodeSet::full(epg.game.node_count()),
                       stats, budget, trace};
    const NodeSet& reach = player == 0 ? epg.visiting : epg.avoiding;
    const NodeSet& avoid = player == 0 ? epg.avoiding : epg.visiting;
    return detail::apt_win(ctx, player, 0, reach, avoid);
  }

  /// Solve a game (any semantics) with the fixpoint recursion. Winning
  /// regions only; the algorithm does not synthesize strategies.
  inline SolveResult solve_apt(const ParityGame& g, Budget* budget = nullptr,
                               AptStats* stats = nullptr,
                               AptTrace* trace = nullptr)
  {
    auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    res.algorithm = "apt";
    std::uint32_t n = g.node_count();
    if (n == 0)
      {
        res.w0 = NodeSet(0);
        res.w1 = NodeSet(0);
        return res;
      }
    ParityGame canon = g.is_canonical() ? g : normalize(g).game;
    ExtendedParityGame epg{std::move(canon), NodeSet(n), NodeSet(n)};
    AlphaSequence alpha = alpha_partition(epg.game);
    AptStats local;
    AptStats* st = stats ? stats : &local;
    res.w0 = win(epg, 0, alpha, st, budget, trace);
    res.w1 = res.w0.complement();
    res.work = st->recursive_calls;
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
  }

  namespace detail
  {
    // Literal transcription of the alternative presentation of the same
    // recursion: the fixpoint variable is the complement (the opponent's
    // region), iterated from its top assignment V' = V u F, A' = A, and the
    // caller complements the result. Differential-testing twin of apt_win.
    inline NodeSet dual_win(AptCtx& ctx, int player, std::uint32_t level,
                            const NodeSet& v, const NodeSet& a);

    inline NodeSet dual_min_fp(AptCtx& ctx, int player, std::uint32_t level,
                               const NodeSet& v, const NodeSet& a)
    {
      const NodeSet& f = ctx.alpha.at(level);
      NodeSet y2 = dual_win(ctx, player, level + 1, v | f, a);
      for (;;)
        {
          NodeSet y1 = std::move(y2);
          y2 = dual_win(ctx, player, level + 1, v | (f & y1), a | (f - y1));
          if (y2 == y1)
            return y2;
        }
    }

    inline NodeSet dual_win(AptCtx& ctx, int player, std::uint32_t level,
                            const NodeSet& v, const NodeSet& a)
    {
      if (ctx.stats)
        ++ctx.stats->recursive_calls;
      budget_tick(ctx.budget);
      if (level != ctx.alpha.depth())
        return ctx.all - dual_min_fp(ctx, 1 - player, level, a, v);
      return force(ctx.game, player, v);
    }
  }

  /// solve_apt twin following the dual formulation. Regions must agree with
  /// solve_apt on every input.
  inline SolveResult solve_apt_dual(const ParityGame& g,
                                    Budget* budget = nullptr,
                                    AptStats* stats = nullptr)
  {
    auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    res.algorithm = "apt-dual";
    std::uint32_t n = g.node_count();
    if (n == 0)
      {
        res.w0 = NodeSet(0);
        res.w1 = NodeSet(0);
        return res;
      }
    NormalizeResult nr;
    if (!g.is_canonical())
      nr = normalize(g);
    const ParityGame& canon = g.is_canonical() ? g : nr.game;
    AlphaSequence alpha = alpha_partition(canon);
    AptStats local;
    AptStats* st = stats ? stats : &local;
    st->recursive_calls = 0;
    st->outer_iterations.assign(alpha.depth(), 0);
    st->depth = alpha.depth();
    detail::AptCtx ctx{canon, alpha, NodeSet::full(n), st, budget, nullptr};
    res.w0 = detail::dual_win(ctx, 0, 0, NodeSet(n), NodeSet(n));
    res.w1 = res.w0.complement();
    res.work = st->recursive_calls;
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
  }

  /// Collapse an extended game to a plain one with the same winners outside
  /// V u A: nodes in V keep only a self loop and get an even priority,
  /// nodes in A likewise with an odd priority. Entering V (resp. A) then
  /// seals the play exactly as the extended winning condition does.
  inline ParityGame reduce_to_parity_game(const ExtendedParityGame& epg)
  {
    validate_epg(epg);
    const ParityGame& g = epg.game;
    GameBuilder b(Semantics::min, g.node_count());
    for (std::uint32_t v = 0; v < g.node_count(); ++v)
      {
        if (epg.visiting.test(v))
          b.add_node(g.owner(v), 2, {v});
        else if (epg.avoiding.test(v))
          b.add_node(g.owner(v), 1, {v});
        else
          b.add_node(g.owner(v), g.priority(v),
                     {g.successors(v).begin(), g.successors(v).end()});
      }
    return std::move(b).build();
  }
}
