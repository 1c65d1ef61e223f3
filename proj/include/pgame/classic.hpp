#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <pgame/arena.hpp>
#include <pgame/limits.hpp>
#include <pgame/scc.hpp>

namespace pgame
{
  // Baseline solvers: the recursive region decomposition, progress-measure
  // lifting, and an exhaustive strategy-enumeration oracle for differential
  // testing. All three work on the canonical form (min semantics) except
  // the oracle, which evaluates either semantics directly.

  /// Least fixpoint of the one-step force above `target`, restricted to
  /// `alive` when given. Backward worklist with per-node counters, O(n + e).
  ///
  /// For attracted nodes owned by `player` an attracting edge is written to
  /// *strategy (target nodes are left untouched). Self loops of nodes in
  /// *suppress_loops are treated as deleted edges.
  inline NodeSet attractor(const ParityGame& g, int player,
                           const NodeSet& target,
                           const NodeSet* alive = nullptr,
                           MemorylessStrategy* strategy = nullptr,
                           const NodeSet* suppress_loops = nullptr)
  {
    std::uint32_t n = g.node_count();
    auto live = [&](std::uint32_t v) { return !alive || alive->test(v); };
    auto edge_ok = [&](std::uint32_t v, std::uint32_t w) {
      return !(v == w && suppress_loops && suppress_loops->test(v));
    };

    NodeSet result(n);
    std::vector<std::uint32_t> todo;
    target.for_each([&](std::uint32_t v) {
      if (live(v))
        {
          result.set(v);
          todo.push_back(v);
        }
    });

    // live successors not yet popped, opponent nodes only; every result
    // node pops exactly once, so a zero counter means all moves lead in
    std::vector<std::uint32_t> pending(n, 0);
    for (std::uint32_t v = 0; v < n; ++v)
      {
        if (!live(v) || g.owner(v) == player)
          continue;
        std::uint32_t c = 0;
        for (std::uint32_t w : g.successors(v))
          if (live(w) && edge_ok(v, w))
            ++c;
        pending[v] = c;
      }

    while (!todo.empty())
      {
        std::uint32_t w = todo.back();
        todo.pop_back();
        for (std::uint32_t v : g.predecessors(w))
          {
            if (!live(v) || result.test(v) || !edge_ok(v, w))
              continue;
            if (g.owner(v) == player)
              {
                result.set(v);
                if (strategy)
                  (*strategy)[v] = w;
                todo.push_back(v);
              }
            else if (--pending[v] == 0)
              {
                result.set(v);
                todo.push_back(v);
              }
          }
      }
    return result;
  }

  namespace detail
  {
    struct ZielonkaCtx
    {
      const ParityGame& game;
      MemorylessStrategy& s0;
      MemorylessStrategy& s1;
      Budget* budget;
      std::uint64_t calls = 0;
    };

    inline std::pair<NodeSet, NodeSet> zielonka_rec(ZielonkaCtx& ctx,
                                                    const NodeSet& alive)
    {
      ++ctx.calls;
      budget_tick(ctx.budget);
      const ParityGame& g = ctx.game;
      std::uint32_t n = g.node_count();
      if (alive.empty())
        return {NodeSet(n), NodeSet(n)};

      std::uint32_t m = 0xffffffffu;
      alive.for_each([&](std::uint32_t v) {
        if (g.priority(v) < m)
          m = g.priority(v);
      });
      int i = static_cast<int>(m & 1);
      MemorylessStrategy& mine = i == 0 ? ctx.s0 : ctx.s1;
      MemorylessStrategy& theirs = i == 0 ? ctx.s1 : ctx.s0;

      NodeSet top(n);
      alive.for_each([&](std::uint32_t v) {
        if (g.priority(v) == m)
          top.set(v);
      });

      NodeSet a = attractor(g, i, top, &alive, &mine);
      auto [sub0, sub1] = zielonka_rec(ctx, alive - a);
      const NodeSet& opp = i == 0 ? sub1 : sub0;
      if (opp.empty())
        {
          // i wins everything here; nodes of the top class still need a move
          top.for_each([&](std::uint32_t v) {
            if (g.owner(v) != i)
              return;
            for (std::uint32_t w : g.successors(v))
              if (alive.test(w))
                {
                  mine[v] = w;
                  return;
                }
            throw std::logic_error("zielonka_rec(): subgame not total");
          });
          return i == 0 ? std::pair{alive, NodeSet(n)}
                        : std::pair{NodeSet(n), alive};
        }

      NodeSet b = attractor(g, 1 - i, opp, &alive, &theirs);
      auto [r0, r1] = zielonka_rec(ctx, alive - b);
      if (i == 0)
        return {std::move(r0), r1 | b};
      return {r0 | b, std::move(r1)};
    }
  }

  /// Recursive decomposition solver. Returns both regions and a positional
  /// strategy for each player on its own region.
  inline SolveResult solve_zielonka(const ParityGame& g,
                                    Budget* budget = nullptr)
  {
    auto t0 = std::chrono::steady_clock::now();
    std::uint32_t n = g.node_count();
    SolveResult res;
    res.algorithm = "re";
    res.strategy0.assign(n, -1);
    res.strategy1.assign(n, -1);
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
    detail::ZielonkaCtx ctx{canon, res.strategy0, res.strategy1, budget};
    auto [w0, w1] = detail::zielonka_rec(ctx, NodeSet::full(n));
    res.w0 = std::move(w0);
    res.w1 = std::move(w1);
    // recursion leaves stale picks on nodes later won by the other player
    for (std::uint32_t v = 0; v < n; ++v)
      {
        if (g.owner(v) != 0 || !res.w0.test(v))
          res.strategy0[v] = -1;
        if (g.owner(v) != 1 || !res.w1.test(v))
          res.strategy1[v] = -1;
      }
    res.work = ctx.calls;
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
  }

  /// Lifting table for the progress-measure solver, min-parity form.
  /// A measure is one counter per odd priority up to d, component for
  /// priority 1 most significant; component i never exceeds |p^-1(i)|.
  /// Top is a separate flag. prog(v, w) is the least measure m whose
  /// prefix up to p(v) is >= (strictly > when p(v) is odd) the prefix of
  /// the measure at w.
  class ProgressMeasure
  {
  public:
    explicit ProgressMeasure(const ParityGame& g)
      : n_(g.node_count()), top_(g.node_count())
    {
      if (!g.is_canonical())
        throw std::logic_error("ProgressMeasure: game is not canonical");
      std::uint32_t d = n_ == 0 ? 0 : g.max_priority();
      slots_ = (d + 1) / 2;
      cap_.assign(slots_, 0);
      for (std::uint32_t v = 0; v < n_; ++v)
        if (g.priority(v) & 1)
          ++cap_[slot(g.priority(v))];
      data_.assign(std::size_t(n_) * slots_, 0);
    }

    std::uint32_t slots() const { return slots_; }

    /// Inclusive component bound: the number of nodes of that odd priority.
    std::uint32_t cap(std::uint32_t s) const { return cap_[s]; }

    bool is_top(std::uint32_t v) const { return top_.test(v); }
    const NodeSet& tops() const { return top_; }

    std::span<const std::uint32_t> tuple(std::uint32_t v) const
    {
      return {data_.data() + std::size_t(v) * slots_, slots_};
    }

    /// Measure space size |M| = prod(cap + 1), saturating.
    std::uint64_t space() const
    {
      std::uint64_t m = 1;
      for (std::uint32_t s = 0; s < slots_; ++s)
        {
          if (m > ~0ull / (cap_[s] + 1))
            return ~0ull;
          m *= cap_[s] + 1;
        }
      return m;
    }

    /// prog(v, w) into out; returns false when the result is top.
    bool prog(const ParityGame& g, std::uint32_t v, std::uint32_t w,
              std::vector<std::uint32_t>& out) const
    {
      out.assign(slots_, 0);
      if (is_top(w))
        return false;
      std::uint32_t q = g.priority(v);
      std::uint32_t k = (q + 1) / 2; // slots covering priorities <= q
      std::span<const std::uint32_t> src = tuple(w);
      std::copy(src.begin(), src.begin() + k, out.begin());
      if (q & 1)
        {
          // least strictly greater prefix: increment with carry
          std::uint32_t s = k;
          while (s-- > 0)
            {
              if (out[s] < cap_[s])
                {
                  ++out[s];
                  return true;
                }
              out[s] = 0;
            }
          return false;
        }
      return true;
    }

    /// Lexicographic comparison of full tuples, slot 0 most significant.
    static int cmp(std::span<const std::uint32_t> a,
                   std::span<const std::uint32_t> b)
    {
      for (std::size_t s = 0; s < a.size(); ++s)
        {
          if (a[s] != b[s])
            return a[s] < b[s] ? -1 : 1;
        }
      return 0;
    }

    /// Recompute v's measure from its successors (min over successors for
    /// player 0 nodes, max for player 1). True iff the measure increased.
    bool lift(const ParityGame& g, std::uint32_t v,
              std::vector<std::uint32_t>& best,
              std::vector<std::uint32_t>& scratch)
    {
      if (is_top(v))
        return false;
      bool best_top = false, have = false;
      bool minimize = g.owner(v) == 0;
      for (std::uint32_t w : g.successors(v))
        {
          bool ok = prog(g, v, w, scratch);
          if (!have)
            {
              best = scratch;
              best_top = !ok;
              have = true;
            }
          else if (minimize)
            {
              if (best_top && ok)
                {
                  best = scratch;
                  best_top = false;
                }
              else if (!best_top && ok && cmp(scratch, best) < 0)
                best = scratch;
            }
          else
            {
              if (!best_top && !ok)
                best_top = true;
              else if (!best_top && cmp(scratch, best) > 0)
                best = scratch;
            }
          // min can stop at bottom, max at top
          if (minimize && !best_top &&
              std::all_of(best.begin(), best.end(),
                          [](std::uint32_t c) { return c == 0; }))
            break;
          if (!minimize && best_top)
            break;
        }
      if (best_top)
        {
          top_.set(v);
          ++lifts_;
          return true;
        }
      std::span<const std::uint32_t> cur = tuple(v);
      if (cmp(best, cur) > 0)
        {
          std::copy(best.begin(), best.end(),
                    data_.begin() + std::size_t(v) * slots_);
          ++lifts_;
          return true;
        }
      return false;
    }

    std::uint64_t lifts() const { return lifts_; }

  private:
    std::uint32_t slot(std::uint32_t priority) const
    {
      return (priority - 1) / 2;
    }

    std::uint32_t n_;
    std::uint32_t slots_ = 0;
    std::vector<std::uint32_t> cap_;
    std::vector<std::uint32_t> data_;
    NodeSet top_;
    std::uint64_t lifts_ = 0;
  };

  /// Progress-measure solver. Regions only; `out` (when given) receives the
  /// final table for inspection.
  inline SolveResult solve_spm(const ParityGame& g, Budget* budget = nullptr,
                               ProgressMeasure* out = nullptr)
  {
    auto t0 = std::chrono::steady_clock::now();
    std::uint32_t n = g.node_count();
    SolveResult res;
    res.algorithm = "sp";
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

    ProgressMeasure pm(canon);
    std::vector<std::uint32_t> best, scratch;
    std::vector<std::uint32_t> queue(n);
    NodeSet queued = NodeSet::full(n);
    for (std::uint32_t v = 0; v < n; ++v)
      queue[v] = v;

    while (!queue.empty())
      {
        std::uint32_t v = queue.back();
        queue.pop_back();
        queued.reset(v);
        budget_tick(budget);
        if (!pm.lift(canon, v, best, scratch))
          continue;
        for (std::uint32_t u : canon.predecessors(v))
          if (!pm.is_top(u) && !queued.test(u))
            {
              queued.set(u);
              queue.push_back(u);
            }
      }

    res.w1 = pm.tops();
    res.w0 = res.w1.complement();
    res.work = pm.lifts();
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (out)
      *out = std::move(pm);
    return res;
  }

  struct OracleBoundExceeded : std::runtime_error
  {
    OracleBoundExceeded(std::uint32_t n, std::uint32_t bound)
      : std::runtime_error("oracle: game has " + std::to_string(n) +
                           " nodes, bound is " + std::to_string(bound))
    {
    }
  };

  namespace detail
  {
    /// Nodes of priority m lying on a cycle (inside `within`) whose
    /// decisive priority is m, for every class m of parity `bad_parity`.
    /// Decisive means minimal or maximal along the cycle per the game
    /// semantics. Callers add reachability on top.
    template <typename SuccFn>
    NodeSet cycle_witnesses(const ParityGame& g, const NodeSet& within,
                            int bad_parity, SuccFn&& succ_of)
    {
      std::uint32_t n = g.node_count();
      NodeSet witnesses(n);
      std::vector<std::uint32_t> classes;
      {
        NodeSet seen_class(g.node_count() == 0 ? 0 : g.max_priority() + 1);
        within.for_each([&](std::uint32_t v) {
          std::uint32_t p = g.priority(v);
          if ((p & 1) == static_cast<std::uint32_t>(bad_parity) &&
              !seen_class.test(p))
            {
              seen_class.set(p);
              classes.push_back(p);
            }
        });
      }
      for (std::uint32_t m : classes)
        {
          // nodes that may sit on a cycle whose decisive priority is m
          NodeSet h(n);
          within.for_each([&](std::uint32_t v) {
            bool in = g.semantics() == Semantics::min ? g.priority(v) >= m
                                                      : g.priority(v) <= m;
            if (in)
              h.set(v);
          });
          SccResult scc = scc_decompose(n, &h, succ_of);
          std::vector<std::uint32_t> size(scc.count, 0);
          h.for_each([&](std::uint32_t v) { ++size[scc.comp[v]]; });
          h.for_each([&](std::uint32_t v) {
            if (g.priority(v) != m || witnesses.test(v))
              return;
            bool on_cycle = size[scc.comp[v]] > 1;
            if (!on_cycle)
              for (std::uint32_t w : succ_of(v))
                if (w == v)
                  {
                    on_cycle = true;
                    break;
                  }
            if (on_cycle)
              witnesses.set(v);
          });
        }
      return witnesses;
    }
  }

  /// Exhaustive reference solver: enumerates every positional player-0
  /// strategy, keeps the nodes from which the strategy graph reaches no
  /// cycle with an odd decisive priority, and unites the survivors.
  /// Consumes either semantics directly. Refuses games above `bound`.
  inline SolveResult solve_oracle(const ParityGame& g, std::uint32_t bound = 12,
                                  Budget* budget = nullptr)
  {
    auto t0 = std::chrono::steady_clock::now();
    std::uint32_t n = g.node_count();
    if (n > bound || n > 64)
      throw OracleBoundExceeded(n, std::min<std::uint32_t>(bound, 64));
    SolveResult res;
    res.algorithm = "oracle";
    if (n == 0)
      {
        res.w0 = NodeSet(0);
        res.w1 = NodeSet(0);
        return res;
      }

    std::vector<std::uint32_t> p0;
    for (std::uint32_t v = 0; v < n; ++v)
      if (g.owner(v) == 0)
        p0.push_back(v);

    std::vector<std::uint32_t> choice(p0.size(), 0);
    std::vector<std::vector<std::uint32_t>> sg(n); // strategy graph
    for (std::uint32_t v = 0; v < n; ++v)
      if (g.owner(v) == 1)
        sg[v].assign(g.successors(v).begin(), g.successors(v).end());

    NodeSet all = NodeSet::full(n);
    NodeSet w0(n);
    std::uint64_t examined = 0;
    for (;;)
      {
        budget_tick(budget);
        ++examined;
        for (std::size_t i = 0; i < p0.size(); ++i)
          sg[p0[i]] = {g.successors(p0[i])[choice[i]]};
        auto succ_of = [&sg](std::uint32_t v) -> const std::vector<std::uint32_t>& {
          return sg[v];
        };

        NodeSet bad = detail::cycle_witnesses(g, all, 1, succ_of);
        // grow to everything that can reach a witness
        std::vector<std::uint32_t> todo;
        bad.for_each([&](std::uint32_t v) { todo.push_back(v); });
        while (!todo.empty())
          {
            std::uint32_t w = todo.back();
            todo.pop_back();
            for (std::uint32_t u = 0; u < n; ++u)
              {
                if (bad.test(u))
                  continue;
                for (std::uint32_t x : sg[u])
                  if (x == w)
                    {
                      bad.set(u);
                      todo.push_back(u);
                      break;
                    }
              }
          }
        w0 |= bad.complement();

        // odometer over player-0 choices
        std::size_t pos = 0;
        while (pos < p0.size())
          {
            if (++choice[pos] < g.out_degree(p0[pos]))
              break;
            choice[pos] = 0;
            ++pos;
          }
        if (pos == p0.size())
          break;
        if (w0 == all)
          break;
      }

    res.w0 = std::move(w0);
    res.w1 = res.w0.complement();
    res.work = examined;
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
  }

  /// Cycle test for a claimed solution: within `region`, fix the winner's
  /// strategy choices and keep every opponent edge; the strategy is sound
  /// iff no play can leave the region and every cycle's decisive priority
  /// has the winner's parity. Returns true and clears *why on success.
  inline bool strategy_wins_on(const ParityGame& g, int player,
                               const NodeSet& region,
                               const MemorylessStrategy& strategy,
                               std::string* why = nullptr)
  {
    auto fail = [&](const std::string& msg) {
      if (why)
        *why = msg;
      return false;
    };
    std::uint32_t n = g.node_count();
    std::vector<std::vector<std::uint32_t>> restricted(n);
    bool ok = true;
    std::string reason;
    region.for_each([&](std::uint32_t v) {
      if (!ok)
        return;
      if (g.owner(v) == player)
        {
          if (strategy.size() != n || strategy[v] < 0)
            {
              ok = false;
              reason = "node " + std::to_string(v) + " has no strategy move";
              return;
            }
          std::uint32_t w = static_cast<std::uint32_t>(strategy[v]);
          if (!g.has_edge(v, w))
            {
              ok = false;
              reason = "strategy move " + std::to_string(v) + " -> " +
                       std::to_string(w) + " is not an edge";
              return;
            }
          if (!region.test(w))
            {
              ok = false;
              reason = "strategy move " + std::to_string(v) + " -> " +
                       std::to_string(w) + " leaves the region";
              return;
            }
          restricted[v].push_back(w);
        }
      else
        {
          for (std::uint32_t w : g.successors(v))
            {
              if (!region.test(w))
                {
                  ok = false;
                  reason = "opponent escape " + std::to_string(v) + " -> " +
                           std::to_string(w);
                  return;
                }
              restricted[v].push_back(w);
            }
        }
    });
    if (!ok)
      return fail(reason);

    NodeSet bad = detail::cycle_witnesses(
        g, region, 1 - player,
        [&restricted](std::uint32_t v) -> const std::vector<std::uint32_t>& {
          return restricted[v];
        });
    if (!bad.empty())
      return fail("losing cycle through node " +
                  std::to_string(bad.first()));
    if (why)
      why->clear();
    return true;
  }
}
