#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <pgame/node_set.hpp>

namespace pgame
{
  /// Which parity of the least (min) or greatest (max) priority seen
  /// infinitely often decides a play. Player 0 wins iff that priority is
  /// even. Solvers work on the canonical form: min semantics, priorities >= 1.
  enum class Semantics
  {
    min,
    max,
  };

  enum class Algorithm
  {
    apt,
    zielonka,
    spm,
    oracle,
  };

  inline const char* algorithm_name(Algorithm a)
  {
    switch (a)
      {
      case Algorithm::apt:
        return "apt";
      case Algorithm::zielonka:
        return "re";
      case Algorithm::spm:
        return "sp";
      case Algorithm::oracle:
        return "oracle";
      }
    return "?";
  }

  class GameBuilder;

  /// Immutable parity game arena. Total successor relation (every node has
  /// at least one successor), no duplicate edges, adjacency stored CSR both
  /// ways with predecessors the exact transpose of successors. Safe to share
  /// across threads once built.
  class ParityGame
  {
  public:
    ParityGame() = default;

    std::uint32_t node_count() const { return n_; }
    std::uint64_t edge_count() const { return succ_.size(); }
    Semantics semantics() const { return sem_; }

    int owner(std::uint32_t v) const { return owner_[v]; }
    std::uint32_t priority(std::uint32_t v) const { return priority_[v]; }

    std::span<const std::uint32_t> successors(std::uint32_t v) const
    {
      return {succ_.data() + succ_off_[v], succ_off_[v + 1] - succ_off_[v]};
    }

    std::span<const std::uint32_t> predecessors(std::uint32_t v) const
    {
      return {pred_.data() + pred_off_[v], pred_off_[v + 1] - pred_off_[v]};
    }

    std::uint32_t out_degree(std::uint32_t v) const
    {
      return succ_off_[v + 1] - succ_off_[v];
    }

    bool has_edge(std::uint32_t v, std::uint32_t w) const
    {
      for (std::uint32_t s : successors(v))
        if (s == w)
          return true;
      return false;
    }

    bool has_names() const { return !names_.empty(); }

    const std::string& name(std::uint32_t v) const
    {
      static const std::string none;
      return names_.empty() ? none : names_[v];
    }

    /// Largest (smallest) priority used; 0 on the empty game.
    std::uint32_t max_priority() const { return max_priority_; }
    std::uint32_t min_priority() const { return min_priority_; }

    bool is_canonical() const
    {
      return sem_ == Semantics::min && (n_ == 0 || min_priority_ >= 1);
    }

    /// Copy with every priority replaced by f(priority) under the given
    /// semantics; owners, edges and names are carried over verbatim. A
    /// priority-only rewrite cannot break the arena invariants, so this
    /// skips the full rebuild a GameBuilder round trip would cost.
    template <class F>
    ParityGame remap_priorities(Semantics sem, F&& f) const
    {
      ParityGame out(*this);
      out.sem_ = sem;
      out.max_priority_ = 0;
      out.min_priority_ = 0;
      for (std::uint32_t v = 0; v < out.n_; ++v)
        {
          std::uint32_t p = f(out.priority_[v]);
          out.priority_[v] = p;
          if (v == 0 || p > out.max_priority_)
            out.max_priority_ = p;
          if (v == 0 || p < out.min_priority_)
            out.min_priority_ = p;
        }
      return out;
    }

    /// Structural equality: graph, owners, priorities, semantics, and names
    /// up to surrounding whitespace.
    friend bool operator==(const ParityGame& a, const ParityGame& b)
    {
      if (a.n_ != b.n_ || a.sem_ != b.sem_ || a.owner_ != b.owner_ ||
          a.priority_ != b.priority_ || a.succ_off_ != b.succ_off_ ||
          a.succ_ != b.succ_)
        return false;
      for (std::uint32_t v = 0; v < a.n_; ++v)
        if (trimmed(a.name(v)) != trimmed(b.name(v)))
          return false;
      return true;
    }

  private:
    static std::string trimmed(const std::string& s)
    {
      std::size_t b = s.find_first_not_of(" \t");
      if (b == std::string::npos)
        return {};
      std::size_t e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    }

    friend class GameBuilder;

    std::uint32_t n_ = 0;
    Semantics sem_ = Semantics::min;
    std::uint32_t max_priority_ = 0;
    std::uint32_t min_priority_ = 0;
    std::vector<std::uint8_t> owner_;
    std::vector<std::uint32_t> priority_;
    std::vector<std::uint32_t> succ_off_, succ_;
    std::vector<std::uint32_t> pred_off_, pred_;
    std::vector<std::string> names_;
  };

  /// Assembles a ParityGame. Nodes may be declared in any order via
  /// ensure_node (parser use) or appended with add_node; build() validates
  /// totality and edge targets and computes the transposed adjacency.
  class GameBuilder
  {
  public:
    explicit GameBuilder(Semantics sem, std::uint32_t reserve_nodes = 0)
      : sem_(sem)
    {
      nodes_.reserve(reserve_nodes);
    }

    /// Index of a node slot, created undefined if not yet present.
    std::uint32_t ensure_node(std::uint32_t index)
    {
      if (index >= nodes_.size())
        nodes_.resize(index + 1);
      return index;
    }

    void define_node(std::uint32_t index, int owner, std::uint32_t priority,
                     std::vector<std::uint32_t> successors,
                     std::string name = {})
    {
      ensure_node(index);
      Node& nd = nodes_[index];
      if (nd.defined)
        throw std::invalid_argument("GameBuilder: node " +
                                    std::to_string(index) +
                                    " defined twice");
      if (owner != 0 && owner != 1)
        throw std::invalid_argument("GameBuilder: owner must be 0 or 1");
      nd.defined = true;
      nd.owner = static_cast<std::uint8_t>(owner);
      nd.priority = priority;
      nd.successors = std::move(successors);
      nd.name = std::move(name);
      has_names_ = has_names_ || !nd.name.empty();
    }

    std::uint32_t add_node(int owner, std::uint32_t priority,
                           std::vector<std::uint32_t> successors,
                           std::string name = {})
    {
      std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back();
      define_node(idx, owner, priority, std::move(successors),
                  std::move(name));
      return idx;
    }

    std::uint32_t size() const { return static_cast<std::uint32_t>(nodes_.size()); }

    ParityGame build() &&
    {
      std::uint32_t n = static_cast<std::uint32_t>(nodes_.size());
      ParityGame g;
      g.n_ = n;
      g.sem_ = sem_;
      g.owner_.resize(n);
      g.priority_.resize(n);
      g.succ_off_.assign(n + 1, 0);
      g.pred_off_.assign(n + 1, 0);
      if (has_names_)
        g.names_.resize(n);

      std::uint64_t edges = 0;
      for (std::uint32_t v = 0; v < n; ++v)
        {
          const Node& nd = nodes_[v];
          if (!nd.defined)
            throw std::invalid_argument("GameBuilder: node " +
                                        std::to_string(v) +
                                        " referenced but never defined");
          if (nd.successors.empty())
            throw std::invalid_argument("GameBuilder: node " +
                                        std::to_string(v) +
                                        " has no successor");
          edges += nd.successors.size();
        }
      g.succ_.reserve(edges);

      // stamp array keeps the duplicate check linear in the edge count
      std::vector<std::uint32_t> seen(n, 0);
      for (std::uint32_t v = 0; v < n; ++v)
        {
          Node& nd = nodes_[v];
          g.owner_[v] = nd.owner;
          g.priority_[v] = nd.priority;
          if (has_names_)
            g.names_[v] = std::move(nd.name);
          g.succ_off_[v] = static_cast<std::uint32_t>(g.succ_.size());
          for (std::uint32_t w : nd.successors)
            {
              if (w >= n)
                throw std::invalid_argument(
                    "GameBuilder: edge " + std::to_string(v) + " -> " +
                    std::to_string(w) + " leaves the arena");
              if (seen[w] == v + 1)
                throw std::invalid_argument("GameBuilder: duplicate edge " +
                                            std::to_string(v) + " -> " +
                                            std::to_string(w));
              seen[w] = v + 1;
              g.succ_.push_back(w);
            }
        }
      g.succ_off_[n] = static_cast<std::uint32_t>(g.succ_.size());

      // transpose
      std::vector<std::uint32_t> indeg(n, 0);
      for (std::uint32_t w : g.succ_)
        ++indeg[w];
      g.pred_off_[0] = 0;
      for (std::uint32_t v = 0; v < n; ++v)
        g.pred_off_[v + 1] = g.pred_off_[v] + indeg[v];
      g.pred_.resize(g.succ_.size());
      std::vector<std::uint32_t> fill(g.pred_off_.begin(),
                                      g.pred_off_.end() - 1);
      for (std::uint32_t v = 0; v < n; ++v)
        for (std::uint32_t w : g.successors(v))
          g.pred_[fill[w]++] = v;

      g.max_priority_ = 0;
      g.min_priority_ = 0;
      if (n > 0)
        {
          g.max_priority_ = g.priority_[0];
          g.min_priority_ = g.priority_[0];
          for (std::uint32_t v = 1; v < n; ++v)
            {
              if (g.priority_[v] > g.max_priority_)
                g.max_priority_ = g.priority_[v];
              if (g.priority_[v] < g.min_priority_)
                g.min_priority_ = g.priority_[v];
            }
        }
      return g;
    }

  private:
    struct Node
    {
      bool defined = false;
      std::uint8_t owner = 0;
      std::uint32_t priority = 0;
      std::vector<std::uint32_t> successors;
      std::string name;
    };

    Semantics sem_;
    bool has_names_ = false;
    std::vector<Node> nodes_;
  };

  /// One-step force. Nodes from which `player` guarantees the next position
  /// lies in X: own nodes with some successor in X, opponent nodes with all
  /// successors in X.
  inline NodeSet force(const ParityGame& g, int player, const NodeSet& x)
  {
    std::uint32_t n = g.node_count();
    NodeSet r(n);
    for (std::uint32_t v = 0; v < n; ++v)
      {
        bool in;
        if (g.owner(v) == player)
          {
            in = false;
            for (std::uint32_t w : g.successors(v))
              if (x.test(w))
                {
                  in = true;
                  break;
                }
          }
        else
          {
            in = true;
            for (std::uint32_t w : g.successors(v))
              if (!x.test(w))
                {
                  in = false;
                  break;
                }
          }
        if (in)
          r.set(v);
      }
    return r;
  }

  /// Priority decomposition F_1 .. F_d of a canonical game: sets[i-1] holds
  /// the nodes of priority i. Empty classes are kept so the sequence always
  /// begins with the odd index 1.
  struct AlphaSequence
  {
    std::vector<NodeSet> sets;

    std::uint32_t depth() const { return static_cast<std::uint32_t>(sets.size()); }
    const NodeSet& at(std::uint32_t level) const { return sets[level]; }
  };

  inline AlphaSequence alpha_partition(const ParityGame& g)
  {
    if (!g.is_canonical())
      throw std::logic_error("alpha_partition(): game is not canonical");
    std::uint32_t n = g.node_count();
    std::uint32_t d = n == 0 ? 0 : g.max_priority();
    AlphaSequence a;
    a.sets.assign(d, NodeSet(n));
    for (std::uint32_t v = 0; v < n; ++v)
      a.sets[g.priority(v) - 1].set(v);
    return a;
  }

  struct NormalizeResult
  {
    ParityGame game;
    /// Pairs (old priority, new priority) for every used priority, ascending.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> priority_map;
  };

  /// Canonical form: min semantics with all priorities >= 1, same graph and
  /// node indexing, winners and optimal strategies untouched.
  ///
  /// max -> min uses p' = M' - p + 2 where M' is the largest used priority
  /// rounded up to even; this flips the order, keeps each parity (M' even),
  /// and lands in [2, M'+2). A min game containing priority 0 is shifted up
  /// by 2 wholesale.
  inline NormalizeResult normalize(const ParityGame& g)
  {
    std::uint32_t n = g.node_count();
    NormalizeResult res;

    std::uint32_t shift = 0;
    std::uint32_t mprime = 0;
    bool flip = g.semantics() == Semantics::max;
    if (n > 0)
      {
        if (flip)
          mprime = g.max_priority() + (g.max_priority() & 1);
        else if (g.min_priority() == 0)
          shift = 2;
      }
    auto remap = [&](std::uint32_t p) {
      return flip ? mprime - p + 2 : p + shift;
    };

    std::vector<bool> used(n == 0 ? 0 : g.max_priority() + 1, false);
    for (std::uint32_t v = 0; v < n; ++v)
      used[g.priority(v)] = true;
    for (std::uint32_t p = 0; p < used.size(); ++p)
      if (used[p])
        res.priority_map.emplace_back(p, remap(p));
    res.game = g.remap_priorities(Semantics::min, remap);
    return res;
  }

  /// Positional strategy: strategy[v] is the chosen successor, or -1 where
  /// the strategy is silent (opponent nodes, undecided nodes).
  using MemorylessStrategy = std::vector<std::int64_t>;

  struct SolveResult
  {
    NodeSet w0, w1;
    /// Empty when the solver does not produce strategies.
    MemorylessStrategy strategy0, strategy1;
    std::string algorithm;
    /// Solver-specific effort: APT recursive calls, RE recursion count,
    /// SP successful lifts, oracle strategies examined.
    std::uint64_t work = 0;
    double wall_ms = 0.0;
  };

  /// Check the SolveResult container invariants against its game: the two
  /// regions partition the nodes and strategies stay inside the edge
  /// relation and the owner's winning region.
  inline void validate_result(const ParityGame& g, const SolveResult& r)
  {
    std::uint32_t n = g.node_count();
    if (r.w0.universe() != n || r.w1.universe() != n)
      throw std::logic_error("validate_result(): universe mismatch");
    if (r.w0.intersects(r.w1) || (r.w0 | r.w1) != NodeSet::full(n))
      throw std::logic_error("validate_result(): regions do not partition");
    for (int pl = 0; pl < 2; ++pl)
      {
        const MemorylessStrategy& s = pl == 0 ? r.strategy0 : r.strategy1;
        const NodeSet& w = pl == 0 ? r.w0 : r.w1;
        if (s.empty())
          continue;
        if (s.size() != n)
          throw std::logic_error("validate_result(): strategy size mismatch");
        for (std::uint32_t v = 0; v < n; ++v)
          {
            if (s[v] < 0)
              continue;
            if (g.owner(v) != pl || !w.test(v))
              throw std::logic_error(
                  "validate_result(): strategy set outside own region");
            if (!g.has_edge(v, static_cast<std::uint32_t>(s[v])))
              throw std::logic_error(
                  "validate_result(): strategy uses a missing edge");
          }
      }
  }

  /// FNV-1a over the player-0 region words plus the node count. Used to
  /// compare winners across algorithms without shipping whole bitsets.
  inline std::uint64_t region_digest(const NodeSet& w0)
  {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto eat = [&h](std::uint64_t x) {
      for (int i = 0; i < 8; ++i)
        {
          h ^= (x >> (8 * i)) & 0xff;
          h *= 0x100000001b3ull;
        }
    };
    eat(w0.universe());
    for (std::uint64_t w : w0.words())
      eat(w);
    return h;
  }
}
