#pragma once

#include <cstdint>
#include <vector>

#include <pgame/node_set.hpp>

namespace pgame
{
  struct SccResult
  {
    static constexpr std::uint32_t unassigned = 0xffffffffu;

    /// Component id per node; `unassigned` on nodes outside the mask.
    /// Ids follow Tarjan pop order, so every cross-component edge u -> w
    /// satisfies comp[u] > comp[w] (sinks carry the smallest ids).
    std::vector<std::uint32_t> comp;
    std::uint32_t count = 0;

    bool same(std::uint32_t u, std::uint32_t w) const
    {
      return comp[u] != unassigned && comp[u] == comp[w];
    }
  };

  /// Iterative Tarjan over an implicit graph: succ_of(v) yields a range of
  /// successor indices. Nodes outside `alive` (when given) are skipped as
  /// are edges leading out of it.
  template <typename SuccFn>
  SccResult scc_decompose(std::uint32_t n, const NodeSet* alive,
                          SuccFn&& succ_of)
  {
    SccResult res;
    res.comp.assign(n, SccResult::unassigned);

    constexpr std::uint32_t none = SccResult::unassigned;
    std::vector<std::uint32_t> index(n, none), low(n, 0);
    std::vector<std::uint32_t> stack;       // Tarjan node stack
    std::vector<bool> on_stack(n, false);
    std::uint32_t next_index = 0;

    struct Frame
    {
      std::uint32_t node;
      std::uint32_t child; // next successor position to examine
    };
    std::vector<Frame> dfs;

    for (std::uint32_t root = 0; root < n; ++root)
      {
        if (index[root] != none || (alive && !alive->test(root)))
          continue;
        dfs.push_back({root, 0});
        while (!dfs.empty())
          {
            Frame& fr = dfs.back();
            std::uint32_t v = fr.node;
            if (fr.child == 0)
              {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = true;
              }
            auto succs = succ_of(v);
            bool descended = false;
            while (fr.child < succs.size())
              {
                std::uint32_t w = succs[fr.child++];
                if (alive && !alive->test(w))
                  continue;
                if (index[w] == none)
                  {
                    dfs.push_back({w, 0});
                    descended = true;
                    break;
                  }
                if (on_stack[w] && index[w] < low[v])
                  low[v] = index[w];
              }
            if (descended)
              continue;
            if (low[v] == index[v])
              {
                std::uint32_t id = res.count++;
                for (;;)
                  {
                    std::uint32_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    res.comp[w] = id;
                    if (w == v)
                      break;
                  }
              }
            dfs.pop_back();
            if (!dfs.empty())
              {
                std::uint32_t parent = dfs.back().node;
                if (low[v] < low[parent])
                  low[parent] = low[v];
              }
          }
      }
    return res;
  }
}
