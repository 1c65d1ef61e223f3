#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <pgame/arena.hpp>
#include <pgame/rng.hpp>

namespace pgame
{
  // Random game families. Per node the stream is consumed in the fixed
  // order priority, owner, out-degree, successors; regenerating an instance
  // therefore reproduces it bit for bit, and an edge cap aborts at a
  // deterministic point of the stream.

  enum class GenFamily
  {
    uniform, // n chosen freely
    exp2,    // n = 2^k
    exp_e,   // n = round(e^k)
    exp10,   // n = 10^k
  };

  inline const char* family_name(GenFamily f)
  {
    switch (f)
      {
      case GenFamily::uniform:
        return "uniform";
      case GenFamily::exp2:
        return "exp2";
      case GenFamily::exp_e:
        return "exp-e";
      case GenFamily::exp10:
        return "exp10";
      }
    return "?";
  }

  inline GenFamily family_from_name(const std::string& s)
  {
    if (s == "uniform")
      return GenFamily::uniform;
    if (s == "exp2")
      return GenFamily::exp2;
    if (s == "exp-e")
      return GenFamily::exp_e;
    if (s == "exp10")
      return GenFamily::exp10;
    throw std::invalid_argument("unknown family '" + s +
                                "' (expected uniform, exp2, exp-e or exp10)");
  }

  /// Node count of the exponential families: 2^k exact, round(e^k) to
  /// nearest, 10^k exact. Throws std::overflow_error once the count no
  /// longer fits a node index.
  inline std::uint32_t family_size(GenFamily f, std::uint32_t k)
  {
    constexpr std::uint64_t limit = 0x7fffffffull;
    std::uint64_t n = 0;
    switch (f)
      {
      case GenFamily::uniform:
        throw std::invalid_argument(
            "family_size(): uniform takes an explicit node count");
      case GenFamily::exp2:
        if (k >= 31)
          throw std::overflow_error("family_size(): 2^k out of range");
        n = 1ull << k;
        break;
      case GenFamily::exp_e:
        {
          double v = std::exp(static_cast<double>(k));
          if (v > static_cast<double>(limit))
            throw std::overflow_error("family_size(): e^k out of range");
          n = static_cast<std::uint64_t>(std::llround(v));
          break;
        }
      case GenFamily::exp10:
        n = 1;
        for (std::uint32_t i = 0; i < k; ++i)
          {
            n *= 10;
            if (n > limit)
              throw std::overflow_error("family_size(): 10^k out of range");
          }
        break;
      }
    if (n == 0 || n > limit)
      throw std::overflow_error("family_size(): node count out of range");
    return static_cast<std::uint32_t>(n);
  }

  struct GenSpec
  {
    GenFamily family = GenFamily::uniform;
    /// Node count; derived from k for the exponential families.
    std::uint32_t n = 0;
    /// Number of priorities, drawn uniformly from {0..k-1} (max semantics).
    std::uint32_t k = 2;
    std::uint64_t seed = 0;
    /// Instances per cell.
    std::uint32_t count = 20;
    /// Out-degree bounds; 0/0 selects the full range 1..n.
    std::uint32_t min_degree = 0;
    std::uint32_t max_degree = 0;
  };

  /// Fill in n for exponential families and validate the spec.
  inline GenSpec resolve_spec(GenSpec spec)
  {
    if (spec.family != GenFamily::uniform)
      spec.n = family_size(spec.family, spec.k);
    if (spec.n == 0)
      throw std::invalid_argument("generate: node count must be positive");
    if (spec.k == 0)
      throw std::invalid_argument("generate: need at least one priority");
    if ((spec.min_degree == 0) != (spec.max_degree == 0))
      throw std::invalid_argument(
          "generate: set both degree bounds or neither");
    if (spec.min_degree > 0 &&
        (spec.min_degree > spec.max_degree || spec.max_degree > spec.n))
      throw std::invalid_argument("generate: bad degree bounds");
    return spec;
  }

  struct EdgeCapExceeded : std::runtime_error
  {
    explicit EdgeCapExceeded(std::uint64_t seen)
      : std::runtime_error("generate: edge cap exceeded"), edges_seen(seen)
    {
    }

    std::uint64_t edges_seen;
  };

  /// Instance `index` of the cell: per node a priority below k, a fair
  /// owner, an out-degree uniform in the configured range, and that many
  /// distinct successors (self loops allowed) via partial Fisher-Yates on a
  /// persistent pool. Max semantics, as the solvers' normalization expects.
  inline ParityGame generate_one(const GenSpec& spec, std::uint32_t index,
                                 std::uint64_t max_edges = 0)
  {
    GenSpec s = resolve_spec(spec);
    SplitMix64 rng(sub_seed(s.seed, index));
    std::uint32_t n = s.n;
    std::uint32_t lo = s.min_degree == 0 ? 1 : s.min_degree;
    std::uint32_t hi = s.max_degree == 0 ? n : s.max_degree;

    GameBuilder b(Semantics::max, n);
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::uint64_t edges = 0;
    for (std::uint32_t v = 0; v < n; ++v)
      {
        std::uint32_t priority = rng.below(s.k);
        int owner = static_cast<int>(rng.below(2));
        std::uint32_t degree = lo + rng.below(hi - lo + 1);
        edges += degree;
        if (max_edges && edges > max_edges)
          throw EdgeCapExceeded(edges);
        std::vector<std::uint32_t> succs(degree);
        for (std::uint32_t t = 0; t < degree; ++t)
          {
            std::uint32_t r = t + rng.below(n - t);
            std::swap(pool[t], pool[r]);
            succs[t] = pool[t];
          }
        b.add_node(owner, priority, std::move(succs));
      }
    return std::move(b).build();
  }

  inline std::string instance_filename(const GenSpec& spec,
                                       std::uint32_t index)
  {
    GenSpec s = resolve_spec(spec);
    return std::string(family_name(s.family)) + "_n" + std::to_string(s.n) +
           "_k" + std::to_string(s.k) + "_s" + std::to_string(s.seed) + "_" +
           std::to_string(index) + ".gm";
  }
}
