#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <pgame/apt.hpp>
#include <pgame/arena.hpp>
#include <pgame/classic.hpp>
#include <pgame/limits.hpp>
#include <pgame/transform.hpp>

namespace pgame
{
  enum class Preprocess
  {
    none,
    loops,
    scc,
    compress,
    all,
  };

  inline const char* preprocess_name(Preprocess p)
  {
    switch (p)
      {
      case Preprocess::none:
        return "none";
      case Preprocess::loops:
        return "loops";
      case Preprocess::scc:
        return "scc";
      case Preprocess::compress:
        return "compress";
      case Preprocess::all:
        return "all";
      }
    return "?";
  }

  inline Algorithm algorithm_from_name(const std::string& s)
  {
    if (s == "apt")
      return Algorithm::apt;
    if (s == "re")
      return Algorithm::zielonka;
    if (s == "sp")
      return Algorithm::spm;
    if (s == "oracle")
      return Algorithm::oracle;
    throw std::invalid_argument("unknown algorithm '" + s +
                                "' (expected apt, re, sp or oracle)");
  }

  inline Preprocess preprocess_from_name(const std::string& s)
  {
    if (s == "none")
      return Preprocess::none;
    if (s == "loops")
      return Preprocess::loops;
    if (s == "scc")
      return Preprocess::scc;
    if (s == "compress")
      return Preprocess::compress;
    if (s == "all")
      return Preprocess::all;
    throw std::invalid_argument(
        "unknown preprocessing '" + s +
        "' (expected none, loops, scc, compress or all)");
  }

  /// Full solving pipeline: normalize, run the requested reductions, solve
  /// the remainder with the backend, and stitch regions (and strategies,
  /// when the backend produces them) back to the input indexing. Wall time
  /// covers everything from normalization on; parsing and generation are
  /// the caller's business.
  inline SolveResult solve_game(const ParityGame& g, Algorithm algo,
                                Preprocess pre = Preprocess::none,
                                const SolveLimits& limits = {},
                                std::uint32_t oracle_bound = 12)
  {
    auto t0 = std::chrono::steady_clock::now();
    Budget budget(limits);
    SolveResult res;
    if (pre == Preprocess::none)
      {
        res = detail::run_backend(g, algo, &budget, oracle_bound);
      }
    else
      {
        if ((pre == Preprocess::scc || pre == Preprocess::all) &&
            algo == Algorithm::oracle)
          throw std::invalid_argument(
              "solve_game(): scc preprocessing cannot drive the oracle");
        std::uint32_t n = g.node_count();
        NormalizeResult nr = normalize(g);

        bool do_loops = pre == Preprocess::loops || pre == Preprocess::all;
        bool do_compress =
            pre == Preprocess::compress || pre == Preprocess::all;
        bool do_scc = pre == Preprocess::scc || pre == Preprocess::all;

        SelfLoopResult slr;
        const ParityGame* stage = &nr.game;
        if (do_loops)
          {
            slr = remove_self_loops(nr.game);
            stage = &slr.residual;
          }
        CompressResult cr;
        if (do_compress)
          {
            cr = compress_priorities(*stage);
            stage = &cr.game;
          }

        SolveResult inner;
        if (do_scc)
          inner = scc_solve(*stage, algo, &budget, oracle_bound);
        else
          inner = detail::run_backend(*stage, algo, &budget, oracle_bound);

        res.w0 = NodeSet(n);
        res.w1 = NodeSet(n);
        res.work = inner.work;
        bool strategies = algo == Algorithm::zielonka;
        if (strategies)
          {
            res.strategy0.assign(n, -1);
            res.strategy1.assign(n, -1);
          }
        auto to_orig = [&](std::uint32_t sub) {
          return do_loops ? slr.residual_to_original[sub] : sub;
        };
        for (std::uint32_t v = 0; v < stage->node_count(); ++v)
          {
            std::uint32_t o = to_orig(v);
            (inner.w0.test(v) ? res.w0 : res.w1).set(o);
            if (strategies)
              {
                if (!inner.strategy0.empty() && inner.strategy0[v] >= 0)
                  res.strategy0[o] = to_orig(
                      static_cast<std::uint32_t>(inner.strategy0[v]));
                if (!inner.strategy1.empty() && inner.strategy1[v] >= 0)
                  res.strategy1[o] = to_orig(
                      static_cast<std::uint32_t>(inner.strategy1[v]));
              }
          }
        if (do_loops)
          {
            res.w0 |= slr.predecided_w0;
            res.w1 |= slr.predecided_w1;
            if (strategies)
              for (std::uint32_t v = 0; v < n; ++v)
                {
                  if (slr.strategy0[v] >= 0)
                    res.strategy0[v] = slr.strategy0[v];
                  if (slr.strategy1[v] >= 0)
                    res.strategy1[v] = slr.strategy1[v];
                }
          }
      }
    res.algorithm = algorithm_name(algo);
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
  }
}
