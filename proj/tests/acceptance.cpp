// Release gate for the solver stack: eight checks, one [PASS]/[FAIL] line
// each, nonzero exit on any failure. Every threshold is pinned right here
// in code so a regression cannot be waved through from the outside.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <pgame/bench.hpp>
#include <pgame/solve.hpp>

#include "fixtures.hpp"

using namespace pgame;

namespace
{
  constexpr std::uint32_t kOracleGames = 1000;    // n <= 7, exhaustive truth
  constexpr std::uint32_t kCrossGames = 500;      // n <= 200, digest quorum
  constexpr std::uint32_t kPreprocessGames = 200; // n <= 40, all pipelines
  constexpr std::uint32_t kInstances = 20;        // per measured cell
  constexpr double kTimeoutSeconds = 60.0;
  /// Required advantage of apt over both baselines on the uniform
  /// n=2000 k=2 cell, on means with non-finishers charged the timeout.
  constexpr double kLeadFactor = 2.0;

  std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b)
  {
    return b != 0 && a > ~0ull / b ? ~0ull : a * b;
  }

  std::uint64_t sat_pow(std::uint64_t base, std::uint32_t exp)
  {
    std::uint64_t r = 1;
    while (exp--)
      r = sat_mul(r, base);
    return r;
  }

  /// Size-randomized cell like the unit fixtures use, but on gate-local
  /// seeds so this binary certifies fresh instances.
  GenSpec drawn_spec(std::uint64_t base, std::uint32_t i, std::uint32_t max_n,
                     std::uint32_t max_k, std::uint32_t max_degree)
  {
    SplitMix64 mix(sub_seed(base, i));
    GenSpec s;
    s.n = 1 + mix.below(max_n);
    s.k = 1 + mix.below(max_k);
    s.seed = base + i;
    if (max_degree)
      {
        s.min_degree = 1;
        s.max_degree = std::min(max_degree, s.n);
      }
    return s;
  }

  /// Placeholder table for solve_spm's out parameter to move over.
  ProgressMeasure measure_sink()
  {
    GameBuilder b(Semantics::min, 1);
    b.add_node(0, 2, {0});
    return ProgressMeasure(std::move(b).build());
  }

  /// Work-counter audit, fed by every solve of checks 1 and 2 and judged
  /// by check 7: apt stays below (n+2)^depth recursive calls, the
  /// progress-measure solver below n * |measure space| lifts.
  struct WorkAudit
  {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    std::string first;
  };

  void audit_apt(WorkAudit& audit, const AptStats& stats, std::uint64_t work,
                 std::uint32_t n, const std::string& label)
  {
    ++audit.checked;
    std::uint64_t bound = sat_pow(n + 2, stats.depth);
    if (work > bound)
      {
        ++audit.violations;
        if (audit.first.empty())
          audit.first = label + ": apt work " + std::to_string(work) + " > " +
                        std::to_string(bound);
      }
  }

  void audit_spm(WorkAudit& audit, const ProgressMeasure& pm,
                 std::uint64_t work, std::uint32_t n, const std::string& label)
  {
    ++audit.checked;
    std::uint64_t bound = sat_mul(n, pm.space());
    if (work > bound)
      {
        ++audit.violations;
        if (audit.first.empty())
          audit.first = label + ": spm work " + std::to_string(work) + " > " +
                        std::to_string(bound);
      }
  }

  bool oracle_agreement(std::string& detail, WorkAudit& audit)
  {
    std::uint32_t bad = 0;
    std::string first;
    for (std::uint32_t i = 0; i < kOracleGames; ++i)
      {
        GenSpec spec = drawn_spec(0x97ce0301, i, 7, 5, 0);
        ParityGame g = generate_one(spec, 0);
        std::string label = "game " + std::to_string(i) + " (n=" +
                            std::to_string(g.node_count()) + ", k=" +
                            std::to_string(spec.k) + ")";
        SolveResult truth = solve_oracle(g);
        AptStats stats;
        SolveResult apt = solve_apt(g, nullptr, &stats);
        SolveResult re = solve_zielonka(g);
        ProgressMeasure pm = measure_sink();
        SolveResult sp = solve_spm(g, nullptr, &pm);
        audit_apt(audit, stats, apt.work, g.node_count(), label);
        audit_spm(audit, pm, sp.work, g.node_count(), label);
        if (!(apt.w0 == truth.w0 && re.w0 == truth.w0 && sp.w0 == truth.w0))
          {
            ++bad;
            if (first.empty())
              first = label;
          }
      }
    if (bad)
      {
        detail = std::to_string(bad) + " of " + std::to_string(kOracleGames) +
                 " games disagree with the oracle, first " + first;
        return false;
      }
    detail =
        std::to_string(kOracleGames) + " games, all three solvers exact";
    return true;
  }

  bool cross_digests(std::string& detail, WorkAudit& audit)
  {
    std::uint32_t bad = 0;
    std::string first;
    for (std::uint32_t i = 0; i < kCrossGames; ++i)
      {
        GenSpec spec = drawn_spec(0x97ce0302, i, 200, 8, 5);
        ParityGame g = generate_one(spec, 0);
        std::string label = "game " + std::to_string(i) + " (n=" +
                            std::to_string(g.node_count()) + ", k=" +
                            std::to_string(spec.k) + ")";
        AptStats stats;
        SolveResult apt = solve_apt(g, nullptr, &stats);
        SolveResult re = solve_zielonka(g);
        ProgressMeasure pm = measure_sink();
        SolveResult sp = solve_spm(g, nullptr, &pm);
        audit_apt(audit, stats, apt.work, g.node_count(), label);
        audit_spm(audit, pm, sp.work, g.node_count(), label);
        std::uint64_t d = region_digest(apt.w0);
        if (region_digest(re.w0) != d || region_digest(sp.w0) != d)
          {
            ++bad;
            if (first.empty())
              first = label;
          }
      }
    if (bad)
      {
        detail = std::to_string(bad) + " of " + std::to_string(kCrossGames) +
                 " instances split the solvers, first " + first;
        return false;
      }
    detail = std::to_string(kCrossGames) +
             " games, digests identical across apt, zielonka and spm";
    return true;
  }

  bool worked_example(std::string& detail)
  {
    ParityGame g = fixtures::fig1();
    std::vector<const char*> missed;

    if (!(force(g, 1, fixtures::make_set(7, {6})) ==
          fixtures::make_set(7, {2, 4, 6})))
      missed.push_back("one-step force");

    AptStats stats;
    AptTrace trace;
    SolveResult res = solve_apt(g, nullptr, &stats, &trace);
    if (stats.depth != 5)
      missed.push_back("recursion depth");
    if (!(trace.first_reach.size() == 6 && trace.first_reach[5] &&
          *trace.first_reach[5] == fixtures::make_set(7, {0, 1, 2, 5})))
      missed.push_back("deepest first-entry reach set");
    if (!(trace.first_leaf_result &&
          *trace.first_leaf_result == fixtures::make_set(7, {0, 1, 5, 6})))
      missed.push_back("first leaf evaluation");
    if (!(res.w0 == NodeSet::full(7)))
      missed.push_back("winning region");

    if (missed.empty())
      {
        detail = "force step, descent trace and regions all reproduced";
        return true;
      }
    detail = "differs on:";
    for (const char* m : missed)
      {
        detail += ' ';
        detail += m;
      }
    return false;
  }

  bool preprocessing_invariance(std::string& detail)
  {
    const Preprocess pipelines[] = {Preprocess::loops, Preprocess::scc,
                                    Preprocess::compress, Preprocess::all};
    const Algorithm backends[] = {Algorithm::apt, Algorithm::zielonka,
                                  Algorithm::spm};
    std::uint32_t bad = 0;
    std::string first;
    for (std::uint32_t i = 0; i < kPreprocessGames; ++i)
      {
        GenSpec spec = drawn_spec(0x97ce0304, i, 40, 6, 6);
        ParityGame g = generate_one(spec, 0);
        for (Algorithm algo : backends)
          {
            SolveResult bare = solve_game(g, algo);
            for (Preprocess pre : pipelines)
              {
                SolveResult cooked = solve_game(g, algo, pre);
                if (cooked.w0 != bare.w0 || cooked.w1 != bare.w1)
                  {
                    ++bad;
                    if (first.empty())
                      first = std::string("game ") + std::to_string(i) + " " +
                              algorithm_name(algo) + "/" +
                              preprocess_name(pre);
                  }
              }
          }
      }
    if (bad)
      {
        detail = std::to_string(bad) + " region changes, first " + first;
        return false;
      }
    detail = std::to_string(kPreprocessGames) +
             " games x 3 backends x 4 pipelines, regions unchanged";
    return true;
  }

  const SummaryRow* row_of(const std::vector<SummaryRow>& rows,
                           const std::string& algo)
  {
    for (const SummaryRow& r : rows)
      if (r.algorithm == algo)
        return &r;
    return nullptr;
  }

  bool uniform_workload(std::string& detail)
  {
    BenchConfig config;
    GenSpec spec;
    spec.n = 2000;
    spec.k = 2;
    spec.seed = 0x97ce0305;
    spec.count = kInstances;
    config.cells = {spec};
    config.algorithms = {{Algorithm::apt, Preprocess::none},
                         {Algorithm::zielonka, Preprocess::none},
                         {Algorithm::spm, Preprocess::none}};
    config.timeout_seconds = kTimeoutSeconds;

    std::vector<SummaryRow> rows =
        summarize(run_bench(config), kTimeoutSeconds);
    const SummaryRow* apt = row_of(rows, "apt");
    const SummaryRow* re = row_of(rows, "re");
    const SummaryRow* sp = row_of(rows, "sp");
    if (!apt || !re || !sp)
      {
        detail = "summary rows missing";
        return false;
      }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "apt ok %u/%u, means %.1f / %.1f / %.1f ms for apt / "
                  "zielonka / spm",
                  apt->ok, kInstances, apt->mean_all_ms, re->mean_all_ms,
                  sp->mean_all_ms);
    detail = buf;
    bool finishes = apt->ok == kInstances && apt->mean_ok_ms &&
                    *apt->mean_ok_ms < kTimeoutSeconds * 1000.0;
    bool leads = apt->mean_all_ms * kLeadFactor <= re->mean_all_ms &&
                 apt->mean_all_ms * kLeadFactor <= sp->mean_all_ms;
    return finishes && leads;
  }

  bool family_orderings(std::string& detail)
  {
    auto cell_means = [](GenFamily family, std::uint32_t k, std::uint64_t seed,
                         double* apt_ms, double* re_ms, std::uint32_t* apt_ok,
                         std::uint32_t* re_ok) {
      BenchConfig config;
      GenSpec spec;
      spec.family = family;
      spec.k = k;
      spec.seed = seed;
      spec.count = kInstances;
      config.cells = {spec};
      config.algorithms = {{Algorithm::apt, Preprocess::none},
                           {Algorithm::zielonka, Preprocess::none}};
      config.timeout_seconds = kTimeoutSeconds;
      std::vector<SummaryRow> rows =
          summarize(run_bench(config), kTimeoutSeconds);
      const SummaryRow* apt = row_of(rows, "apt");
      const SummaryRow* re = row_of(rows, "re");
      if (!apt || !re)
        return false;
      *apt_ms = apt->mean_all_ms;
      *re_ms = re->mean_all_ms;
      *apt_ok = apt->ok;
      *re_ok = re->ok;
      return true;
    };

    double apt10 = 0, re10 = 0, apt2 = 0, re2 = 0;
    std::uint32_t apt10_ok = 0, re10_ok = 0, apt2_ok = 0, re2_ok = 0;
    if (!cell_means(GenFamily::exp10, 3, 0x97ce0306, &apt10, &re10, &apt10_ok,
                    &re10_ok) ||
        !cell_means(GenFamily::exp2, 10, 0x97ce0307, &apt2, &re2, &apt2_ok,
                    &re2_ok))
      {
        detail = "summary rows missing";
        return false;
      }
    char buf[220];
    std::snprintf(buf, sizeof buf,
                  "exp10 n=1000: apt %.1f vs zielonka %.1f ms; exp2 n=1024: "
                  "zielonka %.1f vs apt %.1f ms (ok %u/%u/%u/%u)",
                  apt10, re10, re2, apt2, apt10_ok, re10_ok, re2_ok, apt2_ok);
    detail = buf;
    return apt10 < re10 && re2 < apt2;
  }

  bool work_bounds(std::string& detail, const WorkAudit& audit)
  {
    if (audit.violations)
      {
        detail = std::to_string(audit.violations) + " of " +
                 std::to_string(audit.checked) +
                 " runs exceeded their bound, first " + audit.first;
        return false;
      }
    detail = std::to_string(audit.checked) + " solver runs within bounds";
    return true;
  }

  bool persistence(std::string& detail)
  {
    GenSpec uniform;
    uniform.n = 300;
    uniform.k = 6;
    uniform.seed = 0x97ce0308;
    uniform.count = 10;
    GenSpec expe;
    expe.family = GenFamily::exp_e;
    expe.k = 7;
    expe.seed = 0x97ce0309;
    expe.count = 2;

    std::uint32_t games = 0;
    for (const GenSpec& spec : {uniform, expe})
      for (std::uint32_t j = 0; j < spec.count; ++j)
        {
          ParityGame g = generate_one(spec, j);
          std::string text = serialize_game(g);
          ParityGame back = parse_game(text, g.semantics());
          if (serialize_game(back) != text)
            {
              detail = "round trip altered " + instance_filename(spec, j);
              return false;
            }
          GenSpec copy = spec;
          if (serialize_game(generate_one(copy, j)) != text)
            {
              detail = "regeneration differs on " + instance_filename(spec, j);
              return false;
            }
          ++games;
        }
    detail = std::to_string(games) +
             " instances round-tripped and regenerated bit for bit";
    return true;
  }
}

int main()
{
  WorkAudit audit;
  int failures = 0;
  auto run = [&](int index, const char* name, auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try
      {
        ok = fn(detail);
      }
    catch (const std::exception& e)
      {
        ok = false;
        detail = std::string("exception: ") + e.what();
      }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    std::printf("[%s] %d: %s (%s%s%.1f s)\n", ok ? "PASS" : "FAIL", index,
                name, detail.c_str(), detail.empty() ? "" : "; ", secs);
    std::fflush(stdout);
    if (!ok)
      ++failures;
  };

  run(1, "apt, zielonka and spm match the exhaustive oracle on small games",
      [&](std::string& d) { return oracle_agreement(d, audit); });
  run(2, "winning-region digests agree across solvers on midsize games",
      [&](std::string& d) { return cross_digests(d, audit); });
  run(3, "the seven-node worked example reproduces its traced facts",
      [&](std::string& d) { return worked_example(d); });
  run(4, "preprocessing pipelines preserve winning regions",
      [&](std::string& d) { return preprocessing_invariance(d); });
  run(5, "uniform n=2000 k=2 cell: apt finishes everywhere and leads 2x",
      [&](std::string& d) { return uniform_workload(d); });
  run(6, "runtime ordering flips between exp10 k=3 and exp2 k=10",
      [&](std::string& d) { return family_orderings(d); });
  run(7, "work counters respect their proven bounds",
      [&](std::string& d) { return work_bounds(d, audit); });
  run(8, "serialization round-trips and regeneration is bit-identical",
      [&](std::string& d) { return persistence(d); });

  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
