#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <pgame/generator.hpp>
#include <pgame/pgsolver_io.hpp>
#include <pgame/solve.hpp>

namespace pgame
{
  // Measurement harness: a cell is one generator spec, each of its
  // instances is solved by every configured algorithm under a shared
  // timeout. Records are keyed (cell, instance, algorithm) and returned in
  // that order no matter how many workers ran, so a bench run is
  // reproducible end to end; any digest disagreement between algorithms on
  // the same instance aborts the run.

  struct AlgoConfig
  {
    Algorithm algo = Algorithm::apt;
    Preprocess pre = Preprocess::none;
  };

  struct BenchConfig
  {
    std::vector<GenSpec> cells;
    std::vector<AlgoConfig> algorithms;
    double timeout_seconds = 60.0;
    /// Abort generation beyond this many edges (0 = off); the record
    /// becomes memout-guard.
    std::uint64_t max_edges = 0;
    /// Cap on NodeSet words allocated by one solve (0 = off).
    std::uint64_t max_set_words = 0;
    unsigned threads = 1;
    /// Where disagreement dumps are written.
    std::string dump_dir = ".";
    /// Node limit passed through when the oracle is among the algorithms.
    std::uint32_t oracle_bound = 12;
  };

  struct BenchRecord
  {
    std::uint64_t seed = 0;
    GenFamily family = GenFamily::uniform;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t instance = 0;
    std::uint64_t edges = 0;
    std::string algorithm;
    std::string preprocessing;
    Status status = Status::ok;
    /// Present iff status == ok.
    std::optional<double> time_ms;
    std::optional<std::uint64_t> digest;
  };

  struct BenchMismatch : std::runtime_error
  {
    BenchMismatch(const std::string& what, std::string path)
      : std::runtime_error(what), game_path(std::move(path))
    {
    }

    std::string game_path;
  };

  inline std::vector<BenchRecord> run_bench(const BenchConfig& config)
  {
    struct Task
    {
      std::uint32_t cell, instance, algo;
    };
    std::vector<GenSpec> cells;
    cells.reserve(config.cells.size());
    for (const GenSpec& c : config.cells)
      cells.push_back(resolve_spec(c));

    std::vector<Task> tasks;
    for (std::uint32_t c = 0; c < cells.size(); ++c)
      for (std::uint32_t j = 0; j < cells[c].count; ++j)
        for (std::uint32_t a = 0; a < config.algorithms.size(); ++a)
          tasks.push_back({c, j, a});

    std::vector<BenchRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;)
        {
          std::size_t t = next.fetch_add(1);
          if (t >= tasks.size())
            return;
          const Task& task = tasks[t];
          const GenSpec& spec = cells[task.cell];
          const AlgoConfig& ac = config.algorithms[task.algo];
          BenchRecord& rec = records[t];
          rec.seed = spec.seed;
          rec.family = spec.family;
          rec.n = spec.n;
          rec.k = spec.k;
          rec.instance = task.instance;
          rec.algorithm = algorithm_name(ac.algo);
          rec.preprocessing = preprocess_name(ac.pre);
          try
            {
              ParityGame game =
                  generate_one(spec, task.instance, config.max_edges);
              rec.edges = game.edge_count();
              SolveLimits limits;
              limits.timeout_seconds = config.timeout_seconds;
              limits.max_set_words = config.max_set_words;
              SolveResult res =
                  solve_game(game, ac.algo, ac.pre, limits, config.oracle_bound);
              rec.status = Status::ok;
              rec.time_ms = res.wall_ms;
              rec.digest = region_digest(res.w0);
            }
          catch (const EdgeCapExceeded& e)
            {
              rec.status = Status::memout_guard;
              rec.edges = e.edges_seen;
            }
          catch (const SolveAborted& e)
            {
              rec.status = e.reason;
            }
        }
    };

    unsigned nthreads = std::max(1u, config.threads);
    nthreads = static_cast<unsigned>(
        std::min<std::size_t>(nthreads, std::max<std::size_t>(tasks.size(), 1)));
    if (nthreads <= 1)
      {
        worker();
      }
    else
      {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned i = 0; i < nthreads; ++i)
          pool.emplace_back(worker);
        for (std::thread& th : pool)
          th.join();
      }

    // cross-algorithm digest agreement per instance
    for (std::size_t t = 0; t < tasks.size(); ++t)
      {
        if (tasks[t].algo != 0)
          continue;
        std::optional<std::uint64_t> expect;
        std::size_t ref = t;
        for (std::size_t u = t;
             u < tasks.size() && tasks[u].cell == tasks[t].cell &&
             tasks[u].instance == tasks[t].instance;
             ++u)
          {
            if (!records[u].digest)
              continue;
            if (!expect)
              {
                expect = records[u].digest;
                ref = u;
              }
            else if (*records[u].digest != *expect)
              {
                const GenSpec& spec = cells[tasks[t].cell];
                ParityGame game = generate_one(spec, tasks[t].instance);
                std::string path =
                    config.dump_dir + "/disagreement_" +
                    instance_filename(spec, tasks[t].instance);
                std::ofstream out(path, std::ios::binary);
                out << serialize_game(game);
                out.close();
                throw BenchMismatch(
                    "solver disagreement on " +
                        instance_filename(spec, tasks[t].instance) + ": " +
                        records[ref].algorithm + "/" +
                        records[ref].preprocessing + " vs " +
                        records[u].algorithm + "/" +
                        records[u].preprocessing + ", game dumped to " +
                        path,
                    path);
              }
          }
      }
    return records;
  }

  inline std::string csv_header()
  {
    return "seed,family,n,k,edges,algorithm,preprocessing,time_ms,status,"
           "digest";
  }

  inline std::string csv_row(const BenchRecord& r)
  {
    char buf[64];
    std::string row = std::to_string(r.seed);
    row += ',';
    row += family_name(r.family);
    row += ',';
    row += std::to_string(r.n);
    row += ',';
    row += std::to_string(r.k);
    row += ',';
    row += std::to_string(r.edges);
    row += ',';
    row += r.algorithm;
    row += ',';
    row += r.preprocessing;
    row += ',';
    if (r.time_ms)
      {
        std::snprintf(buf, sizeof buf, "%.3f", *r.time_ms);
        row += buf;
      }
    row += ',';
    row += status_name(r.status);
    row += ',';
    if (r.digest)
      {
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(*r.digest));
        row += buf;
      }
    return row;
  }

  /// CSV with the fixed column set, LF line endings.
  inline void write_csv(const std::vector<BenchRecord>& records,
                        std::ostream& out)
  {
    out << csv_header() << '\n';
    for (const BenchRecord& r : records)
      out << csv_row(r) << '\n';
  }

  struct SummaryRow
  {
    std::uint64_t seed = 0;
    GenFamily family = GenFamily::uniform;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::string algorithm;
    std::string preprocessing;
    std::uint32_t ok = 0;
    std::uint32_t timeouts = 0;
    std::uint32_t memouts = 0;
    /// Mean/median over ok runs only; absent when nothing finished.
    std::optional<double> mean_ok_ms;
    std::optional<double> median_ok_ms;
    /// Mean with every non-ok run charged the full timeout.
    double mean_all_ms = 0.0;
  };

  /// Aggregate per (cell, algorithm, preprocessing), in record order.
  inline std::vector<SummaryRow> summarize(
      const std::vector<BenchRecord>& records, double timeout_seconds)
  {
    std::vector<SummaryRow> rows;
    std::vector<std::vector<double>> ok_times;
    auto key_of = [](const BenchRecord& r) {
      return std::tuple(r.seed, r.family, r.n, r.k, r.algorithm,
                        r.preprocessing);
    };
    for (const BenchRecord& r : records)
      {
        std::size_t at = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i)
          if (key_of(r) == std::tuple(rows[i].seed, rows[i].family, rows[i].n,
                                      rows[i].k, rows[i].algorithm,
                                      rows[i].preprocessing))
            {
              at = i;
              break;
            }
        if (at == rows.size())
          {
            SummaryRow row;
            row.seed = r.seed;
            row.family = r.family;
            row.n = r.n;
            row.k = r.k;
            row.algorithm = r.algorithm;
            row.preprocessing = r.preprocessing;
            rows.push_back(row);
            ok_times.emplace_back();
          }
        SummaryRow& row = rows[at];
        switch (r.status)
          {
          case Status::ok:
            ++row.ok;
            ok_times[at].push_back(*r.time_ms);
            row.mean_all_ms += *r.time_ms;
            break;
          case Status::timeout:
            ++row.timeouts;
            row.mean_all_ms += timeout_seconds * 1000.0;
            break;
          case Status::memout_guard:
            ++row.memouts;
            row.mean_all_ms += timeout_seconds * 1000.0;
            break;
          }
      }
    for (std::size_t i = 0; i < rows.size(); ++i)
      {
        SummaryRow& row = rows[i];
        std::uint32_t total = row.ok + row.timeouts + row.memouts;
        if (total)
          row.mean_all_ms /= total;
        std::vector<double>& times = ok_times[i];
        if (!times.empty())
          {
            double sum = 0;
            for (double t : times)
              sum += t;
            row.mean_ok_ms = sum / times.size();
            std::sort(times.begin(), times.end());
            std::size_t mid = times.size() / 2;
            row.median_ok_ms = times.size() % 2
                                   ? times[mid]
                                   : (times[mid - 1] + times[mid]) / 2;
          }
      }
    return rows;
  }

  /// Aligned text table plus a soft warning when mean-ok time shrinks as n
  /// grows within one (family, k, algorithm, preprocessing) series, which
  /// usually indicates a measurement problem.
  inline void print_summary(const std::vector<SummaryRow>& rows,
                            std::ostream& out)
  {
    out << "family    n        k   algorithm  pre       ok  t/o  mem  "
           "mean_ok_ms  median_ok_ms  mean_all_ms\n";
    char buf[256];
    for (const SummaryRow& r : rows)
      {
        std::snprintf(buf, sizeof buf,
                      "%-8s  %-7u  %-2u  %-9s  %-8s  %-3u %-4u %-4u",
                      family_name(r.family), r.n, r.k, r.algorithm.c_str(),
                      r.preprocessing.c_str(), r.ok, r.timeouts, r.memouts);
        out << buf;
        auto num = [&](const std::optional<double>& v, int width) {
          if (v)
            std::snprintf(buf, sizeof buf, "  %*.3f", width, *v);
          else
            std::snprintf(buf, sizeof buf, "  %*s", width, "-");
          out << buf;
        };
        num(r.mean_ok_ms, 10);
        num(r.median_ok_ms, 12);
        std::snprintf(buf, sizeof buf, "  %11.3f\n", r.mean_all_ms);
        out << buf;
      }
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows.size(); ++j)
        {
          const SummaryRow &a = rows[i], &b = rows[j];
          if (a.family == b.family && a.k == b.k && a.seed == b.seed &&
              a.algorithm == b.algorithm &&
              a.preprocessing == b.preprocessing && a.n < b.n &&
              a.mean_ok_ms && b.mean_ok_ms && *a.mean_ok_ms > 1.0 &&
              *b.mean_ok_ms < 0.8 * *a.mean_ok_ms)
            out << "warning: " << a.algorithm << "/" << a.preprocessing
                << " mean time drops from n=" << a.n << " to n=" << b.n
                << " (family " << family_name(a.family) << ", k=" << a.k
                << ")\n";
        }
  }
}
