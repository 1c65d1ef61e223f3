// paritybench: command-line front end for the pgame library.
//
//   solve      read one game, solve it, emit the solution format
//   generate   write a seeded corpus of random games
//   bench      timed comparison runs over generated cells, CSV + summary
//   verify     cross-check solvers against each other or a solution file
//
// Exit codes: 0 success, 2 malformed input or invalid flags/spec, 3 oracle
// size bound exceeded, 4 I/O failure, 5 solver or solution mismatch.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <pgame/bench.hpp>
#include <pgame/generator.hpp>
#include <pgame/pgsolver_io.hpp>
#include <pgame/solve.hpp>

namespace
{
  struct IoFailure : std::runtime_error
  {
    using std::runtime_error::runtime_error;
  };

  std::string read_input(const std::string& path)
  {
    if (path.empty() || path == "-")
      {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        if (std::cin.bad())
          throw IoFailure("cannot read standard input");
        return buf.str();
      }
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw IoFailure("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
      throw IoFailure("read failed on '" + path + "'");
    return buf.str();
  }

  void write_output(const std::string& path, const std::string& text)
  {
    if (path.empty() || path == "-")
      {
        std::cout << text;
        if (!std::cout)
          throw IoFailure("cannot write standard output");
        return;
      }
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw IoFailure("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out)
      throw IoFailure("write failed on '" + path + "'");
  }

  pgame::Semantics semantics_from_name(const std::string& s)
  {
    if (s == "max")
      return pgame::Semantics::max;
    if (s == "min")
      return pgame::Semantics::min;
    throw std::invalid_argument("unknown semantics '" + s +
                                "' (expected max or min)");
  }

  std::vector<std::string> split_list(const std::string& csv)
  {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ','))
      if (!item.empty())
        out.push_back(item);
    return out;
  }

  void print_warnings(const std::vector<std::string>& warnings)
  {
    for (const std::string& w : warnings)
      std::cerr << "warning: " << w << "\n";
  }

  // ---- solve ------------------------------------------------------------

  struct SolveArgs
  {
    std::string input;
    std::string output;
    std::string algorithm = "apt";
    std::string semantics = "max";
    std::string preprocess = "none";
    std::uint32_t oracle_bound = 12;
    bool stats = false;
  };

  int cmd_solve(const SolveArgs& args)
  {
    std::vector<std::string> warnings;
    pgame::ParityGame game = pgame::parse_game(
        read_input(args.input), semantics_from_name(args.semantics),
        &warnings);
    print_warnings(warnings);

    pgame::SolveResult res = pgame::solve_game(
        game, pgame::algorithm_from_name(args.algorithm),
        pgame::preprocess_from_name(args.preprocess), {}, args.oracle_bound);
    write_output(args.output, pgame::serialize_solution(game, res));
    if (args.stats)
      std::cerr << "stats: algorithm=" << res.algorithm
                << " preprocess=" << args.preprocess
                << " n=" << game.node_count()
                << " edges=" << game.edge_count() << " w0=" << res.w0.count()
                << " w1=" << res.w1.count() << " work=" << res.work
                << " wall_ms=" << res.wall_ms << "\n";
    return 0;
  }

  // ---- generate ----------------------------------------------------------

  struct GenerateArgs
  {
    pgame::GenSpec spec;
    std::string family = "uniform";
    std::string out_dir = ".";
  };

  int cmd_generate(GenerateArgs args)
  {
    args.spec.family = pgame::family_from_name(args.family);
    if (args.spec.family != pgame::GenFamily::uniform && args.spec.n != 0)
      throw std::invalid_argument(
          "generate: node count is derived from k for exponential "
          "families; drop --nodes");
    pgame::GenSpec spec = pgame::resolve_spec(args.spec);
    std::filesystem::create_directories(args.out_dir);
    for (std::uint32_t j = 0; j < spec.count; ++j)
      {
        pgame::ParityGame game = pgame::generate_one(spec, j);
        std::string name = pgame::instance_filename(spec, j);
        std::string path = args.out_dir + "/" + name;
        write_output(path, pgame::serialize_game(game));
        std::cout << name << " n=" << spec.n << " k=" << spec.k
                  << " seed=" << spec.seed << " index=" << j
                  << " edges=" << game.edge_count() << "\n";
      }
    return 0;
  }

  // ---- bench -------------------------------------------------------------

  struct BenchArgs
  {
    std::string family = "uniform";
    std::string nodes;
    std::string priorities;
    std::uint64_t seed = 0;
    std::uint32_t instances = 20;
    std::string algorithms = "apt,re,sp";
    std::string pre = "none";
    std::string pre_apt, pre_re, pre_sp;
    double timeout = 60.0;
    bool timeout_given = false;
    bool full_scale = false;
    unsigned threads = 0;
    std::uint64_t max_edges = 0;
    std::uint64_t max_set_words = 0;
    std::string csv;
    std::string dump_dir = ".";
    std::uint32_t oracle_bound = 12;
  };

  std::vector<pgame::GenSpec> bench_cells(const BenchArgs& args)
  {
    using pgame::GenFamily;
    using pgame::GenSpec;
    std::vector<GenSpec> cells;
    auto push = [&](GenFamily fam, std::uint32_t n, std::uint32_t k) {
      GenSpec s;
      s.family = fam;
      s.n = n;
      s.k = k;
      s.seed = args.seed;
      s.count = args.instances;
      cells.push_back(pgame::resolve_spec(s));
    };

    if (!args.nodes.empty() || !args.priorities.empty() ||
        args.family != "uniform")
      {
        // Explicit cells: cross product of the node and priority lists.
        GenFamily fam = pgame::family_from_name(args.family);
        std::vector<std::uint32_t> ks;
        for (const std::string& s : split_list(
                 args.priorities.empty() ? "2" : args.priorities))
          ks.push_back(static_cast<std::uint32_t>(std::stoul(s)));
        std::vector<std::uint32_t> ns;
        if (fam == GenFamily::uniform)
          {
            if (args.nodes.empty())
              throw std::invalid_argument(
                  "bench: uniform cells need --nodes");
            for (const std::string& s : split_list(args.nodes))
              ns.push_back(static_cast<std::uint32_t>(std::stoul(s)));
          }
        else
          {
            if (!args.nodes.empty())
              throw std::invalid_argument(
                  "bench: node count is derived from k for exponential "
                  "families; drop --nodes");
            ns.push_back(0);
          }
        for (std::uint32_t k : ks)
          for (std::uint32_t n : ns)
            push(fam, n, k);
        return cells;
      }

    if (args.full_scale)
      {
        // Full grids: fixed priorities 2/3/5 up to n = 14000, then the
        // three exponential families to their full end points.
        for (std::uint32_t k : {2u, 3u, 5u})
          for (std::uint32_t n = 2000; n <= 14000; n += 2000)
            push(GenFamily::uniform, n, k);
        for (std::uint32_t k = 10; k <= 15; ++k)
          push(GenFamily::exp2, 0, k);
        for (std::uint32_t k = 3; k <= 10; ++k)
          push(GenFamily::exp_e, 0, k);
        for (std::uint32_t k = 1; k <= 5; ++k)
          push(GenFamily::exp10, 0, k);
        return cells;
      }

    // Desk defaults: the same shapes trimmed to n <= 4000.
    for (std::uint32_t k : {2u, 3u, 5u})
      for (std::uint32_t n : {2000u, 4000u})
        push(GenFamily::uniform, n, k);
    for (std::uint32_t k : {10u, 11u})
      push(GenFamily::exp2, 0, k);
    for (std::uint32_t k : {7u, 8u})
      push(GenFamily::exp_e, 0, k);
    push(GenFamily::exp10, 0, 3);
    return cells;
  }

  int cmd_bench(const BenchArgs& args)
  {
    pgame::BenchConfig config;
    config.cells = bench_cells(args);
    config.timeout_seconds =
        args.timeout_given ? args.timeout : (args.full_scale ? 3600.0
                                                              : args.timeout);
    config.max_edges = args.max_edges;
    config.max_set_words = args.max_set_words;
    config.dump_dir = args.dump_dir;
    config.oracle_bound = args.oracle_bound;

    pgame::Preprocess base = pgame::preprocess_from_name(args.pre);
    for (const std::string& name : split_list(args.algorithms))
      {
        pgame::AlgoConfig ac;
        ac.algo = pgame::algorithm_from_name(name);
        ac.pre = base;
        const std::string* over = nullptr;
        if (name == "apt" && !args.pre_apt.empty())
          over = &args.pre_apt;
        if (name == "re" && !args.pre_re.empty())
          over = &args.pre_re;
        if (name == "sp" && !args.pre_sp.empty())
          over = &args.pre_sp;
        if (over)
          ac.pre = pgame::preprocess_from_name(*over);
        config.algorithms.push_back(ac);
      }
    if (config.algorithms.empty())
      throw std::invalid_argument("bench: no algorithms selected");

    // The harness threads do not catch oracle failures; refuse the
    // configurations that would raise them mid-run.
    for (const pgame::AlgoConfig& ac : config.algorithms)
      {
        if (ac.algo != pgame::Algorithm::oracle)
          continue;
        if (ac.pre == pgame::Preprocess::scc || ac.pre == pgame::Preprocess::all)
          throw std::invalid_argument(
              "bench: scc preprocessing cannot drive the oracle");
        for (const pgame::GenSpec& cell : config.cells)
          if (cell.n > args.oracle_bound)
            throw pgame::OracleBoundExceeded(cell.n, args.oracle_bound);
      }

    unsigned threads = args.threads
                           ? args.threads
                           : std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("PARITYBENCH_THREADS"))
      {
        unsigned long v = std::strtoul(cap, nullptr, 10);
        if (v >= 1)
          threads = std::min<unsigned>(threads, static_cast<unsigned>(v));
      }
    config.threads = threads;

    std::vector<pgame::BenchRecord> records = pgame::run_bench(config);
    if (!args.csv.empty())
      {
        std::ofstream out(args.csv, std::ios::binary);
        if (!out)
          throw IoFailure("cannot open '" + args.csv + "' for writing");
        pgame::write_csv(records, out);
        out.close();
        if (!out)
          throw IoFailure("write failed on '" + args.csv + "'");
      }
    pgame::print_summary(
        pgame::summarize(records, config.timeout_seconds), std::cout);
    return 0;
  }

  // ---- verify ------------------------------------------------------------

  struct VerifyArgs
  {
    std::string input;
    std::string semantics = "max";
    std::string against;
    std::string solution;
    std::string algorithm = "apt";
    std::uint32_t oracle_bound = 12;
  };

  int cmd_verify(const VerifyArgs& args)
  {
    std::vector<std::string> warnings;
    pgame::ParityGame game = pgame::parse_game(
        read_input(args.input), semantics_from_name(args.semantics),
        &warnings);
    print_warnings(warnings);

    if (!args.against.empty())
      {
        std::vector<std::string> names = split_list(args.against);
        if (names.size() < 2)
          throw std::invalid_argument(
              "verify: --against needs at least two algorithms");
        std::vector<pgame::SolveResult> results;
        for (const std::string& name : names)
          results.push_back(pgame::solve_game(
              game, pgame::algorithm_from_name(name), pgame::Preprocess::none,
              {}, args.oracle_bound));
        for (std::size_t i = 1; i < results.size(); ++i)
          if (results[i].w0 != results[0].w0)
            {
              for (std::uint32_t v = 0; v < game.node_count(); ++v)
                if (results[0].w0.test(v) != results[i].w0.test(v))
                  {
                    std::cerr << "mismatch: node " << v << " is won by player "
                              << (results[0].w0.test(v) ? 0 : 1) << " per "
                              << names[0] << " but by player "
                              << (results[i].w0.test(v) ? 0 : 1) << " per "
                              << names[i] << "\n";
                    return 5;
                  }
            }
        std::cout << "agree: " << args.against << " on "
                  << game.node_count() << " nodes\n";
        return 0;
      }

    if (args.solution.empty())
      throw std::invalid_argument(
          "verify: need --against or --solution");

    pgame::Solution sol = pgame::parse_solution(read_input(args.solution));
    if (sol.winner.size() != game.node_count())
      throw std::invalid_argument(
          "verify: solution covers " + std::to_string(sol.winner.size()) +
          " nodes, game has " + std::to_string(game.node_count()));
    pgame::SolveResult ref = pgame::solve_game(
        game, pgame::algorithm_from_name(args.algorithm),
        pgame::Preprocess::none, {}, args.oracle_bound);
    for (std::uint32_t v = 0; v < game.node_count(); ++v)
      {
        int claimed = sol.winner[v];
        int actual = ref.w0.test(v) ? 0 : 1;
        if (claimed != actual)
          {
            std::cerr << "mismatch: node " << v << " claimed for player "
                      << claimed << ", actually won by player " << actual
                      << "\n";
            return 5;
          }
      }

    // When the file carries strategy moves, check each winner's strategy
    // with the cycle test on its own region.
    bool any_strategy = false;
    for (std::int64_t m : sol.strategy)
      any_strategy |= m >= 0;
    if (any_strategy)
      {
        pgame::NormalizeResult nr;
        const pgame::ParityGame& canon =
            game.is_canonical() ? game : (nr = pgame::normalize(game)).game;
        for (int player = 0; player < 2; ++player)
          {
            const pgame::NodeSet& region = player == 0 ? ref.w0 : ref.w1;
            if (region.empty())
              continue;
            pgame::MemorylessStrategy strat(game.node_count(), -1);
            bool complete = true;
            region.for_each([&](std::uint32_t v) {
              if (game.owner(v) != player)
                return;
              if (sol.strategy[v] >= 0)
                strat[v] = sol.strategy[v];
              else
                complete = false;
            });
            if (!complete)
              continue;
            std::string why;
            if (!pgame::strategy_wins_on(canon, player, region, strat, &why))
              {
                std::cerr << "mismatch: player " << player
                          << " strategy fails: " << why << "\n";
                return 5;
              }
          }
      }
    std::cout << "verified: " << args.solution << " matches "
              << args.algorithm << " on " << game.node_count() << " nodes\n";
    return 0;
  }
}

int main(int argc, char** argv)
{
  CLI::App app{"parity game solving toolkit"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "solve one game file");
  solve->add_option("--input,-i", solve_args.input,
                    "game file (default: stdin)");
  solve->add_option("--output,-o", solve_args.output,
                    "solution file (default: stdout)");
  solve->add_option("--algorithm,-a", solve_args.algorithm,
                    "apt, re, sp or oracle")
      ->capture_default_str();
  solve->add_option("--semantics", solve_args.semantics,
                    "max or min priority wins")
      ->capture_default_str();
  solve->add_option("--preprocess,-p", solve_args.preprocess,
                    "none, loops, scc, compress or all")
      ->capture_default_str();
  solve->add_option("--oracle-bound", solve_args.oracle_bound,
                    "node limit for the oracle")
      ->capture_default_str();
  solve->add_flag("--stats", solve_args.stats,
                  "print solver statistics to stderr");

  GenerateArgs gen_args;
  gen_args.spec.count = 1;
  CLI::App* gen = app.add_subcommand("generate", "write random game files");
  gen->add_option("--nodes,-n", gen_args.spec.n, "nodes per game");
  gen->add_option("--priorities,-k", gen_args.spec.k, "number of priorities")
      ->capture_default_str();
  gen->add_option("--seed,-s", gen_args.spec.seed, "cell seed")
      ->capture_default_str();
  gen->add_option("--count,-c", gen_args.spec.count, "instances to write")
      ->capture_default_str();
  gen->add_option("--family,-f", gen_args.family,
                  "uniform, exp2, exp-e or exp10")
      ->capture_default_str();
  gen->add_option("--min-degree", gen_args.spec.min_degree,
                  "lower out-degree bound");
  gen->add_option("--max-degree", gen_args.spec.max_degree,
                  "upper out-degree bound");
  gen->add_option("--out-dir,-d", gen_args.out_dir, "target directory")
      ->capture_default_str();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "timed solver comparison");
  bench->add_option("--family,-f", bench_args.family,
                    "cell family (with --nodes/--priorities)")
      ->capture_default_str();
  bench->add_option("--nodes,-n", bench_args.nodes,
                    "comma list of node counts (uniform family)");
  bench->add_option("--priorities,-k", bench_args.priorities,
                    "comma list of priority counts");
  bench->add_option("--seed,-s", bench_args.seed, "cell seed")
      ->capture_default_str();
  bench->add_option("--instances,-c", bench_args.instances,
                    "instances per cell")
      ->capture_default_str();
  bench->add_option("--algorithms,-a", bench_args.algorithms,
                    "comma list of solvers to run")
      ->capture_default_str();
  bench->add_option("--pre", bench_args.pre,
                    "preprocessing for every solver")
      ->capture_default_str();
  bench->add_option("--pre-apt", bench_args.pre_apt,
                    "override preprocessing for apt");
  bench->add_option("--pre-re", bench_args.pre_re,
                    "override preprocessing for re");
  bench->add_option("--pre-sp", bench_args.pre_sp,
                    "override preprocessing for sp");
  CLI::Option* timeout_opt =
      bench->add_option("--timeout,-t", bench_args.timeout,
                        "per-solve wall clock limit, seconds")
          ->capture_default_str();
  bench->add_flag("--full-scale", bench_args.full_scale,
                  "full-size grids and a one hour timeout");
  bench->add_option("--threads,-j", bench_args.threads,
                    "worker threads (default: all cores)");
  bench->add_option("--max-edges", bench_args.max_edges,
                    "generation guard, edges per game");
  bench->add_option("--max-set-words", bench_args.max_set_words,
                    "memory guard, bitset words per solve");
  bench->add_option("--csv", bench_args.csv, "write records to this file");
  bench->add_option("--dump-dir", bench_args.dump_dir,
                    "where disagreement dumps go")
      ->capture_default_str();
  bench->add_option("--oracle-bound", bench_args.oracle_bound,
                    "node limit for the oracle")
      ->capture_default_str();

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "cross-check a game");
  verify->add_option("--input,-i", verify_args.input,
                     "game file (default: stdin)");
  verify->add_option("--semantics", verify_args.semantics,
                     "max or min priority wins")
      ->capture_default_str();
  verify->add_option("--against", verify_args.against,
                     "comma list of algorithms to cross-solve");
  verify->add_option("--solution", verify_args.solution,
                     "solution file to check");
  verify->add_option("--algorithm,-a", verify_args.algorithm,
                     "reference solver for --solution")
      ->capture_default_str();
  verify->add_option("--oracle-bound", verify_args.oracle_bound,
                     "node limit for the oracle")
      ->capture_default_str();

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::ParseError& e)
    {
      int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }
  bench_args.timeout_given = timeout_opt->count() > 0;

  try
    {
      if (solve->parsed())
        return cmd_solve(solve_args);
      if (gen->parsed())
        return cmd_generate(gen_args);
      if (bench->parsed())
        return cmd_bench(bench_args);
      return cmd_verify(verify_args);
    }
  catch (const pgame::ParseError& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  catch (const pgame::OracleBoundExceeded& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return 3;
    }
  catch (const pgame::BenchMismatch& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return 5;
    }
  catch (const IoFailure& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    }
  catch (const std::filesystem::filesystem_error& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    }
  catch (const std::invalid_argument& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  catch (const std::exception& e)
    {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
}
