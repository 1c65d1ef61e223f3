#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <pgame/arena.hpp>

namespace pgame
{
  // PGSolver game format:
  //
  //   parity <max-node-id>;          (header, optional on input)
  //   <id> <priority> <owner> <succ>(,<succ>)* ("<name>")? ;
  //
  // and the companion solution format:
  //
  //   paritysol <max-node-id>;
  //   <id> <winner> (<strategy-successor>)? ;
  //
  // Node ids need not be dense or ordered; they are mapped to internal
  // indices in the order their defining records appear, successor
  // references are resolved afterwards. Files we emit are dense and
  // ascending, so emitted ids equal internal indices and
  // parse(serialize(g)) == g.

  struct ParseError : std::runtime_error
  {
    ParseError(std::uint32_t line, std::uint32_t col, const std::string& what)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + what),
        line(line), col(col)
    {
    }

    std::uint32_t line;
    std::uint32_t col;
  };

  namespace detail
  {
    class PgCursor
    {
    public:
      explicit PgCursor(std::string_view text) : text_(text) {}

      void skip_ws()
      {
        while (pos_ < text_.size())
          {
            char c = text_[pos_];
            if (c == '\n')
              {
                ++line_;
                col_ = 1;
                ++pos_;
              }
            else if (c == ' ' || c == '\t' || c == '\r')
              {
                ++col_;
                ++pos_;
              }
            else
              break;
          }
      }

      bool eof()
      {
        skip_ws();
        return pos_ >= text_.size();
      }

      char peek()
      {
        skip_ws();
        return text_[pos_];
      }

      void expect(char c, const char* what)
      {
        if (eof() || text_[pos_] != c)
          fail(std::string("expected ") + what);
        advance();
      }

      bool try_consume(char c)
      {
        if (eof() || text_[pos_] != c)
          return false;
        advance();
        return true;
      }

      /// Keyword = run of lowercase letters.
      std::string_view try_word()
      {
        if (eof() || text_[pos_] < 'a' || text_[pos_] > 'z')
          return {};
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= 'a' && text_[pos_] <= 'z')
          advance();
        return text_.substr(start, pos_ - start);
      }

      std::uint64_t number(const char* what)
      {
        if (eof() || text_[pos_] < '0' || text_[pos_] > '9')
          fail(std::string("expected ") + what);
        std::uint64_t value = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc())
          fail(std::string("number out of range for ") + what);
        for (const char* p = begin; p != ptr; ++p)
          advance();
        return value;
      }

      std::string quoted_name()
      {
        expect('"', "'\"'");
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"')
          {
            if (text_[pos_] == '\n')
              fail("unterminated name");
            out.push_back(text_[pos_]);
            advance();
          }
        if (pos_ >= text_.size())
          fail("unterminated name");
        advance();
        return out;
      }

      [[noreturn]] void fail(const std::string& what) const
      {
        throw ParseError(line_, col_, what);
      }

      /// Position of the next token (leading whitespace skipped).
      std::uint32_t line()
      {
        skip_ws();
        return line_;
      }

      std::uint32_t col()
      {
        skip_ws();
        return col_;
      }

    private:
      void advance()
      {
        ++pos_;
        ++col_;
      }

      std::string_view text_;
      std::size_t pos_ = 0;
      std::uint32_t line_ = 1;
      std::uint32_t col_ = 1;
    };
  }

  /// Parse a PGSolver-format game. Successor duplicates are dropped with a
  /// note in *warnings (when given) rather than rejected. Every referenced
  /// id must eventually be defined; ids above the header bound, duplicate
  /// definitions, empty successor lists and malformed tokens all raise
  /// ParseError with position.
  inline ParityGame parse_game(std::string_view text, Semantics sem,
                               std::vector<std::string>* warnings = nullptr)
  {
    detail::PgCursor cur(text);

    bool has_bound = false;
    std::uint64_t bound = 0;
    if (cur.try_word() == "parity")
      {
        bound = cur.number("header bound");
        cur.expect(';', "';' after header");
        has_bound = true;
      }
    if (cur.eof())
      cur.fail("no node records");

    // file id -> internal index, assigned when the defining record arrives;
    // successor references are kept as file ids until the whole file is in
    std::vector<std::int64_t> dense;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ref_pos;
    std::vector<std::uint64_t> ref_order; // ids by first occurrence
    auto touch = [&](std::uint64_t id, std::uint32_t line, std::uint32_t col) {
      if (has_bound && id > bound)
        throw ParseError(line, col,
                         "node id " + std::to_string(id) +
                             " exceeds the header bound " +
                             std::to_string(bound));
      if (id > 0xfffffffull)
        throw ParseError(line, col, "node id out of range");
      if (id >= dense.size())
        {
          dense.resize(id + 1, -1);
          ref_pos.resize(id + 1, {0, 0});
        }
      if (ref_pos[id].first == 0)
        {
          ref_pos[id] = {line, col};
          ref_order.push_back(id);
        }
    };

    struct Record
    {
      std::uint64_t id = 0;
      int owner = 0;
      std::uint32_t priority = 0;
      std::vector<std::uint64_t> succs;
      std::string name;
    };
    std::vector<Record> records;

    while (!cur.eof())
      {
        std::uint32_t rec_line = cur.line(), rec_col = cur.col();
        Record rec;
        rec.id = cur.number("node id");
        touch(rec.id, rec_line, rec_col);
        if (dense[rec.id] >= 0)
          throw ParseError(rec_line, rec_col,
                           "node " + std::to_string(rec.id) +
                               " defined twice");
        dense[rec.id] = static_cast<std::int64_t>(records.size());

        std::uint64_t priority = cur.number("priority");
        if (priority > 0xffffffull)
          cur.fail("priority out of range");
        rec.priority = static_cast<std::uint32_t>(priority);
        std::uint64_t owner = cur.number("owner");
        if (owner > 1)
          cur.fail("owner must be 0 or 1");
        rec.owner = static_cast<int>(owner);

        do
          {
            std::uint32_t sline = cur.line(), scol = cur.col();
            std::uint64_t sid = cur.number("successor id");
            touch(sid, sline, scol);
            bool dup = false;
            for (std::uint64_t prev : rec.succs)
              if (prev == sid)
                {
                  dup = true;
                  break;
                }
            if (dup)
              {
                if (warnings)
                  warnings->push_back(
                      "line " + std::to_string(sline) +
                      ": duplicate successor " + std::to_string(sid) +
                      " of node " + std::to_string(rec.id) + " dropped");
              }
            else
              rec.succs.push_back(sid);
          }
        while (cur.try_consume(','));

        if (!cur.eof() && cur.peek() == '"')
          rec.name = cur.quoted_name();
        cur.expect(';', "';' after node record");
        records.push_back(std::move(rec));
      }

    for (std::uint64_t id : ref_order)
      if (dense[id] < 0)
        throw ParseError(ref_pos[id].first, ref_pos[id].second,
                         "node " + std::to_string(id) +
                             " is referenced but never defined");

    // empty successor lists cannot be produced by the grammar; states
    // without choices must carry a self loop instead
    GameBuilder b(sem, static_cast<std::uint32_t>(records.size()));
    for (Record& rec : records)
      {
        std::vector<std::uint32_t> succs;
        succs.reserve(rec.succs.size());
        for (std::uint64_t sid : rec.succs)
          succs.push_back(static_cast<std::uint32_t>(dense[sid]));
        b.add_node(rec.owner, rec.priority, std::move(succs),
                   std::move(rec.name));
      }
    return std::move(b).build();
  }

  inline ParityGame parse_game(std::istream& in, Semantics sem,
                               std::vector<std::string>* warnings = nullptr)
  {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_game(buf.str(), sem, warnings);
  }

  inline std::string serialize_game(const ParityGame& g)
  {
    if (g.node_count() == 0)
      throw std::invalid_argument("serialize_game(): empty game");
    std::string out = "parity " + std::to_string(g.node_count() - 1) + ";\n";
    for (std::uint32_t v = 0; v < g.node_count(); ++v)
      {
        out += std::to_string(v);
        out += ' ';
        out += std::to_string(g.priority(v));
        out += ' ';
        out += std::to_string(g.owner(v));
        out += ' ';
        bool sep = false;
        for (std::uint32_t w : g.successors(v))
          {
            if (sep)
              out += ',';
            out += std::to_string(w);
            sep = true;
          }
        if (g.has_names() && !g.name(v).empty())
          {
            out += " \"";
            out += g.name(v);
            out += '"';
          }
        out += ";\n";
      }
    return out;
  }

  struct Solution
  {
    /// winner[v] in {0,1}.
    std::vector<int> winner;
    /// Chosen successor or -1; only meaningful on nodes owned by winner[v].
    MemorylessStrategy strategy;
  };

  inline std::string serialize_solution(const ParityGame& g,
                                        const SolveResult& r)
  {
    std::string out =
        "paritysol " + std::to_string(g.node_count() - 1) + ";\n";
    for (std::uint32_t v = 0; v < g.node_count(); ++v)
      {
        int winner = r.w0.test(v) ? 0 : 1;
        out += std::to_string(v);
        out += ' ';
        out += std::to_string(winner);
        const MemorylessStrategy& s = winner == 0 ? r.strategy0 : r.strategy1;
        if (!s.empty() && s[v] >= 0)
          {
            out += ' ';
            out += std::to_string(s[v]);
          }
        out += ";\n";
      }
    return out;
  }

  /// Parse the solution format back. Ids must be dense (as we emit them).
  inline Solution parse_solution(std::string_view text)
  {
    detail::PgCursor cur(text);
    if (cur.try_word() != "paritysol")
      cur.fail("expected 'paritysol' header");
    std::uint64_t bound = cur.number("header bound");
    cur.expect(';', "';' after header");

    Solution sol;
    sol.winner.assign(bound + 1, -1);
    sol.strategy.assign(bound + 1, -1);
    while (!cur.eof())
      {
        std::uint32_t line = cur.line(), col = cur.col();
        std::uint64_t id = cur.number("node id");
        if (id > bound)
          throw ParseError(line, col, "node id exceeds the header bound");
        std::uint64_t winner = cur.number("winner");
        if (winner > 1)
          cur.fail("winner must be 0 or 1");
        if (sol.winner[id] >= 0)
          throw ParseError(line, col, "node listed twice");
        sol.winner[id] = static_cast<int>(winner);
        if (!cur.eof() && cur.peek() != ';')
          sol.strategy[id] =
              static_cast<std::int64_t>(cur.number("strategy successor"));
        cur.expect(';', "';' after solution record");
      }
    for (std::size_t v = 0; v < sol.winner.size(); ++v)
      if (sol.winner[v] < 0)
        throw ParseError(1, 1,
                         "node " + std::to_string(v) + " has no verdict");
    return sol;
  }
}
