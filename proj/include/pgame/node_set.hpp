#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace pgame
{
  namespace detail
  {
    // Words allocated into NodeSets on this thread. Snapshot/diff by Budget
    // to approximate live set memory during a solve.
    inline thread_local std::uint64_t nodeset_alloc_words = 0;
  }

  /// Dense bitset over node indices 0..n-1. Trailing bits of the last word
  /// are kept zero by every mutator, so word-wise comparison is equality.
  class NodeSet
  {
  public:
    static constexpr std::uint32_t npos = 0xffffffffu;

    NodeSet() = default;

    explicit NodeSet(std::uint32_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0)
    {
      detail::nodeset_alloc_words += words_.size();
    }

    NodeSet(const NodeSet& o) : universe_(o.universe_), words_(o.words_)
    {
      detail::nodeset_alloc_words += words_.size();
    }

    NodeSet(NodeSet&&) noexcept = default;
    NodeSet& operator=(const NodeSet& o)
    {
      if (this != &o)
        {
          detail::nodeset_alloc_words += o.words_.size();
          universe_ = o.universe_;
          words_ = o.words_;
        }
      return *this;
    }
    NodeSet& operator=(NodeSet&&) noexcept = default;

    static NodeSet full(std::uint32_t universe)
    {
      NodeSet s(universe);
      for (auto& w : s.words_)
        w = ~0ull;
      s.mask_tail();
      return s;
    }

    std::uint32_t universe() const { return universe_; }

    bool test(std::uint32_t v) const
    {
      assert(v < universe_);
      return (words_[v >> 6] >> (v & 63)) & 1;
    }

    void set(std::uint32_t v)
    {
      assert(v < universe_);
      words_[v >> 6] |= 1ull << (v & 63);
    }

    void reset(std::uint32_t v)
    {
      assert(v < universe_);
      words_[v >> 6] &= ~(1ull << (v & 63));
    }

    bool empty() const
    {
      for (auto w : words_)
        if (w)
          return false;
      return true;
    }

    std::uint32_t count() const
    {
      std::uint32_t c = 0;
      for (auto w : words_)
        c += static_cast<std::uint32_t>(std::popcount(w));
      return c;
    }

    /// Smallest member, or npos if empty.
    std::uint32_t first() const
    {
      for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i])
          return static_cast<std::uint32_t>(i * 64 + std::countr_zero(words_[i]));
      return npos;
    }

    NodeSet& operator|=(const NodeSet& o)
    {
      assert(universe_ == o.universe_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] |= o.words_[i];
      return *this;
    }

    NodeSet& operator&=(const NodeSet& o)
    {
      assert(universe_ == o.universe_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= o.words_[i];
      return *this;
    }

    /// Set difference, *this \ o.
    NodeSet& operator-=(const NodeSet& o)
    {
      assert(universe_ == o.universe_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= ~o.words_[i];
      return *this;
    }

    NodeSet complement() const
    {
      NodeSet r(universe_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        r.words_[i] = ~words_[i];
      r.mask_tail();
      return r;
    }

    bool is_subset_of(const NodeSet& o) const
    {
      assert(universe_ == o.universe_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i])
          return false;
      return true;
    }

    bool intersects(const NodeSet& o) const
    {
      assert(universe_ == o.universe_);
      for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & o.words_[i])
          return true;
      return false;
    }

    bool operator==(const NodeSet& o) const
    {
      return universe_ == o.universe_ && words_ == o.words_;
    }

    /// Visit members in ascending order.
    template <typename F>
    void for_each(F&& f) const
    {
      for (std::size_t i = 0; i < words_.size(); ++i)
        {
          std::uint64_t w = words_[i];
          while (w)
            {
              f(static_cast<std::uint32_t>(i * 64 + std::countr_zero(w)));
              w &= w - 1;
            }
        }
    }

    std::span<const std::uint64_t> words() const { return words_; }

  private:
    void mask_tail()
    {
      if (std::uint32_t rem = universe_ & 63; rem && !words_.empty())
        words_.back() &= (1ull << rem) - 1;
    }

    std::uint32_t universe_ = 0;
    std::vector<std::uint64_t> words_;
  };

  inline NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  inline NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  inline NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }
}
