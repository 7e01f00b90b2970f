#pragma once

#include "irsa/degree_distribution.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace irsa {

using Index = std::uint32_t;

/// Payload bits drawn i.i.d. Bernoulli(nu).
struct IidKind {
  double nu = 0.5;
  std::uint64_t seed = 0;
};

/// Parity-check columns of a T-error-correcting binary BCH code over GF(2^m).
struct BchKind {
  int m = 0;
  int capability = 0;
};

/// Words supplied verbatim (tests, imported books).
struct ExplicitKind {};

using CodebookKind = std::variant<IidKind, BchKind, ExplicitKind>;

/// M binary codewords of length 1 + n0. Bit 0 of every word is the unit
/// pilot; bits 1..n0 carry the payload. Words are packed little-endian into
/// 64-bit blocks and all words are pairwise distinct.
class Codebook
{
public:
  /// Parses '0'/'1' strings, pilot first. All strings must share one length.
  static Codebook from_strings(const std::vector<std::string>& words);

  std::size_t size() const noexcept { return count_; }
  int payload_length() const noexcept { return n0_; }
  int word_length() const noexcept { return n0_ + 1; }
  std::size_t blocks_per_word() const noexcept { return blocks_; }
  const CodebookKind& kind() const noexcept { return kind_; }

  std::span<const std::uint64_t> word(Index i) const noexcept
  {
    return {data_.data() + static_cast<std::size_t>(i) * blocks_, blocks_};
  }

  bool bit(Index i, int position) const noexcept
  {
    return (data_[static_cast<std::size_t>(i) * blocks_ + static_cast<std::size_t>(position) / 64] >>
            (static_cast<unsigned>(position) % 64)) & 1U;
  }

  std::string to_string(Index i) const;

private:
  friend Codebook gen_iid_codebook(std::size_t, int, double, std::uint64_t);
  friend Codebook gen_bch_codebook(int, int, std::size_t);

  Codebook(std::size_t count, int n0, CodebookKind kind);

  std::uint64_t* mutable_word(Index i) noexcept { return data_.data() + static_cast<std::size_t>(i) * blocks_; }

  std::size_t count_ = 0;
  int n0_ = 0;
  std::size_t blocks_ = 1;
  CodebookKind kind_;
  std::vector<std::uint64_t> data_;
};

/// Random codebook: pilot followed by n0 i.i.d. Bernoulli(nu) bits. A word
/// that duplicates an earlier one is redrawn (at most 1000 attempts).
Codebook gen_iid_codebook(std::size_t count, int n0, double nu, std::uint64_t seed);

/// Word i (0-based) is pilot || alpha^(i+1) || alpha^(3(i+1)) || ... ||
/// alpha^((2T-1)(i+1)), each field element written as m bits with the
/// coefficient of alpha^0 first. n0 = T m.
Codebook gen_bch_codebook(int m, int capability, std::size_t count);

/// Primitive polynomial used for GF(2^m), bit k holding the coefficient of x^k.
std::uint32_t primitive_polynomial(int m);

/// Degree and replica slots of one codeword.
struct ReplicaProfile {
  int degree = 0;
  std::vector<Index> slots;  // sorted, distinct, each in [0, N)
};

/// Deterministic replica placement h(c): the degree is drawn from Lambda and
/// the slots uniformly without replacement, both from the stream keyed by
/// (master_seed, graph, index).
ReplicaProfile replica_profile(Index index, const DegreeDistribution& lambda, std::size_t slot_count,
                               std::uint64_t master_seed);

/// Codeword-to-slot map and its inverse (the per-slot candidate lists).
class FrameGraph
{
public:
  FrameGraph(std::size_t codeword_count, const DegreeDistribution& lambda, std::size_t slot_count,
             std::uint64_t master_seed);

  std::size_t slot_count() const noexcept { return candidate_offsets_.size() - 1; }
  std::size_t codeword_count() const noexcept { return slot_offsets_.size() - 1; }

  int degree(Index i) const noexcept { return static_cast<int>(slot_offsets_[i + 1] - slot_offsets_[i]); }

  std::span<const Index> slots(Index i) const noexcept
  {
    return {slots_.data() + slot_offsets_[i], slot_offsets_[i + 1] - slot_offsets_[i]};
  }

  std::span<const Index> candidates(Index s) const noexcept
  {
    return {candidates_.data() + candidate_offsets_[s], candidate_offsets_[s + 1] - candidate_offsets_[s]};
  }

  std::size_t edge_count() const noexcept { return slots_.size(); }

private:
  std::vector<std::size_t> slot_offsets_;
  std::vector<Index> slots_;
  std::vector<std::size_t> candidate_offsets_;
  std::vector<Index> candidates_;
};

inline FrameGraph build_frame_graph(const Codebook& book, const DegreeDistribution& lambda, std::size_t slot_count,
                                    std::uint64_t master_seed)
{
  return FrameGraph(book.size(), lambda, slot_count, master_seed);
}

/// One word per line, '0'/'1' characters, pilot first.
void write_codebook_text(std::ostream& out, const Codebook& book);
Codebook read_codebook_text(std::istream& in);

/// CSV rows "index,degree,slots" with the slot list quoted and comma-joined.
void write_frame_graph_csv(std::ostream& out, const FrameGraph& graph);

}  // namespace irsa
