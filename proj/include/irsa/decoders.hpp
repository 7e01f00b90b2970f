#pragma once

#include "irsa/codebook.hpp"
#include "irsa/protocol.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace irsa {

enum class DecoderKind {
  singleton,  // classic IRSA: only residual degree-1 slots
  ed_mpr,     // per-slot discarding, per-slot candidate lists
  ed_fg,      // discarding with global candidate-list propagation
  pvtc,       // BCH parity book, slots of degree <= T
};

std::string_view to_string(DecoderKind kind) noexcept;
/// Accepts "original"/"singleton", "ed-mpr", "ed-fg", "pvtc".
DecoderKind parse_decoder_kind(std::string_view name);

/// Discard rules of the per-slot decoder. For payload positions j >= 1: if
/// residual[j] == k the survivor must carry a 1, if residual[j] == 0 it must
/// carry a 0. Other positions do not constrain. Survivors keep input order.
std::vector<Index> discard_pass(std::span<const std::int32_t> slot_residual, int k_residual,
                                std::span<const Index> candidates, const Codebook& book);

/// Mutable decoding state of one frame. A DecoderState is owned by one worker.
class DecoderState
{
public:
  enum class Status : std::uint8_t { unknown, resolved, excluded };

  DecoderState(const ReceivedFrame& frame, const FrameGraph& graph);

  std::size_t slot_count() const noexcept { return live_size_.size(); }
  int word_length() const noexcept { return static_cast<int>(width_); }

  std::span<const std::int32_t> residual(Index s) const noexcept { return {residual_.data() + s * width_, width_}; }
  /// Residual slot degree, always read from the pilot column.
  int k_residual(Index s) const noexcept { return residual_[s * width_]; }

  /// Live candidate list of a slot. Entries may still reference codewords
  /// that have since been resolved or excluded elsewhere.
  std::span<const Index> live(Index s) const noexcept { return {live_.data() + live_begin_[s], live_size_[s]}; }

  Status status(Index i) const noexcept { return status_[i]; }
  const std::vector<Index>& resolved() const noexcept { return resolved_; }
  int iteration = 0;

  /// Marks a codeword transmitted and cancels its replicas from every slot.
  void cancel(Index i, const Codebook& book, const FrameGraph& graph);

  /// Marks a codeword as not transmitted; every slot holding it is revisited.
  void exclude(Index i, const FrameGraph& graph);

  /// Replaces the live list of a slot with a subset of it.
  void shrink_live(Index s, std::span<const Index> keep);

  bool dirty(Index s) const noexcept { return dirty_[s] != 0; }
  void mark_clean(Index s) noexcept { dirty_[s] = 0; }

  /// Copies the live candidates of a slot whose status is still unknown.
  std::vector<Index> unknown_candidates(Index s) const;

private:
  std::size_t width_;
  std::vector<std::int32_t> residual_;
  std::vector<Status> status_;
  std::vector<Index> resolved_;
  std::vector<Index> live_;
  std::vector<std::size_t> live_begin_;
  std::vector<std::size_t> live_size_;
  std::vector<std::uint8_t> dirty_;
};

/// Runs the discard pass on the slot's live list and returns the survivors
/// iff exactly k_residual of them remain. The survivor list replaces the
/// slot's live list. Throws InternalInconsistency when fewer than k survive.
std::optional<std::vector<Index>> resolve_slot(DecoderState& state, Index slot, const Codebook& book);

struct SlotEvent {
  int iteration = 0;
  Index slot = 0;
  int degree = 0;
};

struct DecodeOutcome {
  std::vector<Index> decoded;  // sorted
  std::size_t undecoded_count = 0;
  int iterations = 0;
  std::vector<SlotEvent> per_slot_log;
};

struct DecodeOptions {
  /// Verify against frame.truth that no transmitted, unresolved codeword is
  /// ever discarded and every resolution is correct.
  bool check_safety = false;
  /// ED-FG only: a slot whose residual degree has dropped to zero rules out
  /// every candidate still listed there.
  bool exclude_on_empty_slot = true;
};

/// Continues decoding from `state` until a sweep resolves nothing new.
DecodeOutcome run_decoder(DecoderKind kind, DecoderState& state, const ReceivedFrame& frame, const FrameGraph& graph,
                          const Codebook& book, const DecodeOptions& options = {});

DecodeOutcome decode(DecoderKind kind, const ReceivedFrame& frame, const FrameGraph& graph, const Codebook& book,
                     const DecodeOptions& options = {});

inline DecodeOutcome ed_mpr_decode(const ReceivedFrame& frame, const FrameGraph& graph, const Codebook& book)
{
  return decode(DecoderKind::ed_mpr, frame, graph, book);
}

inline DecodeOutcome ed_fg_decode(const ReceivedFrame& frame, const FrameGraph& graph, const Codebook& book)
{
  return decode(DecoderKind::ed_fg, frame, graph, book);
}

inline DecodeOutcome singleton_decode(const ReceivedFrame& frame, const FrameGraph& graph, const Codebook& book)
{
  return decode(DecoderKind::singleton, frame, graph, book);
}

/// PVTC per-slot decoder: for k_residual <= capability, the unique
/// k-subset of candidates whose integer column sum equals the residual.
/// Returns nullopt when k_residual exceeds the capability. Throws
/// CodebookPropertyViolation on zero or several matches.
std::optional<std::vector<Index>> pvtc_slot_decode(std::span<const std::int32_t> slot_residual, int k_residual,
                                                   std::span<const Index> candidates, const Codebook& book,
                                                   int capability);

/// Ground truth by brute force: every k-subset of the candidates whose
/// integer column sum equals the residual (pilot included). Throws
/// OracleTooLarge beyond `max_enumerations` subsets.
std::vector<std::vector<Index>> oracle_slot_decode(std::span<const std::int32_t> slot_residual, int k_residual,
                                                   std::span<const Index> candidates, const Codebook& book,
                                                   double max_enumerations = 1e7);

/// CSV row "frame,decoder,decoded,truth,iterations".
void write_outcome_csv_header(std::ostream& out);
void write_outcome_csv_row(std::ostream& out, std::uint64_t frame_id, DecoderKind kind, const DecodeOutcome& outcome,
                           std::size_t truth_count);

}  // namespace irsa
