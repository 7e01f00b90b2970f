#include "irsa/decoders.hpp"

#include "irsa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace irsa {

std::string_view to_string(DecoderKind kind) noexcept
{
  switch (kind) {
    case DecoderKind::singleton: return "original";
    case DecoderKind::ed_mpr: return "ed-mpr";
    case DecoderKind::ed_fg: return "ed-fg";
    case DecoderKind::pvtc: return "pvtc";
  }
  return "unknown";
}

DecoderKind parse_decoder_kind(std::string_view name)
{
  if (name == "original" || name == "singleton") {
    return DecoderKind::singleton;
  }
  if (name == "ed-mpr") {
    return DecoderKind::ed_mpr;
  }
  if (name == "ed-fg") {
    return DecoderKind::ed_fg;
  }
  if (name == "pvtc") {
    return DecoderKind::pvtc;
  }
  throw InvalidParameters("unknown decoder '" + std::string(name) + "'");
}

namespace {

struct DiscardMasks {
  std::vector<std::uint64_t> ones;
  std::vector<std::uint64_t> zeros;
};

DiscardMasks build_masks(std::span<const std::int32_t> residual, int k, std::size_t blocks)
{
  DiscardMasks masks{std::vector<std::uint64_t>(blocks, 0), std::vector<std::uint64_t>(blocks, 0)};
  for (std::size_t j = 1; j < residual.size(); ++j) {
    const std::uint64_t bit = std::uint64_t{1} << (j % 64);
    if (residual[j] == k) {
      masks.ones[j / 64] |= bit;
    } else if (residual[j] == 0) {
      masks.zeros[j / 64] |= bit;
    }
  }
  return masks;
}

bool survives(const DiscardMasks& masks, std::span<const std::uint64_t> word) noexcept
{
  for (std::size_t b = 0; b < word.size(); ++b) {
    if ((word[b] & masks.ones[b]) != masks.ones[b] || (word[b] & masks.zeros[b]) != 0) {
      return false;
    }
  }
  return true;
}

bool sum_matches(std::span<const Index> subset, std::span<const std::int32_t> residual, const Codebook& book)
{
  for (std::size_t j = 0; j < residual.size(); ++j) {
    std::int32_t sum = 0;
    for (Index i : subset) {
      sum += book.bit(i, static_cast<int>(j)) ? 1 : 0;
    }
    if (sum != residual[j]) {
      return false;
    }
  }
  return true;
}

// Visits every k-subset of `pool` (as index combinations, lexicographic).
template <typename Visit>
void for_each_subset(std::span<const Index> pool, int k, Visit&& visit)
{
  const auto n = pool.size();
  const auto kk = static_cast<std::size_t>(k);
  if (kk > n) {
    return;
  }
  std::vector<std::size_t> pick(kk);
  for (std::size_t j = 0; j < kk; ++j) {
    pick[j] = j;
  }
  std::vector<Index> subset(kk);
  while (true) {
    for (std::size_t j = 0; j < kk; ++j) {
      subset[j] = pool[pick[j]];
    }
    visit(std::span<const Index>(subset));
    std::size_t j = kk;
    while (j > 0 && pick[j - 1] == n - kk + (j - 1)) {
      --j;
    }
    if (j == 0) {
      return;
    }
    ++pick[j - 1];
    for (std::size_t t = j; t < kk; ++t) {
      pick[t] = pick[t - 1] + 1;
    }
  }
}

double binomial_count(std::size_t n, int k)
{
  if (static_cast<std::size_t>(k) > n) {
    return 0.0;
  }
  return std::round(std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(k + 1.0) -
                             std::lgamma(static_cast<double>(n - static_cast<std::size_t>(k)) + 1)));
}

bool in_truth(const ReceivedFrame& frame, Index i)
{
  return std::binary_search(frame.truth.begin(), frame.truth.end(), i);
}

}  // namespace

std::vector<Index> discard_pass(std::span<const std::int32_t> slot_residual, int k_residual,
                                std::span<const Index> candidates, const Codebook& book)
{
  const auto masks = build_masks(slot_residual, k_residual, book.blocks_per_word());
  std::vector<Index> out;
  out.reserve(candidates.size());
  for (Index i : candidates) {
    if (survives(masks, book.word(i))) {
      out.push_back(i);
    }
  }
  return out;
}

DecoderState::DecoderState(const ReceivedFrame& frame, const FrameGraph& graph)
  : width_(static_cast<std::size_t>(frame.word_length()))
  , status_(graph.codeword_count(), Status::unknown)
  , live_begin_(graph.slot_count())
  , live_size_(graph.slot_count())
  , dirty_(graph.slot_count(), 1)
{
  residual_.resize(frame.slot_count() * width_);
  for (Index s = 0; s < frame.slot_count(); ++s) {
    const auto row = frame.row(s);
    std::copy(row.begin(), row.end(), residual_.begin() + static_cast<std::ptrdiff_t>(s * width_));
  }
  live_.reserve(graph.edge_count());
  for (Index s = 0; s < graph.slot_count(); ++s) {
    const auto c = graph.candidates(s);
    live_begin_[s] = live_.size();
    live_size_[s] = c.size();
    live_.insert(live_.end(), c.begin(), c.end());
  }
}

void DecoderState::cancel(Index i, const Codebook& book, const FrameGraph& graph)
{
  status_[i] = Status::resolved;
  resolved_.push_back(i);
  for (Index s : graph.slots(i)) {
    std::int32_t* row = residual_.data() + s * width_;
    for (std::size_t j = 0; j < width_; ++j) {
      row[j] -= book.bit(i, static_cast<int>(j)) ? 1 : 0;
    }
    if (row[0] < 0) {
      throw InternalInconsistency("negative residual slot degree after cancellation");
    }
    dirty_[s] = 1;
  }
}

void DecoderState::exclude(Index i, const FrameGraph& graph)
{
  status_[i] = Status::excluded;
  for (Index s : graph.slots(i)) {
    dirty_[s] = 1;
  }
}

void DecoderState::shrink_live(Index s, std::span<const Index> keep)
{
  std::copy(keep.begin(), keep.end(), live_.begin() + static_cast<std::ptrdiff_t>(live_begin_[s]));
  live_size_[s] = keep.size();
}

std::vector<Index> DecoderState::unknown_candidates(Index s) const
{
  std::vector<Index> out;
  for (Index i : live(s)) {
    if (status_[i] == Status::unknown) {
      out.push_back(i);
    }
  }
  return out;
}

std::optional<std::vector<Index>> resolve_slot(DecoderState& state, Index slot, const Codebook& book)
{
  const int k = state.k_residual(slot);
  if (k < 1) {
    throw InvalidParameters("resolve_slot needs a slot with residual degree >= 1");
  }
  const auto candidates = state.unknown_candidates(slot);
  auto survivors = discard_pass(state.residual(slot), k, candidates, book);
  state.shrink_live(slot, survivors);
  if (survivors.size() < static_cast<std::size_t>(k)) {
    throw InternalInconsistency("slot " + std::to_string(slot) + " keeps " + std::to_string(survivors.size()) +
                                " candidates for residual degree " + std::to_string(k));
  }
  if (survivors.size() == static_cast<std::size_t>(k)) {
    return survivors;
  }
  return std::nullopt;
}

DecodeOutcome run_decoder(DecoderKind kind, DecoderState& state, const ReceivedFrame& frame, const FrameGraph& graph,
                          const Codebook& book, const DecodeOptions& options)
{
  int capability = 0;
  if (kind == DecoderKind::pvtc) {
    const auto* bch = std::get_if<BchKind>(&book.kind());
    if (bch == nullptr) {
      throw InvalidParameters("the PVTC decoder needs a BCH codebook");
    }
    capability = bch->capability;
  }

  DecodeOutcome outcome;

  auto check_discard = [&](std::span<const Index> candidates, std::span<const Index> survivors) {
    if (!options.check_safety) {
      return;
    }
    for (Index i : candidates) {
      if (in_truth(frame, i) && std::find(survivors.begin(), survivors.end(), i) == survivors.end()) {
        throw InternalInconsistency("transmitted codeword " + std::to_string(i) + " was discarded");
      }
    }
  };

  auto accept = [&](Index slot, const std::vector<Index>& words) {
    for (Index i : words) {
      if (options.check_safety && !in_truth(frame, i)) {
        throw InternalInconsistency("slot " + std::to_string(slot) + " resolved to untransmitted codeword " +
                                    std::to_string(i));
      }
      state.cancel(i, book, graph);
    }
    outcome.per_slot_log.push_back({state.iteration, slot, static_cast<int>(words.size())});
  };

  int sweeps = 0;
  while (true) {
    ++state.iteration;
    ++sweeps;
    bool changed = false;
    for (Index s = 0; s < state.slot_count(); ++s) {
      if (!state.dirty(s)) {
        continue;
      }
      state.mark_clean(s);
      const int k = state.k_residual(s);

      if (k == 0) {
        if (kind == DecoderKind::ed_fg && options.exclude_on_empty_slot) {
          const auto leftovers = state.unknown_candidates(s);
          check_discard(leftovers, {});
          for (Index i : leftovers) {
            state.exclude(i, graph);
            changed = true;
          }
          state.shrink_live(s, {});
        }
        continue;
      }

      switch (kind) {
        case DecoderKind::singleton: {
          if (k != 1) {
            break;
          }
          const auto row = state.residual(s);
          bool matched = false;
          for (Index i : state.unknown_candidates(s)) {
            bool equal = true;
            for (std::size_t j = 0; j < row.size() && equal; ++j) {
              equal = row[j] == (book.bit(i, static_cast<int>(j)) ? 1 : 0);
            }
            if (equal) {
              accept(s, {i});
              matched = true;
              break;
            }
          }
          if (!matched) {
            throw InternalInconsistency("singleton slot " + std::to_string(s) + " matches no candidate");
          }
          changed = true;
          break;
        }
        case DecoderKind::ed_mpr:
        case DecoderKind::ed_fg: {
          const auto candidates = state.unknown_candidates(s);
          auto result = resolve_slot(state, s, book);
          const auto survivors = state.live(s);
          check_discard(candidates, survivors);
          if (kind == DecoderKind::ed_fg && survivors.size() != candidates.size()) {
            std::vector<Index> kept(survivors.begin(), survivors.end());
            std::sort(kept.begin(), kept.end());
            for (Index i : candidates) {
              if (!std::binary_search(kept.begin(), kept.end(), i)) {
                state.exclude(i, graph);
                changed = true;
              }
            }
          }
          if (result) {
            accept(s, *result);
            changed = true;
          }
          break;
        }
        case DecoderKind::pvtc: {
          const auto candidates = state.unknown_candidates(s);
          auto result = pvtc_slot_decode(state.residual(s), k, candidates, book, capability);
          if (result) {
            accept(s, *result);
            changed = true;
          }
          break;
        }
      }
    }
    if (!changed) {
      break;
    }
  }

  outcome.iterations = sweeps;
  outcome.decoded = state.resolved();
  std::sort(outcome.decoded.begin(), outcome.decoded.end());
  outcome.undecoded_count = frame.truth.size() >= outcome.decoded.size() ? frame.truth.size() - outcome.decoded.size()
                                                                         : 0;
  return outcome;
}

DecodeOutcome decode(DecoderKind kind, const ReceivedFrame& frame, const FrameGraph& graph, const Codebook& book,
                     const DecodeOptions& options)
{
  DecoderState state(frame, graph);
  return run_decoder(kind, state, frame, graph, book, options);
}

std::optional<std::vector<Index>> pvtc_slot_decode(std::span<const std::int32_t> slot_residual, int k_residual,
                                                   std::span<const Index> candidates, const Codebook& book,
                                                   int capability)
{
  if (k_residual < 1 || k_residual > capability) {
    return std::nullopt;
  }
  // Every member of a matching subset passes the discard rules, so the
  // search can be restricted to the survivors.
  const auto pool = discard_pass(slot_residual, k_residual, candidates, book);
  std::optional<std::vector<Index>> match;
  int matches = 0;
  for_each_subset(pool, k_residual, [&](std::span<const Index> subset) {
    if (sum_matches(subset, slot_residual, book)) {
      ++matches;
      match.emplace(subset.begin(), subset.end());
    }
  });
  if (matches != 1) {
    throw CodebookPropertyViolation(std::to_string(matches) + " subsets of size " + std::to_string(k_residual) +
                                    " match the slot output");
  }
  return match;
}

std::vector<std::vector<Index>> oracle_slot_decode(std::span<const std::int32_t> slot_residual, int k_residual,
                                                   std::span<const Index> candidates, const Codebook& book,
                                                   double max_enumerations)
{
  std::vector<std::vector<Index>> out;
  if (k_residual < 0) {
    return out;
  }
  if (binomial_count(candidates.size(), k_residual) > max_enumerations) {
    throw OracleTooLarge("oracle would enumerate more than " + std::to_string(max_enumerations) + " subsets");
  }
  if (k_residual == 0) {
    if (std::all_of(slot_residual.begin(), slot_residual.end(), [](std::int32_t v) { return v == 0; })) {
      out.emplace_back();
    }
    return out;
  }
  for_each_subset(candidates, k_residual, [&](std::span<const Index> subset) {
    if (sum_matches(subset, slot_residual, book)) {
      out.emplace_back(subset.begin(), subset.end());
    }
  });
  return out;
}

void write_outcome_csv_header(std::ostream& out)
{
  out << "frame,decoder,decoded,truth,iterations\n";
}

void write_outcome_csv_row(std::ostream& out, std::uint64_t frame_id, DecoderKind kind, const DecodeOutcome& outcome,
                           std::size_t truth_count)
{
  out << frame_id << ',' << to_string(kind) << ',' << outcome.decoded.size() << ',' << truth_count << ','
      << outcome.iterations << '\n';
}

}  // namespace irsa
