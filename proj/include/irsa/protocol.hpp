#pragma once

#include "irsa/codebook.hpp"
#include "irsa/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace irsa {

/// Population and frame parameters of one operating point.
struct ScenarioConfig {
  std::size_t users = 1;   // K
  double activation = 0.0; // mu
  std::size_t slots = 1;   // N

  /// Channel load G = mu K / N.
  double load() const noexcept { return activation * static_cast<double>(users) / static_cast<double>(slots); }

  /// Throws InvalidParameters unless 0 <= mu <= 1, K >= 1 and N >= 1.
  void validate() const;
};

/// Noiseless adder-channel output of one frame: an N x (1 + n0) array of
/// column sums. Column 0 of each slot row is the pilot count K_s.
class ReceivedFrame
{
public:
  ReceivedFrame(std::size_t slots, int word_length)
    : slots_(slots), width_(static_cast<std::size_t>(word_length)), y_(slots * width_, 0)
  {}

  std::size_t slot_count() const noexcept { return slots_; }
  int word_length() const noexcept { return static_cast<int>(width_); }

  std::span<const std::int32_t> row(Index s) const noexcept { return {y_.data() + s * width_, width_}; }
  std::span<std::int32_t> row(Index s) noexcept { return {y_.data() + s * width_, width_}; }

  std::int32_t at(Index s, int j) const noexcept { return y_[s * width_ + static_cast<std::size_t>(j)]; }

  /// Transmitted codeword indices, sorted. Kept for scoring only.
  std::vector<Index> truth;

private:
  std::size_t slots_;
  std::size_t width_;
  std::vector<std::int32_t> y_;
};

/// Each of the K users is active independently with probability mu.
std::vector<std::size_t> sample_active_set(const ScenarioConfig& config, Stream& rng);

/// Uniform sample of `active_count` distinct codeword indices from [0, M).
/// Throws FrameOverload when active_count > M.
std::vector<Index> assign_codewords(std::size_t active_count, std::size_t codebook_size, Stream& rng);

/// Superimposes every assigned codeword on each of its replica slots.
ReceivedFrame transmit(const Codebook& book, const FrameGraph& graph, std::span<const Index> assigned);

}  // namespace irsa
