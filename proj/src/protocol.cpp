#include "irsa/protocol.hpp"

#include "irsa/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace irsa {

void ScenarioConfig::validate() const
{
  if (!(activation >= 0.0 && activation <= 1.0)) {
    throw InvalidParameters("activation probability must lie in [0, 1]");
  }
  if (users < 1) {
    throw InvalidParameters("user population must be at least 1");
  }
  if (slots < 1) {
    throw InvalidParameters("frame needs at least one slot");
  }
}

std::vector<std::size_t> sample_active_set(const ScenarioConfig& config, Stream& rng)
{
  std::vector<std::size_t> active;
  if (config.activation <= 0.0) {
    return active;
  }
  for (std::size_t k = 0; k < config.users; ++k) {
    if (config.activation >= 1.0 || rng.bernoulli(config.activation)) {
      active.push_back(k);
    }
  }
  return active;
}

std::vector<Index> assign_codewords(std::size_t active_count, std::size_t codebook_size, Stream& rng)
{
  if (active_count > codebook_size) {
    throw FrameOverload(std::to_string(active_count) + " active users exceed " + std::to_string(codebook_size) +
                        " codewords");
  }
  std::vector<Index> pool(codebook_size);
  std::iota(pool.begin(), pool.end(), Index{0});
  for (std::size_t j = 0; j < active_count; ++j) {
    const auto r = j + static_cast<std::size_t>(rng.below(codebook_size - j));
    std::swap(pool[j], pool[r]);
  }
  pool.resize(active_count);
  return pool;
}

ReceivedFrame transmit(const Codebook& book, const FrameGraph& graph, std::span<const Index> assigned)
{
  ReceivedFrame frame(graph.slot_count(), book.word_length());
  const int width = book.word_length();
  for (Index i : assigned) {
    for (Index s : graph.slots(i)) {
      auto row = frame.row(s);
      for (int j = 0; j < width; ++j) {
        row[static_cast<std::size_t>(j)] += book.bit(i, j) ? 1 : 0;
      }
    }
  }
  frame.truth.assign(assigned.begin(), assigned.end());
  std::sort(frame.truth.begin(), frame.truth.end());
  return frame;
}

}  // namespace irsa
