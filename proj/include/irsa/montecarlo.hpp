#pragma once

#include "irsa/analysis.hpp"
#include "irsa/codebook.hpp"
#include "irsa/decoders.hpp"
#include "irsa/protocol.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace irsa {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for `hits` successes in `trials` Bernoulli trials.
/// With zero trials the interval is the degenerate [0, 0].
WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kZ95);

/// Everything fixed within one operating point: population, codebook and
/// replica graph. Shared read-only by all workers.
struct Scenario {
  ScenarioConfig config;
  std::shared_ptr<const Codebook> book;
  std::shared_ptr<const FrameGraph> graph;
};

Scenario make_scenario(const ScenarioConfig& config, Codebook book, const DegreeDistribution& lambda,
                       std::uint64_t graph_seed);

/// Activation, codeword assignment and channel output of frame `index`,
/// drawn from streams keyed by (master_seed, purpose, index). Returns the
/// number of active users in `active` and nullopt on overload (K_a > M).
std::optional<ReceivedFrame> simulate_frame(const Scenario& scenario, std::uint64_t index, std::uint64_t master_seed,
                                            std::size_t& active);

struct PlrEstimate {
  std::string point_id;
  double load = 0.0;
  std::size_t users = 0;
  std::size_t slots = 0;
  std::size_t codebook_size = 0;
  int n0 = 0;
  DecoderKind decoder = DecoderKind::ed_mpr;
  std::uint64_t frames = 0;
  std::uint64_t packets = 0;
  std::uint64_t lost = 0;
  std::uint64_t overload_frames = 0;
  double plr = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct RunOptions {
  unsigned workers = 1;
  /// Frames per work item; also the granularity of early stopping.
  std::uint64_t batch = 500;
  /// Stop once (ci_high - ci_low) / plr <= target for every decoder; 0 disables.
  double target_rel_ci = 0.0;
  DecodeOptions decode{true, true};
};

/// Runs `frames` frames and scores each requested decoder on the same frame
/// stream. Estimates are independent of the worker count.
std::vector<PlrEstimate> run_plr_point(const Scenario& scenario, std::span<const DecoderKind> decoders,
                                       std::uint64_t frames, std::uint64_t master_seed, const RunOptions& options = {});

PlrEstimate run_plr_point(const Scenario& scenario, DecoderKind decoder, std::uint64_t frames,
                          std::uint64_t master_seed, const RunOptions& options = {});

struct PiEstimate {
  std::uint64_t trials = 0;
  std::uint64_t resolved = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Isolated degree-U slot under the independent-codeword model: U
/// transmitted payloads i.i.d. Bernoulli(nu), L_0 ~ Bino(M - U, Lambda'(1)/N)
/// independent competitors. A trial succeeds when no competitor survives the
/// discard rules.
PiEstimate run_pi_u_point(int degree, int n0, double nu, std::uint64_t codebook_size, double avg_degree_over_slots,
                          std::uint64_t trials, std::uint64_t seed);

/// A family of operating points sharing frame length, degree distribution
/// and scaling exponents. Each load G gives K = round(G N / mu),
/// M = round(D K^(1/delta)) and n0 = payload_length_for(beta, M).
struct ExperimentSpec {
  std::vector<double> loads;
  std::vector<DecoderKind> decoders;
  std::uint64_t frames = 10000;
  std::uint64_t seed = 1;
  std::size_t slots = 200;
  double activation = 0.2;
  DegreeDistribution lambda = DegreeDistribution::regular(2);
  double nu = 0.5;
  double beta = 2.0;
  double delta = 0.9;
  double offset = 1.0;
  PayloadRounding rounding = PayloadRounding::up;
  /// BCH capability for the PVTC baseline; 0 means floor(beta).
  int pvtc_capability = 0;
};

struct SweepResult {
  std::vector<PlrEstimate> estimates;
  std::vector<std::string> errors;  // one message per failed point
};

/// Maps run_plr_point over the load grid in order. A failing point is
/// reported in `errors` and the sweep continues.
SweepResult sweep(const ExperimentSpec& spec, const RunOptions& options = {});

inline constexpr const char* kPlrSchema = "# schema: irsa-plr/1";

void write_plr_csv_header(std::ostream& out);
void write_plr_csv_row(std::ostream& out, const PlrEstimate& e);

}  // namespace irsa
