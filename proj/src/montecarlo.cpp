#include "irsa/montecarlo.hpp"

#include "irsa/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace irsa {

WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z)
{
  if (trials == 0) {
    return {0.0, 0.0};
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::clamp(centre - half, 0.0, p), std::clamp(centre + half, p, 1.0)};
}

Scenario make_scenario(const ScenarioConfig& config, Codebook book, const DegreeDistribution& lambda,
                       std::uint64_t graph_seed)
{
  config.validate();
  Scenario scenario;
  scenario.config = config;
  auto shared_book = std::make_shared<const Codebook>(std::move(book));
  scenario.graph = std::make_shared<const FrameGraph>(build_frame_graph(*shared_book, lambda, config.slots, graph_seed));
  scenario.book = std::move(shared_book);
  return scenario;
}

std::optional<ReceivedFrame> simulate_frame(const Scenario& scenario, std::uint64_t index, std::uint64_t master_seed,
                                            std::size_t& active)
{
  Stream activation(master_seed, StreamTag::activation, index);
  active = sample_active_set(scenario.config, activation).size();
  Stream assignment(master_seed, StreamTag::assignment, index);
  try {
    const auto assigned = assign_codewords(active, scenario.book->size(), assignment);
    return transmit(*scenario.book, *scenario.graph, assigned);
  } catch (const FrameOverload&) {
    return std::nullopt;
  }
}

namespace {

struct BatchCounts {
  std::uint64_t frames = 0;
  std::uint64_t packets = 0;
  std::uint64_t overload = 0;
  std::vector<std::uint64_t> lost;
};

BatchCounts run_batch(const Scenario& scenario, std::span<const DecoderKind> decoders, std::uint64_t first,
                      std::uint64_t last, std::uint64_t seed, const DecodeOptions& options)
{
  BatchCounts counts;
  counts.lost.assign(decoders.size(), 0);
  for (std::uint64_t f = first; f < last; ++f) {
    std::size_t active = 0;
    const auto frame = simulate_frame(scenario, f, seed, active);
    ++counts.frames;
    counts.packets += active;
    if (!frame) {
      ++counts.overload;
      for (auto& l : counts.lost) {
        l += active;
      }
      continue;
    }
    for (std::size_t d = 0; d < decoders.size(); ++d) {
      const auto outcome = decode(decoders[d], *frame, *scenario.graph, *scenario.book, options);
      if (options.check_safety &&
          !std::includes(frame->truth.begin(), frame->truth.end(), outcome.decoded.begin(), outcome.decoded.end())) {
        throw InternalInconsistency("decoder returned a codeword that was not transmitted");
      }
      counts.lost[d] += outcome.undecoded_count;
    }
  }
  return counts;
}

PlrEstimate make_estimate(const Scenario& scenario, DecoderKind decoder, std::uint64_t frames, std::uint64_t packets,
                          std::uint64_t lost, std::uint64_t overload)
{
  PlrEstimate e;
  e.load = scenario.config.load();
  e.users = scenario.config.users;
  e.slots = scenario.config.slots;
  e.codebook_size = scenario.book->size();
  e.n0 = scenario.book->payload_length();
  e.decoder = decoder;
  e.frames = frames;
  e.packets = packets;
  e.lost = lost;
  e.overload_frames = overload;
  e.plr = packets == 0 ? 0.0 : static_cast<double>(lost) / static_cast<double>(packets);
  const auto ci = wilson_interval(lost, packets);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  return e;
}

bool precise_enough(const BatchCounts& total, double target)
{
  if (target <= 0.0 || total.packets == 0) {
    return false;
  }
  for (auto lost : total.lost) {
    if (lost == 0) {
      return false;
    }
    const auto ci = wilson_interval(lost, total.packets);
    const double plr = static_cast<double>(lost) / static_cast<double>(total.packets);
    if ((ci.high - ci.low) / plr > target) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<PlrEstimate> run_plr_point(const Scenario& scenario, std::span<const DecoderKind> decoders,
                                       std::uint64_t frames, std::uint64_t master_seed, const RunOptions& options)
{
  if (frames < 1) {
    throw InvalidParameters("frame budget must be at least 1");
  }
  const std::uint64_t batch = std::max<std::uint64_t>(options.batch, 1);
  const std::uint64_t batch_count = (frames + batch - 1) / batch;
  const unsigned workers = std::max(1U, options.workers);
  const std::uint64_t round = options.target_rel_ci > 0.0 ? std::max<std::uint64_t>(workers, 1) : batch_count;

  BatchCounts total;
  total.lost.assign(decoders.size(), 0);
  std::uint64_t next_batch = 0;
  bool done = false;
  while (!done && next_batch < batch_count) {
    const std::uint64_t round_end = std::min(batch_count, next_batch + round);
    std::vector<BatchCounts> results(round_end - next_batch);
    std::atomic<std::uint64_t> cursor{next_batch};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      try {
        for (std::uint64_t b = cursor++; b < round_end; b = cursor++) {
          results[b - next_batch] =
              run_batch(scenario, decoders, b * batch, std::min(frames, (b + 1) * batch), master_seed, options.decode);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        failure = std::current_exception();
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(work);
      }
    }
    if (failure) {
      std::rethrow_exception(failure);
    }
    // Batches are folded in order, so the stopping point depends only on the
    // frame stream and never on scheduling.
    for (const auto& r : results) {
      total.frames += r.frames;
      total.packets += r.packets;
      total.overload += r.overload;
      for (std::size_t d = 0; d < decoders.size(); ++d) {
        total.lost[d] += r.lost[d];
      }
      if (precise_enough(total, options.target_rel_ci)) {
        done = true;
        break;
      }
    }
    next_batch = round_end;
  }

  std::vector<PlrEstimate> out;
  for (std::size_t d = 0; d < decoders.size(); ++d) {
    out.push_back(make_estimate(scenario, decoders[d], total.frames, total.packets, total.lost[d], total.overload));
  }
  return out;
}

PlrEstimate run_plr_point(const Scenario& scenario, DecoderKind decoder, std::uint64_t frames,
                          std::uint64_t master_seed, const RunOptions& options)
{
  const DecoderKind one[] = {decoder};
  return run_plr_point(scenario, one, frames, master_seed, options).front();
}

PiEstimate run_pi_u_point(int degree, int n0, double nu, std::uint64_t codebook_size, double avg_degree_over_slots,
                          std::uint64_t trials, std::uint64_t seed)
{
  if (degree < 1 || codebook_size < static_cast<std::uint64_t>(degree)) {
    throw InvalidParameters("need 1 <= U <= M");
  }
  if (!(nu > 0.0 && nu < 1.0) || !(avg_degree_over_slots > 0.0 && avg_degree_over_slots < 1.0)) {
    throw InvalidParameters("nu and Lambda'(1)/N must lie in (0, 1)");
  }
  const auto others = static_cast<long long>(codebook_size) - degree;
  std::vector<int> column(static_cast<std::size_t>(n0));
  // Constrained positions and the bit a competitor must carry there.
  std::vector<std::pair<int, bool>> constraints;
  constraints.reserve(static_cast<std::size_t>(n0));

  PiEstimate est;
  est.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Stream rng(seed, StreamTag::slot_trial, t);
    std::fill(column.begin(), column.end(), 0);
    for (int u = 0; u < degree; ++u) {
      for (int j = 0; j < n0; ++j) {
        column[static_cast<std::size_t>(j)] += rng.bernoulli(nu) ? 1 : 0;
      }
    }
    constraints.clear();
    for (int j = 0; j < n0; ++j) {
      const int y = column[static_cast<std::size_t>(j)];
      if (y == degree) {
        constraints.emplace_back(j, true);
      } else if (y == 0) {
        constraints.emplace_back(j, false);
      }
    }
    long long competitors = 0;
    if (others > 0) {
      std::binomial_distribution<long long> count(others, avg_degree_over_slots);
      competitors = count(rng);
    }
    bool resolved = true;
    for (long long c = 0; c < competitors && resolved; ++c) {
      bool compatible = true;
      for (const auto& [pos, bit] : constraints) {
        if (rng.bernoulli(nu) != bit) {
          compatible = false;
          break;
        }
      }
      resolved = !compatible;
    }
    est.resolved += resolved ? 1 : 0;
  }
  est.estimate = trials == 0 ? 0.0 : static_cast<double>(est.resolved) / static_cast<double>(trials);
  const auto ci = wilson_interval(est.resolved, trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

namespace {

int bch_degree_for(std::size_t codebook_size)
{
  int m = 2;
  while (((std::size_t{1} << m) - 1) < codebook_size) {
    ++m;
  }
  return m;
}

}  // namespace

SweepResult sweep(const ExperimentSpec& spec, const RunOptions& options)
{
  SweepResult result;
  std::vector<DecoderKind> iid_decoders;
  bool want_pvtc = false;
  for (auto d : spec.decoders) {
    if (d == DecoderKind::pvtc) {
      want_pvtc = true;
    } else {
      iid_decoders.push_back(d);
    }
  }

  for (std::size_t p = 0; p < spec.loads.size(); ++p) {
    const double load = spec.loads[p];
    std::ostringstream id;
    id << "G=" << load;
    try {
      if (!(load > 0.0)) {
        throw InvalidParameters("channel load must be positive");
      }
      ScenarioConfig config;
      config.slots = spec.slots;
      config.activation = spec.activation;
      config.users = static_cast<std::size_t>(std::llround(load * static_cast<double>(spec.slots) / spec.activation));
      const auto m_size =
          static_cast<std::size_t>(std::llround(spec.offset * std::pow(static_cast<double>(config.users), 1.0 / spec.delta)));

      std::vector<PlrEstimate> point;
      if (!iid_decoders.empty()) {
        const int n0 = payload_length_for(spec.beta, static_cast<double>(m_size), spec.rounding);
        auto book = gen_iid_codebook(m_size, n0, spec.nu, spec.seed);
        const auto scenario = make_scenario(config, std::move(book), spec.lambda, spec.seed);
        auto est = run_plr_point(scenario, iid_decoders, spec.frames, spec.seed, options);
        point.insert(point.end(), est.begin(), est.end());
      }
      if (want_pvtc) {
        const int capability = spec.pvtc_capability > 0 ? spec.pvtc_capability
                                                        : static_cast<int>(std::floor(spec.beta));
        auto book = gen_bch_codebook(bch_degree_for(m_size), capability, m_size);
        const auto scenario = make_scenario(config, std::move(book), spec.lambda, spec.seed);
        point.push_back(run_plr_point(scenario, DecoderKind::pvtc, spec.frames, spec.seed, options));
      }
      // Report in the order the decoders were requested.
      for (auto d : spec.decoders) {
        for (auto& e : point) {
          if (e.decoder == d) {
            e.point_id = id.str();
            result.estimates.push_back(e);
          }
        }
      }
    } catch (const std::exception& ex) {
      result.errors.push_back(id.str() + ": " + ex.what());
    }
  }
  return result;
}

void write_plr_csv_header(std::ostream& out)
{
  out << kPlrSchema << '\n' << "point_id,G,K,N,M,n0,decoder,frames,packets,lost,plr,ci_low,ci_high\n";
}

void write_plr_csv_row(std::ostream& out, const PlrEstimate& e)
{
  std::ostringstream row;
  row << std::setprecision(10);
  row << e.point_id << ',' << e.load << ',' << e.users << ',' << e.slots << ',' << e.codebook_size << ',' << e.n0
      << ',' << to_string(e.decoder) << ',' << e.frames << ',' << e.packets << ',' << e.lost << ',' << e.plr << ','
      << e.ci_low << ',' << e.ci_high << '\n';
  out << row.str();
}

}  // namespace irsa
