#include "irsa/analysis.hpp"
#include "irsa/codebook.hpp"
#include "irsa/decoders.hpp"
#include "irsa/montecarlo.hpp"
#include "irsa/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace irsa;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& what)
  {
    if (!condition) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

bool close_relative(double a, double b, double rel)
{
  if (a == b) {
    return true;
  }
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

unsigned workers()
{
  return std::max(1U, std::thread::hardware_concurrency());
}

const std::vector<int> kPayloads = {8, 16, 32, 64};
const std::vector<double> kBooks = {1e2, 1e4, 1e6};
const std::vector<double> kDensities = {0.001, 0.01, 0.1};

void criterion_1(Check& c)
{
  int points = 0;
  double worst = 0.0;
  for (int u = 1; u <= 8; ++u) {
    for (int n0 : kPayloads) {
      for (double m : kBooks) {
        for (double a : kDensities) {
          const double half = pi_u_half(u, n0, m, a);
          const double exact = pi_u_exact(u, n0, 0.5, m, a);
          ++points;
          if (half != exact) {
            worst = std::max(worst, std::abs(half - exact) / std::max(std::abs(half), std::abs(exact)));
          }
          c.expect(close_relative(half, exact, 1e-12),
                   "U=" + std::to_string(u) + " n0=" + std::to_string(n0) + " M=" + fmt(m) + " a=" + fmt(a));
        }
      }
    }
  }
  c.detail << " points=" << points << " worst_rel=" << fmt(worst);
}

void criterion_2(Check& c)
{
  struct Config {
    int u;
    int n0;
    double nu;
    std::uint64_t m;
    double a;
  };
  std::vector<Config> configs = {{2, 2, 0.5, 3, 0.5}};
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 5; ++i) {
    const int u = std::uniform_int_distribution<int>(1, 3)(rng);
    configs.push_back({u, std::uniform_int_distribution<int>(1, 6)(rng),
                       std::uniform_real_distribution<double>(0.1, 0.9)(rng),
                       static_cast<std::uint64_t>(u + std::uniform_int_distribution<int>(1, 20)(rng)),
                       std::uniform_real_distribution<double>(0.05, 0.9)(rng)});
  }
  const std::uint64_t trials = 1000000;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& k = configs[i];
    const double p = pi_u_exact(k.u, k.n0, k.nu, static_cast<double>(k.m), k.a);
    const auto e = run_pi_u_point(k.u, k.n0, k.nu, k.m, k.a, trials, 100 + i);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
    c.detail << " (" << k.u << "," << k.n0 << "," << fmt(k.nu) << "," << k.m << "," << fmt(k.a) << "): sim=" << fmt(e.estimate)
             << " exact=" << fmt(p);
    c.expect(std::abs(e.estimate - p) <= 3.0 * se, "config " + std::to_string(i));
  }
  c.expect(close_relative(pi_u_exact(2, 2, 0.5, 3, 0.5), 0.71875, 1e-12), "worked value");
}

void criterion_3(Check& c)
{
  int violations = 0;
  for (int u = 1; u <= 8; ++u) {
    for (int n0 : kPayloads) {
      for (double m : kBooks) {
        for (double a : kDensities) {
          const double half = pi_u_half(u, n0, m, a);
          const double lower = pi_u_lower_bound(u, n0, m, a);
          bool ok = lower <= half;
          try {
            const auto s = sandwich_check(u, n0, m, a);
            ok = ok && s.lower <= s.value && s.value <= s.upper;
          } catch (const std::exception&) {
            ok = false;
          }
          violations += ok ? 0 : 1;
        }
      }
    }
  }
  c.detail << " violations=" << violations;
  c.expect(violations == 0, "ordering");
}

void criterion_4(Check& c)
{
  const double k = 1e9;
  const std::vector<double> expected = {0.9935, 0.5157, 0.00258};
  for (auto rounding : {PayloadRounding::up, PayloadRounding::nearest}) {
    const auto p = scaling_point(k, 2.5, 1.0, 2.0, 0.9, rounding);
    const bool gated = rounding == PayloadRounding::up;
    c.detail << (gated ? " n0=ceil:" : " info n0=round:") << p.n0;
    for (int u = 3; u <= 5; ++u) {
      const double v = pi_u_lower_bound(u, p.n0, p.codebook_size, 2.0 / p.slots);
      c.detail << " pi" << u << "=" << fmt(v);
      if (gated) {
        c.expect(std::abs(v - expected[static_cast<std::size_t>(u - 3)]) <= 0.1 * expected[static_cast<std::size_t>(u - 3)],
                 "U=" + std::to_string(u));
      }
    }
  }
}

void criterion_5(Check& c)
{
  c.expect(t_ed_mpr(2.0, 0.9) == 4, "t_ed_mpr");
  const AsymptoticRegime regime{1.0, 1.0, 2.0, 0.9, 0.2};
  for (int u = 1; u <= 12; ++u) {
    const double v = pi_u_asymptotic(u, regime, 2.0);
    c.expect(v == (u <= 4 ? 1.0 : 0.0), "pi_asymptotic U=" + std::to_string(u));
  }
  c.expect(compare_regimes(2.0, 0.9) == RegimeOrder::ed_mpr_greater, "(2, 0.9)");
  c.expect(compare_regimes(7.0, 0.43) == RegimeOrder::pvtc_greater, "(7, 0.43)");
  c.detail << " T=" << t_ed_mpr(2.0, 0.9) << " (2,0.9)=" << to_string(compare_regimes(2.0, 0.9))
           << " (7,0.43)=" << to_string(compare_regimes(7.0, 0.43));
}

void criterion_6(Check& c)
{
  const auto lambda = DegreeDistribution::regular(2);
  const double original = de_threshold(lambda, MprProfile::up_to(1));
  const double pvtc = de_threshold(lambda, MprProfile::up_to(2));
  const double ed = threshold_ed_mpr(lambda, AsymptoticRegime{1.0, 1.0, 2.0, 0.9, 0.2});
  c.detail << " original=" << fmt(original) << " pvtc2=" << fmt(pvtc) << " ed_mpr=" << fmt(ed);
  c.expect(std::abs(original - 0.5005) <= 0.005, "original");
  c.expect(std::abs(pvtc - 1.6755) <= 0.01, "pvtc");
  c.expect(std::abs(ed - 3.3996) <= 0.02, "ed-mpr");
}

ExperimentSpec plr_point(double load, DecoderKind decoder, std::uint64_t frames, PayloadRounding rounding)
{
  ExperimentSpec spec;
  spec.loads = {load};
  spec.decoders = {decoder};
  spec.frames = frames;
  spec.seed = 1;
  spec.slots = 200;
  spec.activation = 0.2;
  spec.lambda = DegreeDistribution::regular(2);
  spec.nu = 0.5;
  spec.beta = 2.0;
  spec.delta = 0.9;
  spec.rounding = rounding;
  return spec;
}

void criterion_7(Check& c)
{
  struct Target {
    DecoderKind decoder;
    double load;
    double plr;
    double tol;
  };
  const std::vector<Target> targets = {{DecoderKind::ed_mpr, 2.2, 0.221, 0.03},
                                       {DecoderKind::ed_fg, 2.5, 0.052, 0.015},
                                       {DecoderKind::singleton, 0.6, 0.131, 0.02},
                                       {DecoderKind::pvtc, 1.5, 0.095, 0.02}};
  const std::uint64_t frames = 20000;
  RunOptions options;
  options.workers = workers();
  for (const auto& t : targets) {
    const auto r = sweep(plr_point(t.load, t.decoder, frames, PayloadRounding::up), options);
    if (!r.errors.empty() || r.estimates.size() != 1) {
      c.expect(false, std::string(to_string(t.decoder)) + " point failed");
      continue;
    }
    const auto& e = r.estimates[0];
    c.detail << " " << to_string(t.decoder) << "@G=" << fmt(t.load) << ": n0=" << e.n0 << " plr=" << fmt(e.plr) << " ["
             << fmt(e.ci_low) << "," << fmt(e.ci_high) << "] target=" << fmt(t.plr) << "+-" << fmt(t.tol);
    c.expect(std::abs(e.plr - t.plr) <= t.tol, std::string(to_string(t.decoder)) + " outside tolerance");
    if (t.decoder != DecoderKind::pvtc) {
      const auto nearest = plr_point(t.load, t.decoder, frames, PayloadRounding::nearest);
      const auto users = std::llround(t.load * 200 / 0.2);
      const double m = std::round(std::pow(static_cast<double>(users), 1 / 0.9));
      if (payload_length_for(2.0, m, PayloadRounding::nearest) != e.n0) {
        const auto info = sweep(nearest, options);
        if (info.estimates.size() == 1) {
          c.detail << " (info n0=round:" << info.estimates[0].n0 << " plr=" << fmt(info.estimates[0].plr) << ")";
        }
      }
    }
  }
}

void criterion_8(Check& c)
{
  const std::vector<double> loads = {1.0, 2.0, 3.0};
  const std::uint64_t total = 10000;
  std::uint64_t subset_violations = 0;
  std::uint64_t soundness_violations = 0;
  std::uint64_t frames_run = 0;
  for (std::size_t li = 0; li < loads.size(); ++li) {
    const double load = loads[li];
    const std::size_t users = static_cast<std::size_t>(std::llround(load * 200 / 0.2));
    const auto m = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(users), 1 / 0.9)));
    const int n0 = payload_length_for(2.0, static_cast<double>(m));
    const auto scenario = make_scenario(ScenarioConfig{users, 0.2, 200}, gen_iid_codebook(m, n0, 0.5, 7 + li),
                                        DegreeDistribution::regular(2), 8 + li);
    const std::uint64_t frames = total / loads.size() + (li < total % loads.size() ? 1 : 0);
    for (std::uint64_t f = 0; f < frames; ++f) {
      std::size_t active = 0;
      const auto frame = simulate_frame(scenario, f, 99 + li, active);
      if (!frame) {
        continue;
      }
      ++frames_run;
      std::vector<std::vector<Index>> decoded;
      for (auto kind : {DecoderKind::singleton, DecoderKind::ed_mpr, DecoderKind::ed_fg}) {
        decoded.push_back(decode(kind, *frame, *scenario.graph, *scenario.book).decoded);
        soundness_violations += std::ranges::includes(frame->truth, decoded.back()) ? 0 : 1;
      }
      subset_violations += std::ranges::includes(decoded[1], decoded[0]) ? 0 : 1;
      subset_violations += std::ranges::includes(decoded[2], decoded[1]) ? 0 : 1;
    }
  }
  c.detail << " frames=" << frames_run << " dominance_violations=" << subset_violations
           << " soundness_violations=" << soundness_violations;
  c.expect(frames_run == total, "overloaded frames");
  c.expect(subset_violations == 0, "dominance");
  c.expect(soundness_violations == 0, "soundness");
}

void criterion_9(Check& c)
{
  std::mt19937_64 rng(909);
  int resolved = 0;
  int wrong = 0;
  int missing = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 12)(rng));
    const int shortest = std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(m)))));
    const int n0 = std::uniform_int_distribution<int>(shortest, 10)(rng);
    const auto book = gen_iid_codebook(m, n0, 0.5, rng());
    const FrameGraph graph(m, DegreeDistribution::regular(1), 1, rng());
    std::vector<Index> all(m);
    for (Index i = 0; i < m; ++i) {
      all[i] = i;
    }
    std::shuffle(all.begin(), all.end(), rng);
    const auto k = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, static_cast<int>(m))(rng));
    std::vector<Index> sent(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    std::ranges::sort(sent);
    const auto frame = transmit(book, graph, sent);
    DecoderState state(frame, graph);
    const auto result = resolve_slot(state, 0, book);
    if (result) {
      ++resolved;
      auto got = *result;
      std::ranges::sort(got);
      wrong += got == sent ? 0 : 1;
    }
    const auto candidates = graph.candidates(0);
    const auto subsets = oracle_slot_decode(frame.row(0), static_cast<int>(k), candidates, book);
    bool listed = false;
    for (auto s : subsets) {
      std::ranges::sort(s);
      listed = listed || s == sent;
    }
    missing += listed ? 0 : 1;
  }
  c.detail << " slots=1000 resolved=" << resolved << " wrong=" << wrong << " oracle_missing=" << missing;
  c.expect(wrong == 0, "resolution differs from truth");
  c.expect(missing == 0, "oracle misses truth");
}

void criterion_10(Check& c)
{
  const auto book = Codebook::from_strings({"11001", "10001", "11100", "11011", "10111", "11010"});
  const FrameGraph graph(6, DegreeDistribution::regular(1), 1, 0);
  const auto frame = transmit(book, graph, std::vector<Index>{0, 1, 3});
  const std::vector<std::int32_t> expected_y = {3, 2, 0, 1, 3};
  c.expect(std::ranges::equal(frame.row(0), expected_y), "channel output");
  std::vector<Index> all = {0, 1, 2, 3, 4, 5};
  const auto survivors = discard_pass(frame.row(0), 3, all, book);
  c.expect(survivors == std::vector<Index>{0, 1, 3}, "survivors");
  DecoderState state(frame, graph);
  const auto result = resolve_slot(state, 0, book);
  c.expect(result && *result == std::vector<Index>{0, 1, 3}, "resolution");
  c.detail << " survivors=";
  for (auto s : survivors) {
    c.detail << "c" << s + 1;
  }
}

}  // namespace

int main(int argc, char** argv)
{
  const std::vector<std::function<void(Check&)>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                             criterion_5, criterion_6, criterion_7, criterion_8,
                                                             criterion_9, criterion_10};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.insert(std::atoi(argv[i]));
  }
  int failures = 0;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
    if (!selected.empty() && selected.count(i) == 0) {
      continue;
    }
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[static_cast<std::size_t>(i - 1)](check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s (%.1fs)%s\n", i, check.ok ? "PASS" : "FAIL", seconds, check.detail.str().c_str());
    std::fflush(stdout);
    failures += check.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
