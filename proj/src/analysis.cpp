#include "irsa/analysis.hpp"

#include "irsa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace irsa {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kBoundaryTolerance = 1e-12;

double log_choose(int n, int k)
{
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Accumulates log(sum exp(x_i)) without overflow.
class LogSum
{
public:
  void add(double x)
  {
    if (x == kNegInf) {
      return;
    }
    terms_.push_back(x);
    max_ = std::max(max_, x);
  }

  double value() const
  {
    if (terms_.empty()) {
      return kNegInf;
    }
    double s = 0.0;
    for (double t : terms_) {
      s += std::exp(t - max_);
    }
    return max_ + std::log(s);
  }

private:
  std::vector<double> terms_;
  double max_ = kNegInf;
};

void check_slot_inputs(int degree, int n0, double codebook_size, double a)
{
  if (degree < 1) {
    throw InvalidParameters("slot degree must be at least 1");
  }
  if (n0 < 0) {
    throw InvalidParameters("payload length must be nonnegative");
  }
  if (codebook_size < degree) {
    throw InvalidParameters("codebook smaller than the slot degree");
  }
  if (!(a > 0.0 && a < 1.0)) {
    throw InvalidParameters("Lambda'(1)/N must lie in (0, 1)");
  }
}

// (M - U) * log1p(-a * x)
double competitor_log_term(double others, double a, double x)
{
  return others * std::log1p(-a * x);
}

}  // namespace

void AsymptoticRegime::validate() const
{
  if (!(beta >= 1.0)) {
    throw InvalidParameters("beta must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidParameters("delta must lie in (0, 1)");
  }
  if (!(offset > 0.0)) {
    throw InvalidParameters("D must be positive");
  }
  if (!(load > 0.0)) {
    throw InvalidParameters("G must be positive");
  }
  if (!(activation > 0.0 && activation <= 1.0)) {
    throw InvalidParameters("mu must lie in (0, 1]");
  }
}

double AsymptoticRegime::critical_degree() const
{
  // 1 - 2^-x evaluated as -expm1(-x ln 2) keeps precision for small x.
  const double x = (1.0 - delta) / beta;
  return -std::log2(-std::expm1(-x * std::numbers::ln2));
}

MprProfile MprProfile::up_to(int capability)
{
  return MprProfile{std::vector<double>(static_cast<std::size_t>(std::max(capability, 0)), 1.0)};
}

int MprProfile::capability() const noexcept
{
  for (std::size_t u = resolve.size(); u > 0; --u) {
    if (resolve[u - 1] > 0.0) {
      return static_cast<int>(u);
    }
  }
  return 0;
}

double PmfTable::at(int a0, int au) const
{
  const auto it = entries_.find({a0, au});
  return it == entries_.end() ? 0.0 : it->second;
}

double PmfTable::total() const
{
  double sum = 0.0;
  for (const auto& [key, p] : entries_) {
    sum += p;
  }
  return sum;
}

namespace {

// Log-probabilities of (A_0, A_U) cells, -inf entries skipped.
template <typename Visit>
void visit_log_pmf(int n0, double nu, int degree, Visit&& visit)
{
  const double log_zero_cell = degree * std::log1p(-nu);
  const double log_one_cell = degree * std::log(nu);
  const double mixed = degree == 1 ? 0.0 : 1.0 - std::pow(1.0 - nu, degree) - std::pow(nu, degree);
  const double log_mixed = mixed > 0.0 ? std::log(mixed) : kNegInf;
  const double log_n_fact = std::lgamma(n0 + 1.0);
  for (int a0 = 0; a0 <= n0; ++a0) {
    for (int au = 0; a0 + au <= n0; ++au) {
      const int rest = n0 - a0 - au;
      if (rest > 0 && log_mixed == kNegInf) {
        continue;
      }
      double lp = log_n_fact - std::lgamma(a0 + 1.0) - std::lgamma(au + 1.0) - std::lgamma(rest + 1.0);
      if (a0 > 0) {
        lp += a0 * log_zero_cell;
      }
      if (au > 0) {
        lp += au * log_one_cell;
      }
      if (rest > 0) {
        lp += rest * log_mixed;
      }
      visit(a0, au, lp);
    }
  }
}

}  // namespace

PmfTable joint_pmf_a0_au(int n0, double nu, int degree)
{
  if (degree < 1) {
    throw InvalidParameters("slot degree must be at least 1");
  }
  if (!(nu > 0.0 && nu < 1.0)) {
    throw InvalidParameters("Bernoulli parameter must lie in (0, 1)");
  }
  std::map<std::pair<int, int>, double> entries;
  visit_log_pmf(n0, nu, degree, [&](int a0, int au, double lp) { entries[{a0, au}] = std::exp(lp); });
  return PmfTable(n0, std::move(entries));
}

double pi_u_exact(int degree, int n0, double nu, double codebook_size, double avg_degree_over_slots)
{
  check_slot_inputs(degree, n0, codebook_size, avg_degree_over_slots);
  if (!(nu > 0.0 && nu < 1.0)) {
    throw InvalidParameters("Bernoulli parameter must lie in (0, 1)");
  }
  const double others = codebook_size - degree;
  if (others == 0.0) {
    return 1.0;
  }
  LogSum sum;
  LogSum norm;
  visit_log_pmf(n0, nu, degree, [&](int a0, int au, double lp) {
    const double survive = std::pow(nu, au) * std::pow(1.0 - nu, a0);
    sum.add(lp + competitor_log_term(others, avg_degree_over_slots, survive));
    norm.add(lp);
  });
  return std::min(1.0, std::exp(sum.value() - norm.value()));
}

double pi_u_half(int degree, int n0, double codebook_size, double avg_degree_over_slots)
{
  check_slot_inputs(degree, n0, codebook_size, avg_degree_over_slots);
  const double others = codebook_size - degree;
  if (others == 0.0) {
    return 1.0;
  }
  const double p = std::ldexp(1.0, 1 - degree);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  LogSum sum;
  LogSum norm;
  for (int a = 0; a <= n0; ++a) {
    if (a < n0 && p == 1.0) {
      continue;
    }
    double lp = log_choose(n0, a);
    if (a > 0) {
      lp += a * log_p;
    }
    if (a < n0) {
      lp += (n0 - a) * log_q;
    }
    sum.add(lp + competitor_log_term(others, avg_degree_over_slots, std::ldexp(1.0, -a)));
    norm.add(lp);
  }
  return std::min(1.0, std::exp(sum.value() - norm.value()));
}

double pi_u_lower_bound(int degree, int n0, double codebook_size, double avg_degree_over_slots)
{
  check_slot_inputs(degree, n0, codebook_size, avg_degree_over_slots);
  const double others = codebook_size - degree;
  if (others == 0.0) {
    return 1.0;
  }
  const double x = std::exp(n0 * std::log1p(-std::ldexp(1.0, -degree)));
  return std::exp(competitor_log_term(others, avg_degree_over_slots, x));
}

Sandwich sandwich_check(int degree, int n0, double codebook_size, double avg_degree_over_slots)
{
  Sandwich out;
  out.value = pi_u_lower_bound(degree, n0, codebook_size, avg_degree_over_slots);
  const double others = codebook_size - degree;
  const double z = avg_degree_over_slots * std::exp(n0 * std::log1p(-std::ldexp(1.0, -degree)));
  out.lower = std::exp(-others * z / (1.0 - z));
  out.upper = std::exp(-others * z);
  const double slack = 1e-12 * out.upper;
  if (out.lower > out.value + slack || out.value > out.upper + slack) {
    throw InternalInconsistency("exponential sandwich ordering violated");
  }
  return out;
}

double pi_u_asymptotic(int degree, const AsymptoticRegime& regime, double avg_degree)
{
  regime.validate();
  const double critical = regime.critical_degree();
  if (std::abs(degree - critical) <= kBoundaryTolerance) {
    const double log_num = regime.beta * std::log2(regime.offset) * std::log1p(-std::ldexp(1.0, -degree));
    return std::exp(log_num - regime.offset * regime.load * avg_degree / regime.activation);
  }
  return degree < critical ? 1.0 : 0.0;
}

int t_ed_mpr(double beta, double delta)
{
  AsymptoticRegime regime;
  regime.beta = beta;
  regime.delta = delta;
  if (!(beta >= 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidParameters("t_ed_mpr needs beta >= 1 and delta in (0, 1)");
  }
  const double critical = regime.critical_degree();
  if (!std::isfinite(critical) || critical >= kUnboundedCapability) {
    return kUnboundedCapability;
  }
  return static_cast<int>(std::floor(critical + kBoundaryTolerance));
}

const char* to_string(RegimeOrder order) noexcept
{
  switch (order) {
    case RegimeOrder::ed_mpr_greater: return "ED_MPR_GREATER";
    case RegimeOrder::pvtc_greater: return "PVTC_GREATER";
    case RegimeOrder::equal: return "EQUAL";
  }
  return "UNKNOWN";
}

RegionBoundary region_boundaries(double beta)
{
  if (!(beta >= 1.0)) {
    throw InvalidParameters("beta must be >= 1");
  }
  const double t = std::floor(beta);
  return RegionBoundary{1.0 + beta * std::log2(1.0 - std::pow(2.0, -t)),
                        1.0 + beta * std::log2(1.0 - std::pow(2.0, -t - 1.0))};
}

RegimeOrder compare_regimes(double beta, double delta)
{
  const auto curves = region_boundaries(beta);
  if (delta > curves.upper) {
    return RegimeOrder::ed_mpr_greater;
  }
  if (delta < curves.lower) {
    return RegimeOrder::pvtc_greater;
  }
  return RegimeOrder::equal;
}

double de_update(const EdgePolynomial& edge, double avg_degree, const MprProfile& profile, double load, double p)
{
  const double c = load * avg_degree * p;
  double term = 1.0;  // c^u / u!
  double sum = 0.0;
  const int capability = profile.capability();
  for (int u = 0; u < capability; ++u) {
    if (u > 0) {
      term *= c / u;
    }
    sum += profile.resolve[static_cast<std::size_t>(u)] * term;
  }
  return edge.evaluate(1.0 - std::exp(-c) * sum);
}

std::vector<double> de_evolve(const DegreeDistribution& lambda, const MprProfile& profile, double load, double p0,
                              int iterations)
{
  if (!(p0 > 0.0 && p0 <= 1.0)) {
    throw InvalidParameters("initial erasure probability must lie in (0, 1]");
  }
  const auto edge = edge_perspective(lambda);
  const double avg = lambda.average_degree();
  std::vector<double> p{p0};
  p.reserve(static_cast<std::size_t>(iterations) + 1);
  for (int i = 0; i < iterations; ++i) {
    p.push_back(de_update(edge, avg, profile, load, p.back()));
  }
  return p;
}

namespace {

constexpr int kGridPoints = 2000;
constexpr double kGridLow = 1e-7;
constexpr double kNearMargin = 1e-4;
constexpr int kRefine = 10;

const std::vector<double>& evaluation_grid()
{
  static const std::vector<double> grid = [] {
    std::vector<double> g(kGridPoints);
    const double ratio = std::log(1.0 / kGridLow) / (kGridPoints - 1);
    for (int i = 0; i < kGridPoints; ++i) {
      g[static_cast<std::size_t>(i)] = kGridLow * std::exp(ratio * i);
    }
    g.back() = 1.0;
    return g;
  }();
  return grid;
}

bool converges(const EdgePolynomial& edge, double avg, const MprProfile& profile, double load)
{
  const auto& grid = evaluation_grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = grid[i];
    const double margin = p - de_update(edge, avg, profile, load, p);
    if (margin <= 0.0) {
      return false;
    }
    if (margin < kNearMargin) {
      const double lo = i > 0 ? grid[i - 1] : p;
      const double hi = i + 1 < grid.size() ? grid[i + 1] : p;
      for (int r = 1; r < 2 * kRefine; ++r) {
        const double q = lo + (hi - lo) * r / (2.0 * kRefine);
        if (q > 0.0 && q <= 1.0 && q - de_update(edge, avg, profile, load, q) <= 0.0) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

bool de_converges(const DegreeDistribution& lambda, const MprProfile& profile, double load)
{
  return converges(edge_perspective(lambda), lambda.average_degree(), profile, load);
}

double de_threshold(const DegreeDistribution& lambda, const ProfileAtLoad& profile, double tol)
{
  if (!(tol > 0.0)) {
    throw InvalidParameters("threshold tolerance must be positive");
  }
  const auto edge = edge_perspective(lambda);
  const double avg = lambda.average_degree();
  auto ok = [&](double load) { return converges(edge, avg, profile(load), load); };

  if (!ok(tol)) {
    return 0.0;
  }
  double lo = tol;
  double hi = std::max(1.0, 2.0 * tol);
  constexpr double kLoadCap = 1e4;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kLoadCap) {
      return lo;
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

double de_threshold(const DegreeDistribution& lambda, const MprProfile& profile, double tol)
{
  return de_threshold(lambda, [&profile](double) { return profile; }, tol);
}

MprProfile ed_mpr_profile(const AsymptoticRegime& regime, double avg_degree)
{
  regime.validate();
  const int t = t_ed_mpr(regime.beta, regime.delta);
  MprProfile profile;
  profile.resolve.reserve(static_cast<std::size_t>(t));
  for (int u = 1; u <= t; ++u) {
    profile.resolve.push_back(pi_u_asymptotic(u, regime, avg_degree));
  }
  return profile;
}

double threshold_ed_mpr(const DegreeDistribution& lambda, const AsymptoticRegime& regime, double tol)
{
  const double avg = lambda.average_degree();
  return de_threshold(
      lambda,
      [&](double load) {
        AsymptoticRegime at = regime;
        at.load = load;
        return ed_mpr_profile(at, avg);
      },
      tol);
}

double sum_rate(double activation, double users, double slots, double codebook_size, int n0)
{
  if (!(users > 0.0 && slots > 0.0) || codebook_size < users || n0 < 0) {
    throw InvalidParameters("sum_rate needs K, N > 0, M >= K and n0 >= 0");
  }
  return activation * users / slots * std::log2(codebook_size / users) / (1.0 + n0);
}

double asymptotic_sum_rate(const AsymptoticRegime& regime)
{
  return (1.0 - regime.delta) / regime.beta * regime.load;
}

int payload_length_for(double beta, double codebook_size, PayloadRounding rounding)
{
  const double exact = beta * std::log2(codebook_size);
  // Values within 1e-9 of an integer are treated as that integer.
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) < 1e-9 || rounding == PayloadRounding::nearest) {
    return static_cast<int>(nearest);
  }
  return static_cast<int>(std::ceil(exact));
}

ScalingPoint scaling_point(double users, double users_per_slot, double offset, double beta, double delta,
                           PayloadRounding rounding)
{
  ScalingPoint point;
  point.users = users;
  point.slots = users / users_per_slot;
  point.codebook_size = offset * std::pow(users, 1.0 / delta);
  point.n0 = payload_length_for(beta, point.codebook_size, rounding);
  return point;
}

}  // namespace irsa
