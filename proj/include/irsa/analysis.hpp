#pragma once

#include "irsa/degree_distribution.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace irsa {

/// Joint scaling limit: M = D K^(1/delta), n0 = beta log2 M, G = mu K / N fixed.
struct AsymptoticRegime {
  double load = 1.0;        // G
  double offset = 1.0;      // D
  double beta = 1.0;        // inverse per-slot rate, >= 1
  double delta = 0.5;       // scaling exponent in (0, 1)
  double activation = 1.0;  // mu, enters the boundary case of the MPR limit

  void validate() const;

  /// -log2(1 - 2^(-(1 - delta)/beta)): slot degrees below it resolve with
  /// probability one in the limit, degrees above it with probability zero.
  double critical_degree() const;
};

/// Resolution probabilities pi_1..pi_T of a per-slot MPR decoder.
struct MprProfile {
  std::vector<double> resolve;  // resolve[u - 1] = pi_u

  /// pi_u = 1 for u <= capability, 0 otherwise.
  static MprProfile up_to(int capability);

  /// Largest u with pi_u > 0, 0 for the all-zero profile.
  int capability() const noexcept;
};

/// Joint pmf of (A_0, A_U), the number of payload positions where a
/// degree-U slot outputs 0 and U respectively.
class PmfTable
{
public:
  PmfTable(int n0, std::map<std::pair<int, int>, double> entries) : n0_(n0), entries_(std::move(entries)) {}

  int payload_length() const noexcept { return n0_; }
  const std::map<std::pair<int, int>, double>& entries() const noexcept { return entries_; }
  double at(int a0, int au) const;
  double total() const;

private:
  int n0_;
  std::map<std::pair<int, int>, double> entries_;
};

PmfTable joint_pmf_a0_au(int n0, double nu, int degree);

/// Probability that the discarding decoder resolves a degree-U slot when
/// the M - U other codewords are independent and each joins the slot with
/// probability Lambda'(1)/N. M may be fractional in scaling sweeps.
double pi_u_exact(int degree, int n0, double nu, double codebook_size, double avg_degree_over_slots);

/// nu = 0.5 closed form with A ~ Bino(n0, 2^(1-U)).
double pi_u_half(int degree, int n0, double codebook_size, double avg_degree_over_slots);

/// (1 - (Lambda'(1)/N) (1 - 2^-U)^n0)^(M - U), a lower bound on pi_u_half.
double pi_u_lower_bound(int degree, int n0, double codebook_size, double avg_degree_over_slots);

struct Sandwich {
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
};

/// Exponential bounds around pi_u_lower_bound obtained from
/// z/(1+z) <= ln(1+z) <= z. Throws InternalInconsistency if the ordering fails.
Sandwich sandwich_check(int degree, int n0, double codebook_size, double avg_degree_over_slots);

/// Limit of the lower bound in the asymptotic regime: 1 below the critical
/// degree, 0 above it, and (1-2^-U)^(beta log2 D) / exp(D G Lambda'(1) / mu)
/// when U equals the critical degree (to within 1e-12).
double pi_u_asymptotic(int degree, const AsymptoticRegime& regime, double avg_degree);

/// Returned by t_ed_mpr when the critical degree diverges (delta -> 1).
inline constexpr int kUnboundedCapability = 1024;

/// floor of the critical degree, capped at kUnboundedCapability.
int t_ed_mpr(double beta, double delta);

enum class RegimeOrder { ed_mpr_greater, pvtc_greater, equal };

const char* to_string(RegimeOrder order) noexcept;

/// delta curves separating the (beta, delta) regions for T_PVTC = floor(beta).
struct RegionBoundary {
  double lower = 0.0;  // below: T_PVTC resolves more
  double upper = 0.0;  // above: ED-MPR resolves more
};

RegionBoundary region_boundaries(double beta);

RegimeOrder compare_regimes(double beta, double delta);

/// Right-hand side of the erasure recursion,
/// lambda(1 - e^(-c p) sum_{u<T} pi_{u+1} (c p)^u / u!) with c = G Lambda'(1).
double de_update(const EdgePolynomial& edge, double avg_degree, const MprProfile& profile, double load, double p);

/// p_0, p_1, ..., p_iterations.
std::vector<double> de_evolve(const DegreeDistribution& lambda, const MprProfile& profile, double load, double p0,
                              int iterations);

using ProfileAtLoad = std::function<MprProfile(double load)>;

/// True when p > de_update(p) on the evaluation grid: 2000 geometric points
/// in [1e-7, 1], refined tenfold next to any point with margin below 1e-4.
bool de_converges(const DegreeDistribution& lambda, const MprProfile& profile, double load);

/// Largest G passing de_converges, by bisection to within `tol`. Returns 0
/// when the test already fails at G = tol.
double de_threshold(const DegreeDistribution& lambda, const MprProfile& profile, double tol = 1e-4);
double de_threshold(const DegreeDistribution& lambda, const ProfileAtLoad& profile, double tol = 1e-4);

/// Limiting ED-MPR profile pi_1..pi_T at the regime's load.
MprProfile ed_mpr_profile(const AsymptoticRegime& regime, double avg_degree);

/// Lower bound on the ED-MPR decoding threshold; the regime's load is ignored.
double threshold_ed_mpr(const DegreeDistribution& lambda, const AsymptoticRegime& regime, double tol = 1e-4);

/// (mu K / N) log2(M / K) / (1 + n0).
double sum_rate(double activation, double users, double slots, double codebook_size, int n0);

/// (1 - delta) / beta * G.
double asymptotic_sum_rate(const AsymptoticRegime& regime);

enum class PayloadRounding { up, nearest };

/// n0 for a codebook of size M at inverse rate beta.
int payload_length_for(double beta, double codebook_size, PayloadRounding rounding = PayloadRounding::up);

/// A finite-K point of the scaling regime.
struct ScalingPoint {
  double users = 0.0;          // K
  double slots = 0.0;          // N
  double codebook_size = 0.0;  // M = D K^(1/delta)
  int n0 = 0;
};

ScalingPoint scaling_point(double users, double users_per_slot, double offset, double beta, double delta,
                           PayloadRounding rounding = PayloadRounding::up);

}  // namespace irsa
