#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace irsa {

class Stream;

/// Replica-count distribution Lambda(x) = sum_L Lambda_L x^L.
class DegreeDistribution
{
public:
  /// Validates L >= 1, Lambda_L >= 0 and normalization to 1e-12.
  explicit DegreeDistribution(std::map<int, double> coeffs);

  /// Lambda(x) = x^L.
  static DegreeDistribution regular(int degree);

  /// Parses polynomial text such as "x^2", "0.5x^2+0.5x^3" or "0.25*x + 0.75*x^4".
  static DegreeDistribution parse(std::string_view text);

  const std::map<int, double>& coeffs() const noexcept { return coeffs_; }
  int max_degree() const noexcept { return coeffs_.rbegin()->first; }

  /// Lambda'(1), the average number of replicas.
  double average_degree() const noexcept;

  double evaluate(double x) const noexcept;

  /// Draws L using one uniform variate from the stream.
  int sample(Stream& rng) const noexcept;

  std::string to_string() const;

private:
  std::map<int, double> coeffs_;
  std::vector<std::pair<int, double>> cumulative_;
};

/// Edge-perspective distribution lambda(x) = sum_L lambda_L x^(L-1) with
/// lambda_L = L Lambda_L / Lambda'(1).
class EdgePolynomial
{
public:
  explicit EdgePolynomial(std::map<int, double> coeffs) : coeffs_(std::move(coeffs)) {}

  /// Keyed by the node degree L; the monomial is x^(L-1).
  const std::map<int, double>& coeffs() const noexcept { return coeffs_; }
  double evaluate(double x) const noexcept;

private:
  std::map<int, double> coeffs_;
};

EdgePolynomial edge_perspective(const DegreeDistribution& lambda);

}  // namespace irsa
