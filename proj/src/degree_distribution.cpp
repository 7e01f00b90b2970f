#include "irsa/degree_distribution.hpp"

#include "irsa/errors.hpp"
#include "irsa/rng.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace irsa {

DegreeDistribution::DegreeDistribution(std::map<int, double> coeffs) : coeffs_(std::move(coeffs))
{
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0.0; });
  if (coeffs_.empty()) {
    throw InvalidParameters("degree distribution has empty support");
  }
  double total = 0.0;
  for (const auto& [degree, weight] : coeffs_) {
    if (degree < 1) {
      throw InvalidParameters("degree distribution support must be >= 1");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw InvalidParameters("degree distribution coefficients must be nonnegative and finite");
    }
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "degree distribution sums to " << total << ", expected 1";
    throw InvalidParameters(msg.str());
  }
  double acc = 0.0;
  for (const auto& [degree, weight] : coeffs_) {
    acc += weight;
    cumulative_.emplace_back(degree, acc);
  }
  cumulative_.back().second = 1.0;
}

DegreeDistribution DegreeDistribution::regular(int degree)
{
  return DegreeDistribution({{degree, 1.0}});
}

namespace {

std::string strip(std::string_view text)
{
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '*') {
      out.push_back(c);
    }
  }
  return out;
}

double parse_number(const std::string& s, std::string_view whole)
{
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) {
    throw InvalidParameters("cannot parse degree distribution '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

DegreeDistribution DegreeDistribution::parse(std::string_view text)
{
  const std::string body = strip(text);
  if (body.empty()) {
    throw InvalidParameters("empty degree distribution");
  }
  std::map<int, double> coeffs;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t next = body.find('+', pos + 1);
    // A '+' directly after 'e' belongs to an exponent such as 1e+0.
    while (next != std::string::npos && (body[next - 1] == 'e' || body[next - 1] == 'E')) {
      next = body.find('+', next + 1);
    }
    std::string term = body.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!term.empty() && term.front() == '+') {
      term.erase(0, 1);
    }
    const std::size_t xpos = term.find('x');
    if (xpos == std::string::npos) {
      throw InvalidParameters("degree distribution term without x: '" + term + "'");
    }
    const std::string coef_text = term.substr(0, xpos);
    const double coef = coef_text.empty() ? 1.0 : parse_number(coef_text, text);
    int degree = 1;
    const std::string rest = term.substr(xpos + 1);
    if (!rest.empty()) {
      if (rest.front() != '^') {
        throw InvalidParameters("cannot parse degree distribution term '" + term + "'");
      }
      const double d = parse_number(rest.substr(1), text);
      if (d != std::floor(d)) {
        throw InvalidParameters("non-integer degree in '" + term + "'");
      }
      degree = static_cast<int>(d);
    }
    coeffs[degree] += coef;
    if (next == std::string::npos) {
      break;
    }
    pos = next;
  }
  return DegreeDistribution(std::move(coeffs));
}

double DegreeDistribution::average_degree() const noexcept
{
  double sum = 0.0;
  for (const auto& [degree, weight] : coeffs_) {
    sum += degree * weight;
  }
  return sum;
}

double DegreeDistribution::evaluate(double x) const noexcept
{
  double sum = 0.0;
  for (const auto& [degree, weight] : coeffs_) {
    sum += weight * std::pow(x, degree);
  }
  return sum;
}

int DegreeDistribution::sample(Stream& rng) const noexcept
{
  const double u = rng.uniform();
  for (const auto& [degree, acc] : cumulative_) {
    if (u < acc) {
      return degree;
    }
  }
  return cumulative_.back().first;
}

std::string DegreeDistribution::to_string() const
{
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (const auto& [degree, weight] : coeffs_) {
    if (!first) {
      out << '+';
    }
    first = false;
    if (weight != 1.0) {
      out << weight;
    }
    out << "x^" << degree;
  }
  return out.str();
}

double EdgePolynomial::evaluate(double x) const noexcept
{
  double sum = 0.0;
  for (const auto& [degree, weight] : coeffs_) {
    sum += weight * std::pow(x, degree - 1);
  }
  return sum;
}

EdgePolynomial edge_perspective(const DegreeDistribution& lambda)
{
  const double avg = lambda.average_degree();
  std::map<int, double> coeffs;
  for (const auto& [degree, weight] : lambda.coeffs()) {
    coeffs[degree] = degree * weight / avg;
  }
  return EdgePolynomial(std::move(coeffs));
}

}  // namespace irsa
