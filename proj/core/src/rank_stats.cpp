#include "narrametric/rank_stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "narrametric/error.hpp"

namespace narrametric {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    const int n = static_cast<int>(N);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2.0 * j - 1) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[static_cast<std::size_t>(i)] = x;
      weights[static_cast<std::size_t>(i)] = 2.0 / ((1 - x * x) * dp * dp);
    }
  }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0;
    for (std::size_t i = 0; i < N; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

const GaussLegendre<10>& quadrature() {
  static const GaussLegendre<10> rule;
  return rule;
}

template <typename F>
double adaptive(F& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = quadrature().integrate(f, a, mid);
  const double right = quadrature().integrate(f, mid, b);
  if (depth <= 0 || std::abs(left + right - whole) <= tol) return left + right;
  return adaptive(f, a, mid, left, 0.5 * tol, depth - 1) + adaptive(f, mid, b, right, 0.5 * tol, depth - 1);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2 * kPi); }

void require_shape(const RankTable& table, std::size_t min_methods, const char* message) {
  if (table.methods.size() < min_methods) throw InputError(message);
  if (table.ranks.size() < 2) throw InputError("needs at least two datasets");
}

}  // namespace

std::vector<double> rank_row(std::span<const std::optional<double>> row, Direction direction) {
  std::vector<std::size_t> defined;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j]) defined.push_back(j);
  }
  if (defined.empty()) throw InputError("every value in the row is missing");
  std::stable_sort(defined.begin(), defined.end(), [&](std::size_t a, std::size_t b) {
    return direction == Direction::kLowerIsBetter ? *row[a] < *row[b] : *row[a] > *row[b];
  });

  const double k = static_cast<double>(row.size());
  const double nd = static_cast<double>(defined.size());
  std::vector<double> ranks(row.size(), (nd + 1 + k) / 2);
  std::size_t i = 0;
  while (i < defined.size()) {
    std::size_t j = i;
    while (j + 1 < defined.size() && *row[defined[j + 1]] == *row[defined[i]]) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2;
    for (std::size_t t = i; t <= j; ++t) ranks[defined[t]] = mid_rank;
    i = j + 1;
  }
  return ranks;
}

RankTable rank_with_missing(const BenchmarkMatrix& matrix) {
  if (matrix.methods.size() < 2) throw InputError("ranking needs at least two methods");
  if (matrix.datasets.empty() || matrix.values.size() != matrix.datasets.size()) {
    throw InputError("ranking needs one value row per dataset");
  }
  RankTable table;
  table.datasets = matrix.datasets;
  table.methods = matrix.methods;
  table.average_ranks.assign(matrix.methods.size(), 0.0);
  for (std::size_t d = 0; d < matrix.values.size(); ++d) {
    const auto& row = matrix.values[d];
    if (row.size() != matrix.methods.size()) throw InputError("ragged benchmark matrix");
    try {
      table.ranks.push_back(rank_row(row, matrix.direction));
    } catch (const InputError& e) {
      throw InputError(matrix.metric + " on " + matrix.datasets[d] + ": " + e.what());
    }
    for (std::size_t j = 0; j < row.size(); ++j) table.average_ranks[j] += table.ranks.back()[j];
  }
  for (double& r : table.average_ranks) r /= static_cast<double>(matrix.values.size());
  return table;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0) || x < 0) throw InputError("regularized gamma needs a > 0 and x >= 0");
  if (x == 0) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1) {
    // Series for P(a, x).
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return std::clamp(1.0 - sum * std::exp(log_prefix), 0.0, 1.0);
  }
  // Continued fraction for Q(a, x), modified Lentz.
  constexpr double kTiny = 1e-300;
  double b = x + 1 - a;
  double c = 1 / kTiny;
  double d = 1 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1) < 1e-16) break;
  }
  return std::clamp(std::exp(log_prefix) * h, 0.0, 1.0);
}

double chi_square_sf(double x, int df) {
  if (df < 1) throw InputError("chi-square needs df >= 1");
  if (x <= 0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

FriedmanResult friedman(const RankTable& table) {
  require_shape(table, 3, "use sign test");
  const double k = static_cast<double>(table.methods.size());
  const double n = static_cast<double>(table.ranks.size());
  double sum = 0;
  for (double r : table.average_ranks) sum += (r - (k + 1) / 2) * (r - (k + 1) / 2);
  FriedmanResult result;
  result.chi2 = 12 * n / (k * (k + 1)) * sum;
  result.df = static_cast<int>(table.methods.size()) - 1;
  result.p_value = chi_square_sf(result.chi2, result.df);
  return result;
}

double studentized_range_sf(double q, int k) {
  if (k < 2) throw InputError("studentized range needs k >= 2");
  if (!(q > 0)) return 1.0;
  auto integrand = [q, k](double z) {
    const double width = normal_cdf(z) - normal_cdf(z - q);
    return normal_pdf(z) * std::pow(width, k - 1);
  };
  const double lo = -12, hi = 12;
  const double whole = quadrature().integrate(integrand, lo, hi);
  const double integral = adaptive(integrand, lo, hi, whole, 1e-9, 40);
  return std::clamp(1.0 - k * integral, 0.0, 1.0);
}

double studentized_range_quantile(double alpha, int k) {
  if (!(alpha > 0 && alpha < 1)) throw InputError("alpha must lie in (0, 1)");
  double lo = 0, hi = 1;
  while (studentized_range_sf(hi, k) > alpha) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (studentized_range_sf(mid, k) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

NemenyiResult nemenyi(const RankTable& table) {
  require_shape(table, 2, "post-hoc comparison needs at least two methods");
  const std::size_t k = table.methods.size();
  const double kd = static_cast<double>(k);
  const double se = std::sqrt(kd * (kd + 1) / (6 * static_cast<double>(table.ranks.size())));
  NemenyiResult result;
  result.methods = table.methods;
  result.statistic.assign(k, std::vector<double>(k, 0.0));
  result.p_values.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double d = std::abs(table.average_ranks[i] - table.average_ranks[j]) / se;
      const double p = std::clamp(studentized_range_sf(d * std::sqrt(2.0), static_cast<int>(k)), 0.0, 1.0);
      result.statistic[i][j] = result.statistic[j][i] = d;
      result.p_values[i][j] = result.p_values[j][i] = p;
    }
  }
  return result;
}

double critical_difference(int k, int n, double alpha) {
  if (k < 2 || n < 1) throw InputError("critical difference needs k >= 2 and N >= 1");
  const double q = studentized_range_quantile(alpha, k) / std::sqrt(2.0);
  return q * std::sqrt(k * (k + 1.0) / (6.0 * n));
}

}  // namespace narrametric
