#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narrametric/narrativity.hpp"

namespace narrametric {

struct BenchmarkMatrix {
  std::string metric;
  Direction direction = Direction::kHigherIsBetter;
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::vector<std::vector<std::optional<double>>> values;  // [dataset][method]
};

struct RankTable {
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> ranks;  // [dataset][method], 1 = best
  std::vector<double> average_ranks;
};

// Ranks one row: defined values 1..d by direction with mid-ranks for ties;
// missing values share the mid-rank of the remaining last positions.
// Throws InputError when every value is missing.
std::vector<double> rank_row(std::span<const std::optional<double>> row, Direction direction);

// Throws InputError for fewer than 2 methods, no datasets, ragged rows, or an
// all-missing row.
RankTable rank_with_missing(const BenchmarkMatrix& matrix);

struct FriedmanResult {
  double chi2 = 0;
  int df = 0;
  double p_value = 1;
};

// Plain Friedman statistic, no tie correction. Throws InputError for k < 3
// ("use sign test") or N < 2.
FriedmanResult friedman(const RankTable& ranks);

// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);
double chi_square_sf(double x, int df);

double normal_cdf(double z);

// Upper tail of the studentized range with infinite degrees of freedom.
double studentized_range_sf(double q, int k);
// q with studentized_range_sf(q, k) == alpha.
double studentized_range_quantile(double alpha, int k);

struct NemenyiResult {
  std::vector<std::string> methods;
  std::vector<std::vector<double>> statistic;  // |R_i - R_j| / sqrt(k(k+1)/(6N))
  std::vector<std::vector<double>> p_values;   // symmetric, unit diagonal
};

NemenyiResult nemenyi(const RankTable& ranks);

double critical_difference(int k, int n, double alpha);

}  // namespace narrametric
