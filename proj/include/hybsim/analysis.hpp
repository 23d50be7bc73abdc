#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hybsim {

/// H_n = sum_{k=1..n} 1/k. Throws std::invalid_argument for n == 0.
double harmonic(uint64_t n);

/// Closed-form statistics for the number of uniform random victim
/// choices needed to touch every one of n entries at least once:
/// expected = n * H_n, variance ~= (pi^2 / 6) * n^2 (asymptotic form;
/// a few percent high for small n, which the test bands absorb).
struct CouponStats {
    uint64_t n = 0;
    double expected = 0.0;
    double variance = 0.0;
};

CouponStats coupon_stats(uint64_t n);

/// Pearson goodness-of-fit outcome. pass_at compares the statistic to
/// a fixed critical-value table; only the tabulated (dof, alpha) pairs
/// are accepted, anything else throws.
struct ChiSquareResult {
    double statistic = 0.0;
    uint32_t dof = 0;

    bool pass_at(double alpha) const;
};

/// Critical value at significance alpha for the given degrees of
/// freedom. Values are frozen offline; alpha in {0.05, 0.01, 0.001}.
double chi_square_critical(uint32_t dof, double alpha);

/// Tests observed counts against a uniform expectation.
/// Requires at least two cells and a nonzero total.
ChiSquareResult chi_square_uniform(std::span<const uint64_t> counts);

/// Two-sample homogeneity test: were the two count vectors drawn from
/// the same cell distribution? Cells with zero combined count are
/// dropped; dof = kept_cells - 1.
ChiSquareResult chi_square_homogeneity(std::span<const uint64_t> a,
                                       std::span<const uint64_t> b);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Normal-approximation confidence interval for a binomial proportion,
/// clamped to [0, 1]. confidence in {0.90, 0.95, 0.99, 0.999}.
Interval binomial_ci(uint64_t successes, uint64_t trials, double confidence);

/// Spearman rank correlation with average ranks for ties.
/// Returns a value in [-1, 1]; throws if sizes differ, fewer than two
/// points, or either side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace hybsim
