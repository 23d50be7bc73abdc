#include "hybsim/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hybsim {

double harmonic(uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("harmonic: n must be positive");
    // Summing small terms first keeps the result stable for large n.
    double h = 0.0;
    for (uint64_t k = n; k >= 1; --k)
        h += 1.0 / double(k);
    return h;
}

CouponStats coupon_stats(uint64_t n) {
    constexpr double kPiSquaredOverSix = 1.6449340668482264;
    CouponStats s;
    s.n = n;
    s.expected = double(n) * harmonic(n);
    s.variance = kPiSquaredOverSix * double(n) * double(n);
    return s;
}

namespace {

struct CriticalRow {
    uint32_t dof;
    // alpha = 0.05, 0.01, 0.001
    std::array<double, 3> value;
};

// Upper-tail quantiles of the chi-square distribution, frozen from an
// offline computation. Tests are designed around these dofs.
constexpr CriticalRow kCriticalTable[] = {
    {1, {3.841459, 6.634897, 10.827566}},
    {2, {5.991465, 9.210340, 13.815511}},
    {3, {7.814728, 11.344867, 16.266236}},
    {4, {9.487729, 13.276704, 18.466827}},
    {5, {11.070498, 15.086272, 20.515006}},
    {6, {12.591587, 16.811894, 22.457744}},
    {7, {14.067140, 18.475307, 24.321886}},
    {8, {15.507313, 20.090235, 26.124482}},
    {9, {16.918978, 21.665994, 27.877165}},
    {10, {18.307038, 23.209251, 29.588298}},
    {15, {24.995790, 30.577914, 37.697298}},
    {20, {31.410433, 37.566235, 45.314747}},
    {30, {43.772972, 50.892181, 59.703064}},
    {60, {79.081944, 88.379419, 99.607233}},
    {100, {124.342113, 135.806723, 149.449253}},
    {120, {146.567358, 158.950166, 173.617436}},
    {127, {154.301516, 166.987390, 181.993045}},
    {255, {293.247835, 310.457388, 330.519744}},
    {511, {564.696133, 588.297794, 615.514863}},
    {1023, {1098.520782, 1131.158739, 1168.497164}},
};

size_t alpha_column(double alpha) {
    if (alpha == 0.05) return 0;
    if (alpha == 0.01) return 1;
    if (alpha == 0.001) return 2;
    throw std::invalid_argument("chi_square_critical: alpha not tabulated");
}

}  // namespace

double chi_square_critical(uint32_t dof, double alpha) {
    const size_t col = alpha_column(alpha);
    for (const auto& row : kCriticalTable)
        if (row.dof == dof)
            return row.value[col];
    throw std::invalid_argument("chi_square_critical: dof not tabulated");
}

bool ChiSquareResult::pass_at(double alpha) const {
    return statistic < chi_square_critical(dof, alpha);
}

ChiSquareResult chi_square_uniform(std::span<const uint64_t> counts) {
    if (counts.size() < 2)
        throw std::invalid_argument("chi_square_uniform: need at least two cells");
    const uint64_t total = std::accumulate(counts.begin(), counts.end(), uint64_t{0});
    if (total == 0)
        throw std::invalid_argument("chi_square_uniform: empty sample");
    const double expected = double(total) / double(counts.size());
    double stat = 0.0;
    for (uint64_t c : counts) {
        const double d = double(c) - expected;
        stat += d * d / expected;
    }
    return {stat, uint32_t(counts.size() - 1)};
}

ChiSquareResult chi_square_homogeneity(std::span<const uint64_t> a,
                                       std::span<const uint64_t> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("chi_square_homogeneity: bad cell vectors");
    const uint64_t na = std::accumulate(a.begin(), a.end(), uint64_t{0});
    const uint64_t nb = std::accumulate(b.begin(), b.end(), uint64_t{0});
    if (na == 0 || nb == 0)
        throw std::invalid_argument("chi_square_homogeneity: empty sample");
    const double total = double(na + nb);
    double stat = 0.0;
    uint32_t kept = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const uint64_t col = a[i] + b[i];
        if (col == 0)
            continue;
        ++kept;
        const double ea = double(na) * double(col) / total;
        const double eb = double(nb) * double(col) / total;
        const double da = double(a[i]) - ea;
        const double db = double(b[i]) - eb;
        stat += da * da / ea + db * db / eb;
    }
    if (kept < 2)
        throw std::invalid_argument("chi_square_homogeneity: fewer than two occupied cells");
    return {stat, kept - 1};
}

namespace {

double z_value(double confidence) {
    if (confidence == 0.90) return 1.644854;
    if (confidence == 0.95) return 1.959964;
    if (confidence == 0.99) return 2.575829;
    if (confidence == 0.999) return 3.290527;
    throw std::invalid_argument("binomial_ci: confidence not tabulated");
}

}  // namespace

Interval binomial_ci(uint64_t successes, uint64_t trials, double confidence) {
    if (trials == 0)
        throw std::invalid_argument("binomial_ci: zero trials");
    if (successes > trials)
        throw std::invalid_argument("binomial_ci: successes exceed trials");
    const double z = z_value(confidence);
    const double p = double(successes) / double(trials);
    const double half = z * std::sqrt(p * (1.0 - p) / double(trials));
    return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

namespace {

// Average ranks: ties share the mean of the positions they span.
std::vector<double> ranks_of(std::span<const double> v) {
    const size_t n = v.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](size_t i, size_t j) { return v[i] < v[j]; });
    std::vector<double> r(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]])
            ++j;
        const double rank = 0.5 * double(i + j) + 1.0;
        for (size_t k = i; k <= j; ++k)
            r[idx[k]] = rank;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("spearman: size mismatch");
    if (x.size() < 2)
        throw std::invalid_argument("spearman: need at least two points");
    const auto rx = ranks_of(x);
    const auto ry = ranks_of(y);
    const double n = double(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("spearman: constant input");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace hybsim
