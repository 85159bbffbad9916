#include "coopsig/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coopsig/errors.h"

namespace coopsig {

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw InsufficientData("mean of an empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

namespace {

// Percentile by linear interpolation between order statistics of a SORTED
// vector (the scheme numpy calls "linear").
double sorted_percentile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

// C(n, k) capped: returns a value > limit as soon as the count exceeds it,
// without overflowing.
double binomial_capped(int n, int k, double limit) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result *= static_cast<double>(n - k + i) / static_cast<double>(i);
        if (result > limit) return limit * 2.0;
    }
    return result;
}

}  // namespace

MeanCI bootstrap_mean_ci(const std::vector<double>& xs, int resamples, RandomStream& rng) {
    if (xs.empty()) throw InsufficientData("bootstrap of an empty sample");
    if (resamples < 1) throw ConfigError("bootstrap needs at least one resample");
    const size_t n = xs.size();
    std::vector<double> means;
    means.reserve(static_cast<size_t>(resamples));
    for (int b = 0; b < resamples; ++b) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            total += xs[static_cast<size_t>(rng.next_int(static_cast<int>(n)))];
        }
        means.push_back(total / static_cast<double>(n));
    }
    std::sort(means.begin(), means.end());
    return MeanCI{mean_of(xs), sorted_percentile(means, 0.025), sorted_percentile(means, 0.975)};
}

double permutation_p_value(const std::vector<double>& a, const std::vector<double>& b,
                           int max_perms, RandomStream& rng, long long exact_limit) {
    if (a.empty() || b.empty()) {
        throw InsufficientData("permutation test needs two non-empty groups");
    }
    const int n1 = static_cast<int>(a.size());
    const int n2 = static_cast<int>(b.size());
    const int n = n1 + n2;
    std::vector<double> pool;
    pool.reserve(static_cast<size_t>(n));
    pool.insert(pool.end(), a.begin(), a.end());
    pool.insert(pool.end(), b.begin(), b.end());

    const double grand_total = std::accumulate(pool.begin(), pool.end(), 0.0);
    const double sum_a = std::accumulate(a.begin(), a.end(), 0.0);
    // |mean(a) - mean(b)| written as a function of group-a's sum alone, so
    // each reassignment only needs one running sum.
    const auto abs_diff = [&](double s) {
        return std::abs(s / n1 - (grand_total - s) / n2);
    };
    const double observed = abs_diff(sum_a);
    // Tolerate float noise when a permuted difference ties the observed one.
    const double threshold = observed - 1e-12;

    if (binomial_capped(n, n1, static_cast<double>(exact_limit)) <=
        static_cast<double>(exact_limit)) {
        // Exact test: enumerate every size-n1 subset via the standard
        // lexicographic successor.
        std::vector<int> idx(static_cast<size_t>(n1));
        std::iota(idx.begin(), idx.end(), 0);
        long long extreme = 0;
        long long total = 0;
        while (true) {
            double s = 0.0;
            for (int i : idx) s += pool[static_cast<size_t>(i)];
            ++total;
            if (abs_diff(s) >= threshold) ++extreme;

            int i = n1 - 1;
            while (i >= 0 && idx[static_cast<size_t>(i)] == i + n - n1) --i;
            if (i < 0) break;
            ++idx[static_cast<size_t>(i)];
            for (int j = i + 1; j < n1; ++j) {
                idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
            }
        }
        return static_cast<double>(extreme) / static_cast<double>(total);
    }

    if (max_perms < 1) throw ConfigError("permutation test needs at least one shuffle");
    long long extreme = 0;
    std::vector<double> work = pool;
    for (int p = 0; p < max_perms; ++p) {
        for (int i = n - 1; i > 0; --i) {
            const int j = rng.next_int(i + 1);
            std::swap(work[static_cast<size_t>(i)], work[static_cast<size_t>(j)]);
        }
        double s = 0.0;
        for (int i = 0; i < n1; ++i) s += work[static_cast<size_t>(i)];
        if (abs_diff(s) >= threshold) ++extreme;
    }
    return static_cast<double>(1 + extreme) / static_cast<double>(1 + max_perms);
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
    const size_t m = p_values.size();
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return p_values[i] < p_values[j]; });

    std::vector<double> adjusted(m, 0.0);
    double running_max = 0.0;
    for (size_t rank = 0; rank < m; ++rank) {
        const double scaled = static_cast<double>(m - rank) * p_values[order[rank]];
        running_max = std::max(running_max, std::min(1.0, scaled));
        adjusted[order[rank]] = running_max;
    }
    return adjusted;
}

}  // namespace coopsig
