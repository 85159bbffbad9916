#pragma once

#include <vector>

#include "coopsig/random.h"

namespace coopsig {

struct MeanCI {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

double mean_of(const std::vector<double>& xs);

// Percentile bootstrap 95% confidence interval of the mean: `resamples`
// with-replacement resamples, interval = [2.5th, 97.5th] percentiles of the
// resampled means (linear interpolation between order statistics).
// Deterministic for a given stream. Throws InsufficientData on empty input.
MeanCI bootstrap_mean_ci(const std::vector<double>& xs, int resamples, RandomStream& rng);

// Two-sided permutation test on the difference of group means. When the
// number of distinct reassignments C(n1+n2, n1) is at most `exact_limit`, all
// are enumerated and p = (#assignments with |diff| >= observed) / total.
// Otherwise `max_perms` Monte-Carlo shuffles are drawn and
// p = (1 + #extreme) / (1 + max_perms). Throws InsufficientData if either
// group is empty.
double permutation_p_value(const std::vector<double>& a, const std::vector<double>& b,
                           int max_perms, RandomStream& rng, long long exact_limit = 20000);

// Holm step-down adjustment. Returns adjusted p-values in the input order,
// clamped to [0, 1] and monotone in the sorted order.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

}  // namespace coopsig
