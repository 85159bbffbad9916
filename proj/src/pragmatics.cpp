#include "coopsig/pragmatics.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coopsig {

namespace {
double log_rsa_speaker_prob(int level, const Trial& trial, int goal_id, Feature signal,
                            double beta);
}  // namespace

std::array<Feature, 2> true_features(const Item& item) {
    return {item.shape, item.color};
}

bool consistent(Feature signal, const Item& item) {
    return signal == item.shape || signal == item.color;
}

SignalDistribution literal_speaker(const Trial& trial, int goal_id) {
    const Item& goal = trial.item(goal_id);
    SignalDistribution dist;
    dist.at(goal.shape) = 0.5;
    dist.at(goal.color) = 0.5;
    return dist;
}

ReferentDistribution rsa_listener(int level, const Trial& trial, Feature signal, double beta) {
    if (level < 0 || level > 2)
        throw ConfigError("listener level must be 0, 1, or 2");
    const int n = trial.num_items();
    ReferentDistribution posterior;
    posterior.prob.assign(static_cast<size_t>(n), 0.0);
    double total = 0.0;
    for (int x = 0; x < n; ++x) {
        // Uniform referent prior, so the posterior is proportional to the
        // speaker likelihood alone.
        const double likelihood = level == 0 ? literal_speaker(trial, x).at(signal)
                                             : rsa_speaker(level, trial, x, beta).at(signal);
        posterior.prob[static_cast<size_t>(x)] = likelihood;
        total += likelihood;
    }
    if (total <= 0.0) {
        // A consistent signal can still reach zero everywhere when every
        // speaker probability flushes to zero at extreme beta; redo the
        // weights in log space before concluding there is no referent.
        std::vector<double> log_weights(static_cast<size_t>(n),
                                        -std::numeric_limits<double>::infinity());
        bool any_consistent = false;
        for (int x = 0; x < n; ++x) {
            if (!consistent(signal, trial.item(x))) continue;
            any_consistent = true;
            log_weights[static_cast<size_t>(x)] =
                level == 0 ? std::log(0.5)
                           : log_rsa_speaker_prob(level, trial, x, signal, beta);
        }
        if (!any_consistent)
            throw NoConsistentReferent("signal '" + feature_name(signal) +
                                       "' is consistent with no item");
        const double top = *std::max_element(log_weights.begin(), log_weights.end());
        total = 0.0;
        for (int x = 0; x < n; ++x) {
            const double lw = log_weights[static_cast<size_t>(x)];
            posterior.prob[static_cast<size_t>(x)] =
                std::isfinite(lw) ? std::exp(lw - top) : 0.0;
            total += posterior.prob[static_cast<size_t>(x)];
        }
    }
    for (double& p : posterior.prob) p /= total;
    return posterior;
}

double expected_receiver_utility(const Trial& trial, const ReferentDistribution& listener,
                                 int goal_id) {
    const PathCostTable& costs = receiver_costs(trial.grid());
    double expectation = 0.0;
    for (int x = 0; x < trial.num_items(); ++x) {
        const double p = listener.at(x);
        if (p == 0.0) continue;
        const double utility = (x == goal_id ? 8.0 : 0.0) - costs.at(trial.item(x).cell);
        expectation += p * utility;
    }
    return expectation;
}

namespace {

// log of rsa_speaker(level, ...).at(signal), for a signal true of the goal.
// The linear speaker underflows once beta times the utility gap between the
// goal's two features passes the exponent range; the log form never does.
double log_rsa_speaker_prob(int level, const Trial& trial, int goal_id, Feature signal,
                            double beta) {
    const std::array<Feature, 2> options = true_features(trial.item(goal_id));
    std::array<double, 2> utilities{};
    for (size_t i = 0; i < options.size(); ++i) {
        const ReferentDistribution listener =
            rsa_listener(level - 1, trial, options[i], beta);
        utilities[i] = expected_receiver_utility(trial, listener, goal_id);
    }
    const double top = std::max(utilities[0], utilities[1]);
    const double z = std::exp(beta * (utilities[0] - top)) +
                     std::exp(beta * (utilities[1] - top));
    const double u = signal == options[0] ? utilities[0] : utilities[1];
    return beta * (u - top) - std::log(z);
}

}  // namespace

SignalDistribution rsa_speaker(int level, const Trial& trial, int goal_id, double beta) {
    if (level < 1 || level > 2)
        throw ConfigError("speaker level must be 1 or 2");
    const std::array<Feature, 2> options = true_features(trial.item(goal_id));
    std::vector<double> utilities(options.size());
    for (size_t i = 0; i < options.size(); ++i) {
        const ReferentDistribution listener =
            rsa_listener(level - 1, trial, options[i], beta);
        utilities[i] = expected_receiver_utility(trial, listener, goal_id);
    }
    const std::vector<double> probs = softmax(utilities, beta);
    SignalDistribution dist;
    for (size_t i = 0; i < options.size(); ++i) dist.at(options[i]) = probs[i];
    return dist;
}

}  // namespace coopsig
