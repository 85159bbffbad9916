#include "coopsig/agents.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopsig/errors.h"
#include "coopsig/planning.h"

namespace coopsig {

double TurnPolicy::prob_of(const TurnAction& action) const {
    double total = 0.0;
    for (const auto& [a, p] : entries) {
        if (a == action) total += p;
    }
    return total;
}

TurnAction TurnPolicy::sample(RandomStream& rng) const {
    if (entries.empty()) throw EmptyChoiceSet("cannot sample from an empty policy");
    const double u = rng.next_double();
    double cum = 0.0;
    for (const auto& [a, p] : entries) {
        cum += p;
        if (u < cum) return a;
    }
    // Rounding left u just above the accumulated mass: fall back to the last
    // entry with positive probability.
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->second > 0.0) return it->first;
    }
    return entries.back().first;
}

const TurnAction& TurnPolicy::mode() const {
    if (entries.empty()) throw EmptyChoiceSet("cannot take the mode of an empty policy");
    size_t best = 0;
    for (size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].second > entries[best].second) best = i;
    }
    return entries[best].first;
}

int GoalBelief::mode() const {
    if (prob.empty()) throw EmptyChoiceSet("cannot take the mode of an empty belief");
    size_t best = 0;
    for (size_t i = 1; i < prob.size(); ++i) {
        if (prob[i] > prob[best]) best = i;
    }
    return static_cast<int>(best);
}

const std::string& model_name(Model m) {
    static const std::string names[] = {"iw", "arsa", "ju", "self"};
    return names[static_cast<size_t>(m)];
}

Model model_from_name(const std::string& name) {
    for (Model m : {Model::IW, Model::ARSA, Model::JU, Model::SELF}) {
        if (model_name(m) == name) return m;
    }
    throw ConfigError("unknown model name: '" + name + "' (expected iw, arsa, ju, or self)");
}

ModelParams::ModelParams(Model model_in, double beta_in, int signaler_level_in,
                         int receiver_level_in)
    : model(model_in),
      beta(beta_in),
      signaler_level(signaler_level_in),
      receiver_level(receiver_level_in) {
    if (!std::isfinite(beta) || beta < 0.0) {
        throw ConfigError("beta must be finite and non-negative, got " + std::to_string(beta));
    }
    if (signaler_level != 1 && signaler_level != 2) {
        throw ConfigError("signaler level must be 1 or 2, got " +
                          std::to_string(signaler_level));
    }
    if (receiver_level < 0 || receiver_level > 2) {
        throw ConfigError("receiver level must be 0, 1, or 2, got " +
                          std::to_string(receiver_level));
    }
}

// ---------------------------------------------------------------------------
// Shared receiver planning
// ---------------------------------------------------------------------------

TurnPolicy receiver_goal_policy(const Trial& trial, int goal_id, const ModelParams& params) {
    std::vector<double> utilities;
    utilities.reserve(trial.num_items() + 1);
    for (int x = 0; x < trial.num_items(); ++x) {
        utilities.push_back(action_utility(trial, Agent::Receiver, x, goal_id));
    }
    utilities.push_back(0.0);  // pass
    const std::vector<double> probs = softmax(utilities, params.beta);

    TurnPolicy policy;
    policy.entries.reserve(probs.size());
    for (int x = 0; x < trial.num_items(); ++x) {
        policy.entries.emplace_back(TurnAction::go_to(x), probs[static_cast<size_t>(x)]);
    }
    policy.entries.emplace_back(TurnAction::pass(), probs.back());
    return policy;
}

// ---------------------------------------------------------------------------
// Joint-goal inference model
// ---------------------------------------------------------------------------

double cooperative_send_weight(const Trial& trial, int goal_id, double beta) {
    const double do_utility = action_utility(trial, Agent::Signaler, goal_id, goal_id);
    const double send_utility = action_utility(trial, Agent::Receiver, goal_id, goal_id);
    const std::vector<double> probs = softmax({do_utility, send_utility, 0.0}, beta);
    return probs[1];
}

namespace {

// Probability that the level-`speaker_level` joint-goal signaler would pick
// `signal` among the goal's two true features. Computed as the soft-max over
// just the Send options; conditioning the full turn policy on Send gives the
// same distribution (shared normalizer) but underflows at large beta.
double iw_send_choice_prob(const Trial& trial, Feature signal, int goal_id, int speaker_level,
                           const ModelParams& params) {
    const auto features = true_features(trial.item(goal_id));
    if (signal != features[0] && signal != features[1]) return 0.0;
    std::vector<double> utilities;
    utilities.reserve(2);
    for (Feature f : features) {
        utilities.push_back(iw_signal_utility(trial, f, goal_id, speaker_level, params));
    }
    const std::vector<double> probs = softmax(utilities, params.beta);
    return signal == features[0] ? probs[0] : probs[1];
}

GoalBelief mixture_to_belief(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) {
        throw NoConsistentReferent("goal posterior has no support");
    }
    for (double& w : weights) w /= total;
    return GoalBelief{std::move(weights)};
}

// log of cooperative_send_weight. Always finite, so products that flush to
// zero in the linear domain stay comparable here.
double log_cooperative_send_weight(const Trial& trial, int goal_id, double beta) {
    const double do_utility = action_utility(trial, Agent::Signaler, goal_id, goal_id);
    const double send_utility = action_utility(trial, Agent::Receiver, goal_id, goal_id);
    const double top = std::max({do_utility, send_utility, 0.0});
    const double z = std::exp(beta * (do_utility - top)) +
                     std::exp(beta * (send_utility - top)) + std::exp(beta * (0.0 - top));
    return beta * (send_utility - top) - std::log(z);
}

// log of iw_send_choice_prob for a signal already known to be true of the
// goal.
double log_iw_send_choice_prob(const Trial& trial, Feature signal, int goal_id,
                               int speaker_level, const ModelParams& params) {
    const auto features = true_features(trial.item(goal_id));
    std::array<double, 2> utilities{};
    for (size_t i = 0; i < features.size(); ++i) {
        utilities[i] = iw_signal_utility(trial, features[i], goal_id, speaker_level, params);
    }
    const double top = std::max(utilities[0], utilities[1]);
    const double z = std::exp(params.beta * (utilities[0] - top)) +
                     std::exp(params.beta * (utilities[1] - top));
    const double u = signal == features[0] ? utilities[0] : utilities[1];
    return params.beta * (u - top) - std::log(z);
}

GoalBelief belief_from_log_weights(std::vector<double> log_weights) {
    double top = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights) top = std::max(top, lw);
    if (!std::isfinite(top)) {
        throw NoConsistentReferent("goal posterior has no support");
    }
    double total = 0.0;
    for (double& lw : log_weights) {
        lw = std::isfinite(lw) ? std::exp(lw - top) : 0.0;
        total += lw;
    }
    for (double& lw : log_weights) lw /= total;
    return GoalBelief{std::move(log_weights)};
}

TurnPolicy mix_goal_policies(const Trial& trial, const GoalBelief& posterior,
                             const ModelParams& params) {
    std::vector<double> action_probs(static_cast<size_t>(trial.num_items()) + 1, 0.0);
    for (int g = 0; g < trial.num_items(); ++g) {
        const double w = posterior.at(g);
        if (w == 0.0) continue;
        const TurnPolicy plan = receiver_goal_policy(trial, g, params);
        for (size_t i = 0; i < plan.entries.size(); ++i) {
            action_probs[i] += w * plan.entries[i].second;
        }
    }
    TurnPolicy mixed;
    mixed.entries.reserve(action_probs.size());
    for (int x = 0; x < trial.num_items(); ++x) {
        mixed.entries.emplace_back(TurnAction::go_to(x), action_probs[static_cast<size_t>(x)]);
    }
    mixed.entries.emplace_back(TurnAction::pass(), action_probs.back());
    return mixed;
}

}  // namespace

GoalBelief iw_goal_posterior(const Trial& trial, Feature signal, int receiver_level,
                             const ModelParams& params) {
    std::vector<double> weights(static_cast<size_t>(trial.num_items()), 0.0);
    for (int g = 0; g < trial.num_items(); ++g) {
        double likelihood;
        if (receiver_level == 0) {
            likelihood = literal_speaker(trial, g).at(signal);
        } else {
            likelihood = iw_send_choice_prob(trial, signal, g, receiver_level, params);
        }
        if (likelihood == 0.0) continue;
        weights[static_cast<size_t>(g)] =
            likelihood * cooperative_send_weight(trial, g, params.beta);
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (total > 0.0) return mixture_to_belief(std::move(weights));

    // Every likelihood-times-prior product flushed to zero (extreme beta).
    // The same arithmetic in log space keeps the surviving ratios; goals
    // inconsistent with the signal stay at exactly zero.
    std::vector<double> log_weights(weights.size(), -std::numeric_limits<double>::infinity());
    for (int g = 0; g < trial.num_items(); ++g) {
        if (!consistent(signal, trial.item(g))) continue;
        const double log_likelihood =
            receiver_level == 0
                ? std::log(literal_speaker(trial, g).at(signal))
                : log_iw_send_choice_prob(trial, signal, g, receiver_level, params);
        log_weights[static_cast<size_t>(g)] =
            log_likelihood + log_cooperative_send_weight(trial, g, params.beta);
    }
    return belief_from_log_weights(std::move(log_weights));
}

TurnPolicy iw_receiver_action_dist(const Trial& trial, Feature signal, int receiver_level,
                                   const ModelParams& params) {
    const GoalBelief posterior = iw_goal_posterior(trial, signal, receiver_level, params);
    return mix_goal_policies(trial, posterior, params);
}

double iw_signal_utility(const Trial& trial, Feature signal, int goal_id, int speaker_level,
                         const ModelParams& params) {
    const TurnPolicy predicted =
        iw_receiver_action_dist(trial, signal, speaker_level - 1, params);
    double expected = 0.0;
    for (const auto& [action, p] : predicted.entries) {
        if (p == 0.0 || action.kind != TurnAction::Kind::GoTo) continue;
        expected += p * action_utility(trial, Agent::Receiver, action.item_id, goal_id);
    }
    return expected;  // pass contributes 0
}

TurnPolicy iw_signaler_policy(const Trial& trial, int goal_id, int speaker_level,
                              const ModelParams& params) {
    const auto features = true_features(trial.item(goal_id));
    std::vector<TurnAction> actions;
    std::vector<double> utilities;
    actions.reserve(2 + trial.num_items() + 1);
    utilities.reserve(actions.capacity());
    for (Feature f : features) {
        actions.push_back(TurnAction::send(f));
        utilities.push_back(iw_signal_utility(trial, f, goal_id, speaker_level, params));
    }
    for (int x = 0; x < trial.num_items(); ++x) {
        actions.push_back(TurnAction::go_to(x));
        utilities.push_back(action_utility(trial, Agent::Signaler, x, goal_id));
    }
    actions.push_back(TurnAction::quit());
    utilities.push_back(0.0);

    const std::vector<double> probs = softmax(utilities, params.beta);
    TurnPolicy policy;
    policy.entries.reserve(actions.size());
    for (size_t i = 0; i < actions.size(); ++i) {
        policy.entries.emplace_back(actions[i], probs[i]);
    }
    return policy;
}

GoalBelief iw_signal_free_posterior(const Trial& trial, int excluded_item,
                                    const ModelParams& params) {
    std::vector<double> weights(static_cast<size_t>(trial.num_items()), 0.0);
    for (int g = 0; g < trial.num_items(); ++g) {
        if (g == excluded_item) continue;
        weights[static_cast<size_t>(g)] = cooperative_send_weight(trial, g, params.beta);
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (total > 0.0) return mixture_to_belief(std::move(weights));

    // All remaining send weights flushed to zero (extreme beta): same
    // computation in log space.
    std::vector<double> log_weights(weights.size(), -std::numeric_limits<double>::infinity());
    for (int g = 0; g < trial.num_items(); ++g) {
        if (g == excluded_item) continue;
        log_weights[static_cast<size_t>(g)] =
            log_cooperative_send_weight(trial, g, params.beta);
    }
    return belief_from_log_weights(std::move(log_weights));
}

TurnPolicy iw_signal_free_action_dist(const Trial& trial, int excluded_item,
                                      const ModelParams& params) {
    const GoalBelief posterior = iw_signal_free_posterior(trial, excluded_item, params);
    return mix_goal_policies(trial, posterior, params);
}

// ---------------------------------------------------------------------------
// Acting-RSA baseline
// ---------------------------------------------------------------------------

double arsa_signal_utility(const Trial& trial, Feature signal, int goal_id, int speaker_level,
                           const ModelParams& params) {
    const ReferentDistribution listener =
        rsa_listener(speaker_level - 1, trial, signal, params.beta);
    return expected_receiver_utility(trial, listener, goal_id);
}

TurnPolicy arsa_signaler_policy(const Trial& trial, int goal_id, int speaker_level,
                                const ModelParams& params) {
    const auto features = true_features(trial.item(goal_id));
    std::vector<TurnAction> actions;
    std::vector<double> utilities;
    actions.reserve(2 + trial.num_items() + 1);
    utilities.reserve(actions.capacity());
    for (Feature f : features) {
        actions.push_back(TurnAction::send(f));
        utilities.push_back(arsa_signal_utility(trial, f, goal_id, speaker_level, params));
    }
    for (int x = 0; x < trial.num_items(); ++x) {
        actions.push_back(TurnAction::go_to(x));
        utilities.push_back(action_utility(trial, Agent::Signaler, x, goal_id));
    }
    actions.push_back(TurnAction::quit());
    utilities.push_back(0.0);

    const std::vector<double> probs = softmax(utilities, params.beta);
    TurnPolicy policy;
    policy.entries.reserve(actions.size());
    for (size_t i = 0; i < actions.size(); ++i) {
        policy.entries.emplace_back(actions[i], probs[i]);
    }
    return policy;
}

TurnPolicy arsa_receiver_policy(const Trial& trial, Feature signal, int receiver_level,
                                const ModelParams& params) {
    const ReferentDistribution listener = rsa_listener(receiver_level, trial, signal, params.beta);
    TurnPolicy policy;
    for (int x = 0; x < trial.num_items(); ++x) {
        const double p = listener.at(x);
        if (p > 0.0) policy.entries.emplace_back(TurnAction::go_to(x), p);
    }
    if (policy.entries.empty()) {
        throw NoConsistentReferent("listener distribution has no support");
    }
    return policy;
}

// ---------------------------------------------------------------------------
// Joint-utility baseline
// ---------------------------------------------------------------------------

Responsibility ju_responsibility(const Trial& trial) {
    Responsibility r;
    r.assignment.reserve(static_cast<size_t>(trial.num_items()));
    for (int x = 0; x < trial.num_items(); ++x) {
        const int d_s = agent_item_cost(trial, Agent::Signaler, x);
        const int d_r = agent_item_cost(trial, Agent::Receiver, x);
        r.assignment.push_back(d_r < d_s ? Agent::Receiver : Agent::Signaler);
    }
    return r;
}

TurnPolicy ju_signaler_policy(const Trial& trial, int goal_id, const ModelParams& params) {
    const double do_utility = action_utility(trial, Agent::Signaler, goal_id, goal_id);
    const double send_utility = action_utility(trial, Agent::Receiver, goal_id, goal_id);
    const std::vector<double> probs = softmax({do_utility, send_utility, 0.0}, params.beta);

    const auto features = true_features(trial.item(goal_id));
    TurnPolicy policy;
    policy.entries.reserve(4);
    policy.entries.emplace_back(TurnAction::send(features[0]), probs[1] / 2.0);
    policy.entries.emplace_back(TurnAction::send(features[1]), probs[1] / 2.0);
    policy.entries.emplace_back(TurnAction::go_to(goal_id), probs[0]);
    policy.entries.emplace_back(TurnAction::quit(), probs[2]);
    return policy;
}

namespace {

TurnPolicy ju_walk_policy(const Trial& trial, const std::vector<int>& candidates,
                          const ModelParams& params) {
    std::vector<double> utilities;
    utilities.reserve(candidates.size());
    for (int x : candidates) {
        // Each candidate is weighted as if it were the goal: 8 minus her steps.
        utilities.push_back(action_utility(trial, Agent::Receiver, x, x));
    }
    const std::vector<double> probs = softmax(utilities, params.beta);
    TurnPolicy policy;
    policy.entries.reserve(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        policy.entries.emplace_back(TurnAction::go_to(candidates[i]), probs[i]);
    }
    return policy;
}

}  // namespace

TurnPolicy ju_receiver_policy(const Trial& trial, Feature signal, const ModelParams& params) {
    const Responsibility resp = ju_responsibility(trial);
    std::vector<int> hers;
    std::vector<int> all_consistent;
    for (int x = 0; x < trial.num_items(); ++x) {
        if (!consistent(signal, trial.item(x))) continue;
        all_consistent.push_back(x);
        if (resp.of(x) == Agent::Receiver) hers.push_back(x);
    }
    if (all_consistent.empty()) {
        throw NoConsistentReferent("no item is consistent with the signal");
    }
    return ju_walk_policy(trial, hers.empty() ? all_consistent : hers, params);
}

TurnPolicy ju_receiver_policy_excluding(const Trial& trial, int excluded_item,
                                        const ModelParams& params) {
    const Responsibility resp = ju_responsibility(trial);
    std::vector<int> hers;
    std::vector<int> rest;
    for (int x = 0; x < trial.num_items(); ++x) {
        if (x == excluded_item) continue;
        rest.push_back(x);
        if (resp.of(x) == Agent::Receiver) hers.push_back(x);
    }
    if (rest.empty()) {
        throw NoConsistentReferent("no candidate item remains after exclusion");
    }
    return ju_walk_policy(trial, hers.empty() ? rest : hers, params);
}

// ---------------------------------------------------------------------------
// Do-for-self baseline
// ---------------------------------------------------------------------------

TurnPolicy self_policy(const Trial& trial, int goal_id) {
    (void)trial;
    TurnPolicy policy;
    policy.entries.emplace_back(TurnAction::go_to(goal_id), 1.0);
    return policy;
}

}  // namespace coopsig
