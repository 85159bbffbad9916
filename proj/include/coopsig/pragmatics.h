#pragma once

#include <array>

#include "coopsig/planning.h"

namespace coopsig {

// Distribution over the 6 signal tokens.
struct SignalDistribution {
    std::array<double, kNumFeatures> prob{};

    double at(Feature f) const { return prob[static_cast<size_t>(feature_index(f))]; }
    double& at(Feature f) { return prob[static_cast<size_t>(feature_index(f))]; }
};

// Distribution over a trial's items, indexed by item id.
struct ReferentDistribution {
    std::vector<double> prob;

    double at(int item_id) const { return prob[static_cast<size_t>(item_id)]; }
};

// The two features an item can truthfully be described by.
std::array<Feature, 2> true_features(const Item& item);

// True iff the signal is one of the item's features.
bool consistent(Feature signal, const Item& item);

// Level-0 speaker: uniform over the goal item's two true features.
SignalDistribution literal_speaker(const Trial& trial, int goal_id);

// Listener ladder. Level 0 inverts the literal speaker under a uniform
// referent prior; level k >= 1 inverts the level-k speaker, conditioned on the
// event that a signal was sent (the act/quit options of the full policy
// renormalize away, which equals the signal-only soft-max below). Throws
// NoConsistentReferent when the signal is true of no item.
ReferentDistribution rsa_listener(int level, const Trial& trial, Feature signal, double beta);

// Expected utility of the receiver walking where the listener distribution
// says: sum_x L(x|signal) * (8 * [x == goal] - receiver_steps(x)).
double expected_receiver_utility(const Trial& trial, const ReferentDistribution& listener,
                                 int goal_id);

// Level-k speaker (k in {1,2}), signal component only: soft-max over the
// goal's two true features of the expected receiver utility under the
// level-(k-1) listener. The full walk/quit-augmented policy lives with the
// agents; by the conditioning rule above this IS that policy restricted to
// its Send options.
SignalDistribution rsa_speaker(int level, const Trial& trial, int goal_id, double beta);

}  // namespace coopsig
