#pragma once

#include <optional>

#include "coopsig/pragmatics.h"

namespace coopsig {

// ---------------------------------------------------------------------------
// Turn-level action vocabulary
// ---------------------------------------------------------------------------

// One agent's turn: walk to an item, send a signal (signaler only), quit the
// trial (signaler only, utility 0), or pass (receiver only, utility 0).
struct TurnAction {
    enum class Kind { GoTo, Send, Quit, Pass };

    Kind kind = Kind::Quit;
    int item_id = -1;                  // GoTo
    Feature signal = Feature::Circle;  // Send

    static TurnAction go_to(int item_id) { return {Kind::GoTo, item_id, Feature::Circle}; }
    static TurnAction send(Feature f) { return {Kind::Send, -1, f}; }
    static TurnAction quit() { return {Kind::Quit, -1, Feature::Circle}; }
    static TurnAction pass() { return {Kind::Pass, -1, Feature::Circle}; }

    bool operator==(const TurnAction&) const = default;
};

// Probability distribution over turn actions, in a stable support order.
struct TurnPolicy {
    std::vector<std::pair<TurnAction, double>> entries;

    double prob_of(const TurnAction& action) const;
    TurnAction sample(RandomStream& rng) const;
    const TurnAction& mode() const;  // highest-probability entry (first on ties)
};

// Belief over which item is the joint goal, indexed by item id.
struct GoalBelief {
    std::vector<double> prob;

    double at(int item_id) const { return prob[static_cast<size_t>(item_id)]; }
    int mode() const;
};

enum class Model { IW, ARSA, JU, SELF };

const std::string& model_name(Model m);
Model model_from_name(const std::string& name);

// Validated bundle of model, rationality, and recursion depths.
struct ModelParams {
    Model model = Model::IW;
    double beta = 4.0;
    int signaler_level = 1;  // 1 or 2
    int receiver_level = 1;  // 0, 1, or 2 (JU and SELF ignore both levels)

    ModelParams(Model model, double beta, int signaler_level, int receiver_level);
};

// Which agent is responsible for each item under the joint-cost partition:
// Receiver iff her path is strictly shorter, Signaler on ties (she moves
// first, matching the central-control tie rule).
struct Responsibility {
    std::vector<Agent> assignment;  // indexed by item id

    Agent of(int item_id) const { return assignment[static_cast<size_t>(item_id)]; }
};

// ---------------------------------------------------------------------------
// Shared receiver planning
// ---------------------------------------------------------------------------

// Receiver's plan given a KNOWN goal: soft-max over walking to each item
// (8 * [item == goal] - her steps) and passing (0).
TurnPolicy receiver_goal_policy(const Trial& trial, int goal_id, const ModelParams& params);

// ---------------------------------------------------------------------------
// Joint-goal inference model ("iw"): the receiver treats the signal as
// evidence about a shared goal, combining truthfulness with a cooperative
// prior — how likely a partner weighing do/signal/quit would have ASKED given
// each candidate goal — then acts on the inferred goal.
// ---------------------------------------------------------------------------

// Send-category probability of the three-way soft-max over
// {do: 8 - signaler_steps(goal), signal: 8 - receiver_steps(goal), quit: 0}.
// This is the cooperative prior weight before normalization over goals.
double cooperative_send_weight(const Trial& trial, int goal_id, double beta);

// P(goal | signal) at the given listener level. Level 0 uses the literal
// truthfulness likelihood; level k >= 1 uses the level-k signaler's signal
// choice (its Send options renormalized, i.e. the signal-only soft-max) as
// the likelihood. The cooperative prior applies at every level.
GoalBelief iw_goal_posterior(const Trial& trial, Feature signal, int receiver_level,
                             const ModelParams& params);

// P(action | signal): the per-goal plans mixed by the goal posterior. Serves
// as both the speaker's prediction of the receiver and the executing
// receiver's sampling distribution.
TurnPolicy iw_receiver_action_dist(const Trial& trial, Feature signal, int receiver_level,
                                   const ModelParams& params);

// Expected utility of sending `signal` for `goal_id`: the predicted receiver
// (one level below the speaker) acts, each action scored by the receiver's
// travel utility toward the true goal.
double iw_signal_utility(const Trial& trial, Feature signal, int goal_id, int speaker_level,
                         const ModelParams& params);

// Signaler's full turn policy: soft-max over truthful signals (expected
// utility above), walking to each item (8 * [item == goal] - her steps), and
// quitting (0).
TurnPolicy iw_signaler_policy(const Trial& trial, int goal_id, int speaker_level,
                              const ModelParams& params);

// Signal-free receiver turn, used when the signaler walked to a wrong item:
// posterior = cooperative prior renormalized over the remaining items (the
// walked-to item is excluded), actions via the same per-goal-plan mixture.
GoalBelief iw_signal_free_posterior(const Trial& trial, int excluded_item,
                                    const ModelParams& params);
TurnPolicy iw_signal_free_action_dist(const Trial& trial, int excluded_item,
                                      const ModelParams& params);

// ---------------------------------------------------------------------------
// Acting-RSA baseline ("arsa"): pragmatic recursion without joint-goal
// reasoning. The listener distribution IS the predicted (and executed)
// action distribution.
// ---------------------------------------------------------------------------

// Expected receiver-travel utility of a truthful signal under the
// level-(speaker_level - 1) listener.
double arsa_signal_utility(const Trial& trial, Feature signal, int goal_id, int speaker_level,
                           const ModelParams& params);

// Soft-max over truthful signals, walking to each item, and quitting.
TurnPolicy arsa_signaler_policy(const Trial& trial, int goal_id, int speaker_level,
                                const ModelParams& params);

// GoTo(x) with exactly the listener's probability of x; no pass mass.
TurnPolicy arsa_receiver_policy(const Trial& trial, Feature signal, int receiver_level,
                                const ModelParams& params);

// ---------------------------------------------------------------------------
// Joint-utility baseline ("ju"): non-pragmatic partition of labor.
// ---------------------------------------------------------------------------

Responsibility ju_responsibility(const Trial& trial);

// Category soft-max over {do, signal, quit}; a drawn Send picks uniformly
// between the goal's two true features.
TurnPolicy ju_signaler_policy(const Trial& trial, int goal_id, const ModelParams& params);

// Soft-max by 8 - receiver_steps over items consistent with the signal AND
// assigned to the receiver; falls back to all consistent items when none are
// hers. No pass mass.
TurnPolicy ju_receiver_policy(const Trial& trial, Feature signal, const ModelParams& params);

// Signal-free variant for wrong-walk turns: candidates are all items except
// the excluded one, same responsibility filter and weighting.
TurnPolicy ju_receiver_policy_excluding(const Trial& trial, int excluded_item,
                                        const ModelParams& params);

// ---------------------------------------------------------------------------
// Do-for-self baseline ("self"): the signaler always walks to the goal.
// ---------------------------------------------------------------------------

TurnPolicy self_policy(const Trial& trial, int goal_id);

}  // namespace coopsig
