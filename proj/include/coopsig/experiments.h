#pragma once

#include <optional>

#include "coopsig/agents.h"
#include "coopsig/stats.h"

namespace coopsig {

// ---------------------------------------------------------------------------
// Single-trial rollout
// ---------------------------------------------------------------------------

// How a trial played out, keyed by the signaler's move. SignalerErrs marks a
// noisy walk to a non-target item; reporting folds it into SignalerDoes.
enum class BehaviorClass { SuccessfulComm, UnsuccessfulComm, SignalerDoes, SignalerErrs, Quit };

const std::string& behavior_name(BehaviorClass b);
BehaviorClass behavior_from_name(const std::string& name);

struct TrialRecord {
    long long trial_id = 0;
    uint64_t seed = 0;  // the trial's sampling-stream key; reconstructs the trial
    int n_items = 0;
    BarrierCondition barrier = BarrierCondition::RB;
    Model model = Model::IW;
    int s_level = 1;
    int r_level = 1;
    TurnAction signaler_action;
    std::optional<TurnAction> receiver_action;
    double achieved_utility = 0.0;
    double cc_utility = 0.0;
    double pct_optimal = 0.0;  // NaN when cc_utility <= 0 (unfiltered runs only)
    BehaviorClass behavior = BehaviorClass::Quit;
    int steps_total = 0;
};

// Plays one trial under the given model: the signaler samples her turn; a
// sent signal (or a wrong walk) hands the receiver a turn; utilities are the
// shared sum of step costs and the +8 on reaching the target. Deterministic
// given the stream.
TrialRecord rollout(const Trial& trial, long long trial_id, const ModelParams& params,
                    RandomStream& rng);

// True iff the omniscient joint plan sends the receiver and nets positive
// utility — the analysis population for both simulation batteries.
bool is_comm_optimal(const Trial& trial);

// ---------------------------------------------------------------------------
// Trial generation
// ---------------------------------------------------------------------------

// Candidate i draws from base.derive(i), so a trial's identity depends only
// on the base stream and its candidate index.
std::vector<Trial> sample_trials(const GridSpec& grid, int n_items, int count,
                                 const RandomStream& base);

// FillToN walks the candidate stream until `count` trials pass the
// communication-optimal filter; PostFilter draws exactly `count` candidates
// and keeps the passing subset (fixed sampling budget, variable yield).
enum class FilterMode { FillToN, PostFilter };

const std::string& filter_mode_name(FilterMode m);
FilterMode filter_mode_from_name(const std::string& name);

std::vector<Trial> generate_comm_optimal_trials(const GridSpec& grid, int n_items, int count,
                                                const RandomStream& base, FilterMode mode);

// ---------------------------------------------------------------------------
// Batch execution
// ---------------------------------------------------------------------------

// Stream-derivation tags: every random decision in a batch descends from
// (master_seed, one of these, identifying indices), which is what makes
// records independent of worker scheduling.
namespace tags {
inline constexpr uint64_t kTrials = 1;
inline constexpr uint64_t kRollout = 2;
inline constexpr uint64_t kSummary = 3;
inline constexpr uint64_t kPermutation = 4;
}  // namespace tags

// Runs `params` on every trial (trial-major, models in enum order), with
// trial_id = first_trial_id + index. Slots are preallocated, so output bytes
// never depend on the worker count; workers = 0 uses the hardware count.
std::vector<TrialRecord> run_batch(const std::vector<Trial>& trials,
                                   const std::vector<ModelParams>& params_list,
                                   uint64_t master_seed, long long first_trial_id, int workers);

struct Sim1Config {
    int n_per_condition = 500;
    uint64_t master_seed = 5;
    double beta = 4.0;
    int signaler_level = 1;
    int receiver_level = 1;
    int workers = 0;
    FilterMode filter_mode = FilterMode::FillToN;
};

// Varying-scarcity battery: communication-optimal RB trials at 2..9 items,
// all four models on the same trial sets.
std::vector<TrialRecord> run_sim1(const Sim1Config& config);

struct Sim2Config {
    int n_per_cell = 200;
    uint64_t master_seed = 0;
    double beta = 4.0;
    int workers = 0;
    FilterMode filter_mode = FilterMode::FillToN;
};

// Barrier-shift battery: 6-item trials per condition (RB, SB), the two
// communicating models (IW, aRSA) crossed with signaler levels {1,2} and
// receiver levels {0,1,2}, every cell on the condition's shared trial set.
std::vector<TrialRecord> run_sim2(const Sim2Config& config);

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct SummaryRow {
    BarrierCondition barrier = BarrierCondition::RB;
    Model model = Model::IW;
    int s_level = 1;
    int r_level = 1;
    int n_items = 0;
    int n = 0;
    double mean_pct = 0.0;  // NaN when no record in the group has a defined pct
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_success = 0.0;
    double p_unsuccess = 0.0;
    double p_does = 0.0;  // SignalerDoes with SignalerErrs folded in
    double p_quit = 0.0;
};

// Groups by (barrier, model, s_level, r_level, n_items), sorted. Mean and the
// seeded percentile-bootstrap CI cover records with a defined pct_optimal;
// behavior proportions cover the whole group. Throws EmptyGroup on no input.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, int resamples,
                                  uint64_t master_seed);

struct RbSbTest {
    Model model = Model::IW;
    int s_level = 1;
    int r_level = 1;
    int n_rb = 0;
    int n_sb = 0;
    double mean_rb = 0.0;
    double mean_sb = 0.0;
    double p_raw = 1.0;
    double p_holm = 1.0;
};

// Per (model, level pair): two-sided permutation test on mean achieved
// utility between the barrier conditions, Holm-adjusted across each model's
// pairs. Throws InsufficientData unless every appearing (model, levels) cell
// has records under both conditions.
std::vector<RbSbTest> compare_rb_sb(const std::vector<TrialRecord>& records,
                                    uint64_t master_seed);

}  // namespace coopsig
