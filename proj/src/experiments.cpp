#include "coopsig/experiments.h"

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "coopsig/errors.h"
#include "coopsig/planning.h"

namespace coopsig {

const std::string& behavior_name(BehaviorClass b) {
    static const std::string names[] = {"successful_comm", "unsuccessful_comm", "signaler_does",
                                        "signaler_errs", "quit"};
    return names[static_cast<size_t>(b)];
}

BehaviorClass behavior_from_name(const std::string& name) {
    for (BehaviorClass b :
         {BehaviorClass::SuccessfulComm, BehaviorClass::UnsuccessfulComm,
          BehaviorClass::SignalerDoes, BehaviorClass::SignalerErrs, BehaviorClass::Quit}) {
        if (behavior_name(b) == name) return b;
    }
    throw DataError("unknown behavior class: '" + name + "'");
}

const std::string& filter_mode_name(FilterMode m) {
    static const std::string names[] = {"fill", "post"};
    return names[static_cast<size_t>(m)];
}

FilterMode filter_mode_from_name(const std::string& name) {
    for (FilterMode m : {FilterMode::FillToN, FilterMode::PostFilter}) {
        if (filter_mode_name(m) == name) return m;
    }
    throw ConfigError("unknown filter mode: '" + name + "' (expected fill or post)");
}

// ---------------------------------------------------------------------------
// Single-trial rollout
// ---------------------------------------------------------------------------

namespace {

TurnPolicy signaler_policy_for(const Trial& trial, const ModelParams& params) {
    const int goal = trial.target_id();
    switch (params.model) {
        case Model::IW:
            return iw_signaler_policy(trial, goal, params.signaler_level, params);
        case Model::ARSA:
            return arsa_signaler_policy(trial, goal, params.signaler_level, params);
        case Model::JU:
            return ju_signaler_policy(trial, goal, params);
        case Model::SELF:
            return self_policy(trial, goal);
    }
    throw ConfigError("unhandled model");
}

TurnPolicy receiver_policy_for(const Trial& trial, Feature signal, const ModelParams& params) {
    switch (params.model) {
        case Model::IW:
            return iw_receiver_action_dist(trial, signal, params.receiver_level, params);
        case Model::ARSA:
            return arsa_receiver_policy(trial, signal, params.receiver_level, params);
        case Model::JU:
            return ju_receiver_policy(trial, signal, params);
        case Model::SELF:
            break;  // never signals
    }
    throw ConfigError("model has no receiver policy");
}

TurnPolicy uniform_goto_excluding(const Trial& trial, int excluded_item) {
    TurnPolicy policy;
    const double w = 1.0 / static_cast<double>(trial.num_items() - 1);
    for (int x = 0; x < trial.num_items(); ++x) {
        if (x != excluded_item) policy.entries.emplace_back(TurnAction::go_to(x), w);
    }
    return policy;
}

// Receiver machinery for the turn granted by a wrong signaler walk: the
// walked-to item is ruled out, no signal was sent.
TurnPolicy signal_free_receiver_policy_for(const Trial& trial, int excluded_item,
                                           const ModelParams& params) {
    switch (params.model) {
        case Model::IW:
            return iw_signal_free_action_dist(trial, excluded_item, params);
        case Model::ARSA:
            return uniform_goto_excluding(trial, excluded_item);
        case Model::JU:
            return ju_receiver_policy_excluding(trial, excluded_item, params);
        case Model::SELF:
            break;  // never takes a receiver turn
    }
    throw ConfigError("model has no signal-free receiver policy");
}

}  // namespace

TrialRecord rollout(const Trial& trial, long long trial_id, const ModelParams& params,
                    RandomStream& rng) {
    TrialRecord rec;
    rec.trial_id = trial_id;
    rec.seed = trial.seed();
    rec.n_items = trial.num_items();
    rec.barrier = trial.grid().condition();
    rec.model = params.model;
    rec.s_level = params.signaler_level;
    rec.r_level = params.receiver_level;
    rec.cc_utility = cc_solve(trial).utility;

    const int target = trial.target_id();
    rec.signaler_action = signaler_policy_for(trial, params).sample(rng);

    switch (rec.signaler_action.kind) {
        case TurnAction::Kind::Quit:
            rec.achieved_utility = 0.0;
            rec.behavior = BehaviorClass::Quit;
            break;

        case TurnAction::Kind::GoTo: {
            const int x = rec.signaler_action.item_id;
            const int d_s = agent_item_cost(trial, Agent::Signaler, x);
            rec.steps_total = d_s;
            if (x == target) {
                rec.achieved_utility = 8.0 - d_s;
                rec.behavior = BehaviorClass::SignalerDoes;
                break;
            }
            rec.achieved_utility = -static_cast<double>(d_s);
            rec.behavior = BehaviorClass::SignalerErrs;
            if (params.model == Model::SELF) break;  // SELF never errs; defensive
            const TurnAction reply =
                signal_free_receiver_policy_for(trial, x, params).sample(rng);
            rec.receiver_action = reply;
            if (reply.kind == TurnAction::Kind::GoTo) {
                const int d_r = agent_item_cost(trial, Agent::Receiver, reply.item_id);
                rec.achieved_utility += (reply.item_id == target ? 8.0 : 0.0) - d_r;
                rec.steps_total += d_r;
            }
            break;
        }

        case TurnAction::Kind::Send: {
            const TurnAction reply =
                receiver_policy_for(trial, rec.signaler_action.signal, params).sample(rng);
            rec.receiver_action = reply;
            if (reply.kind == TurnAction::Kind::GoTo) {
                const int d_r = agent_item_cost(trial, Agent::Receiver, reply.item_id);
                rec.achieved_utility = (reply.item_id == target ? 8.0 : 0.0) - d_r;
                rec.steps_total = d_r;
                rec.behavior = reply.item_id == target ? BehaviorClass::SuccessfulComm
                                                       : BehaviorClass::UnsuccessfulComm;
            } else {
                rec.achieved_utility = 0.0;
                rec.behavior = BehaviorClass::UnsuccessfulComm;
            }
            break;
        }

        case TurnAction::Kind::Pass:
            throw ConfigError("signaler policies never pass");
    }

    rec.pct_optimal = rec.cc_utility > 0.0
                          ? rec.achieved_utility / rec.cc_utility
                          : std::numeric_limits<double>::quiet_NaN();
    return rec;
}

bool is_comm_optimal(const Trial& trial) {
    const CCPlan plan = cc_solve(trial);
    return plan.actor == Agent::Receiver && plan.utility > 0.0;
}

// ---------------------------------------------------------------------------
// Trial generation
// ---------------------------------------------------------------------------

std::vector<Trial> sample_trials(const GridSpec& grid, int n_items, int count,
                                 const RandomStream& base) {
    if (count < 0) throw ConfigError("trial count must be non-negative");
    std::vector<Trial> trials;
    trials.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        RandomStream stream = base.derive(static_cast<uint64_t>(i));
        trials.push_back(sample_trial(stream, grid, n_items));
    }
    return trials;
}

std::vector<Trial> generate_comm_optimal_trials(const GridSpec& grid, int n_items, int count,
                                                const RandomStream& base, FilterMode mode) {
    if (count < 0) throw ConfigError("trial count must be non-negative");
    std::vector<Trial> kept;
    kept.reserve(static_cast<size_t>(count));

    if (mode == FilterMode::PostFilter) {
        for (int i = 0; i < count; ++i) {
            RandomStream stream = base.derive(static_cast<uint64_t>(i));
            Trial candidate = sample_trial(stream, grid, n_items);
            if (is_comm_optimal(candidate)) kept.push_back(std::move(candidate));
        }
        return kept;
    }

    // At the default geometry roughly a third of candidates pass, so this cap
    // only trips on geometries where the filter is effectively unsatisfiable.
    const long long max_candidates = 400LL * count + 4000;
    for (long long i = 0; static_cast<int>(kept.size()) < count; ++i) {
        if (i >= max_candidates) {
            throw InsufficientData("communication-optimal trials are too rare on this grid (" +
                                   std::to_string(kept.size()) + "/" + std::to_string(count) +
                                   " after " + std::to_string(i) + " candidates)");
        }
        RandomStream stream = base.derive(static_cast<uint64_t>(i));
        Trial candidate = sample_trial(stream, grid, n_items);
        if (is_comm_optimal(candidate)) kept.push_back(std::move(candidate));
    }
    return kept;
}

// ---------------------------------------------------------------------------
// Batch execution
// ---------------------------------------------------------------------------

namespace {

template <typename Fn>
void parallel_for(size_t total, int workers, const Fn& fn) {
    int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    if (static_cast<size_t>(n_workers) > total) n_workers = static_cast<int>(total);
    if (n_workers <= 1) {
        for (size_t i = 0; i < total; ++i) fn(i);
        return;
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto drain = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= total) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(drain);
    for (auto& thread : pool) thread.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<TrialRecord> run_batch(const std::vector<Trial>& trials,
                                   const std::vector<ModelParams>& params_list,
                                   uint64_t master_seed, long long first_trial_id, int workers) {
    if (params_list.empty()) throw ConfigError("run_batch needs at least one model");
    const size_t n_models = params_list.size();
    std::vector<TrialRecord> records(trials.size() * n_models);
    parallel_for(records.size(), workers, [&](size_t slot) {
        const size_t t = slot / n_models;
        const ModelParams& params = params_list[slot % n_models];
        const long long trial_id = first_trial_id + static_cast<long long>(t);
        RandomStream rng = RandomStream(master_seed)
                               .derive(tags::kRollout, static_cast<uint64_t>(trial_id),
                                       static_cast<uint64_t>(params.model),
                                       static_cast<uint64_t>(params.signaler_level),
                                       static_cast<uint64_t>(params.receiver_level));
        records[slot] = rollout(trials[t], trial_id, params, rng);
    });
    return records;
}

std::vector<TrialRecord> run_sim1(const Sim1Config& config) {
    if (config.n_per_condition < 1) throw ConfigError("sim1 needs at least one trial per condition");
    const GridSpec grid = default_grid(BarrierCondition::RB);
    std::vector<ModelParams> models;
    for (Model m : {Model::IW, Model::ARSA, Model::JU, Model::SELF}) {
        models.emplace_back(m, config.beta, config.signaler_level, config.receiver_level);
    }

    std::vector<TrialRecord> all;
    all.reserve(static_cast<size_t>(config.n_per_condition) * 8 * models.size());
    long long next_trial_id = 0;
    for (int n_items = 2; n_items <= 9; ++n_items) {
        const RandomStream base =
            RandomStream(config.master_seed)
                .derive(tags::kTrials, static_cast<uint64_t>(grid.condition()),
                        static_cast<uint64_t>(n_items));
        const std::vector<Trial> trials = generate_comm_optimal_trials(
            grid, n_items, config.n_per_condition, base, config.filter_mode);
        std::vector<TrialRecord> block =
            run_batch(trials, models, config.master_seed, next_trial_id, config.workers);
        next_trial_id += static_cast<long long>(trials.size());
        all.insert(all.end(), std::make_move_iterator(block.begin()),
                   std::make_move_iterator(block.end()));
    }
    return all;
}

std::vector<TrialRecord> run_sim2(const Sim2Config& config) {
    if (config.n_per_cell < 1) throw ConfigError("sim2 needs at least one trial per cell");
    constexpr int kNItems = 6;
    std::vector<ModelParams> cells;
    for (Model m : {Model::IW, Model::ARSA}) {
        for (int s = 1; s <= 2; ++s) {
            for (int r = 0; r <= 2; ++r) cells.emplace_back(m, config.beta, s, r);
        }
    }

    std::vector<TrialRecord> all;
    all.reserve(static_cast<size_t>(config.n_per_cell) * 2 * cells.size());
    long long next_trial_id = 0;
    for (BarrierCondition condition : {BarrierCondition::RB, BarrierCondition::SB}) {
        const GridSpec grid = default_grid(condition);
        const RandomStream base =
            RandomStream(config.master_seed)
                .derive(tags::kTrials, static_cast<uint64_t>(condition),
                        static_cast<uint64_t>(kNItems));
        const std::vector<Trial> trials = generate_comm_optimal_trials(
            grid, kNItems, config.n_per_cell, base, config.filter_mode);
        std::vector<TrialRecord> block =
            run_batch(trials, cells, config.master_seed, next_trial_id, config.workers);
        next_trial_id += static_cast<long long>(trials.size());
        all.insert(all.end(), std::make_move_iterator(block.begin()),
                   std::make_move_iterator(block.end()));
    }
    return all;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records, int resamples,
                                  uint64_t master_seed) {
    if (records.empty()) throw EmptyGroup("no records to summarize");
    using Key = std::tuple<int, int, int, int, int>;  // barrier, model, s, r, n_items
    std::map<Key, std::vector<const TrialRecord*>> groups;
    for (const TrialRecord& rec : records) {
        groups[Key{static_cast<int>(rec.barrier), static_cast<int>(rec.model), rec.s_level,
                   rec.r_level, rec.n_items}]
            .push_back(&rec);
    }

    std::vector<SummaryRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, members] : groups) {
        SummaryRow row;
        row.barrier = static_cast<BarrierCondition>(std::get<0>(key));
        row.model = static_cast<Model>(std::get<1>(key));
        row.s_level = std::get<2>(key);
        row.r_level = std::get<3>(key);
        row.n_items = std::get<4>(key);
        row.n = static_cast<int>(members.size());

        std::vector<double> pcts;
        pcts.reserve(members.size());
        int n_success = 0, n_unsuccess = 0, n_does = 0, n_quit = 0;
        for (const TrialRecord* rec : members) {
            if (std::isfinite(rec->pct_optimal)) pcts.push_back(rec->pct_optimal);
            switch (rec->behavior) {
                case BehaviorClass::SuccessfulComm: ++n_success; break;
                case BehaviorClass::UnsuccessfulComm: ++n_unsuccess; break;
                case BehaviorClass::SignalerDoes:
                case BehaviorClass::SignalerErrs: ++n_does; break;
                case BehaviorClass::Quit: ++n_quit; break;
            }
        }
        if (pcts.empty()) {
            row.mean_pct = row.ci_low = row.ci_high = std::numeric_limits<double>::quiet_NaN();
        } else {
            RandomStream rng =
                RandomStream(master_seed)
                    .derive(tags::kSummary, static_cast<uint64_t>(std::get<0>(key)),
                            static_cast<uint64_t>(std::get<1>(key)),
                            static_cast<uint64_t>(std::get<2>(key)),
                            static_cast<uint64_t>(std::get<3>(key)),
                            static_cast<uint64_t>(std::get<4>(key)));
            const MeanCI ci = bootstrap_mean_ci(pcts, resamples, rng);
            row.mean_pct = ci.mean;
            row.ci_low = ci.lo;
            row.ci_high = ci.hi;
        }
        const double n = static_cast<double>(members.size());
        row.p_success = n_success / n;
        row.p_unsuccess = n_unsuccess / n;
        row.p_does = n_does / n;
        row.p_quit = n_quit / n;
        rows.push_back(row);
    }
    return rows;
}

std::vector<RbSbTest> compare_rb_sb(const std::vector<TrialRecord>& records,
                                    uint64_t master_seed) {
    using Key = std::tuple<int, int, int>;  // model, s, r
    std::map<Key, std::array<std::vector<double>, 2>> cells;
    for (const TrialRecord& rec : records) {
        if (rec.barrier == BarrierCondition::Custom) continue;
        const size_t side = rec.barrier == BarrierCondition::RB ? 0 : 1;
        cells[Key{static_cast<int>(rec.model), rec.s_level, rec.r_level}][side].push_back(
            rec.achieved_utility);
    }
    if (cells.empty()) {
        throw InsufficientData("barrier comparison needs records from the RB/SB conditions");
    }

    std::vector<RbSbTest> tests;
    tests.reserve(cells.size());
    for (const auto& [key, sides] : cells) {
        const std::vector<double>& rb = sides[0];
        const std::vector<double>& sb = sides[1];
        if (rb.empty() || sb.empty()) {
            throw InsufficientData(
                "barrier comparison for model " +
                model_name(static_cast<Model>(std::get<0>(key))) + " levels (" +
                std::to_string(std::get<1>(key)) + "," + std::to_string(std::get<2>(key)) +
                ") lacks one condition");
        }
        RbSbTest test;
        test.model = static_cast<Model>(std::get<0>(key));
        test.s_level = std::get<1>(key);
        test.r_level = std::get<2>(key);
        test.n_rb = static_cast<int>(rb.size());
        test.n_sb = static_cast<int>(sb.size());
        test.mean_rb = mean_of(rb);
        test.mean_sb = mean_of(sb);
        RandomStream rng = RandomStream(master_seed)
                               .derive(tags::kPermutation, static_cast<uint64_t>(std::get<0>(key)),
                                       static_cast<uint64_t>(std::get<1>(key)),
                                       static_cast<uint64_t>(std::get<2>(key)));
        test.p_raw = permutation_p_value(rb, sb, 10000, rng);
        tests.push_back(test);
    }

    // Holm adjustment runs separately within each model's set of level pairs.
    size_t start = 0;
    while (start < tests.size()) {
        size_t stop = start;
        while (stop < tests.size() && tests[stop].model == tests[start].model) ++stop;
        std::vector<double> raw;
        raw.reserve(stop - start);
        for (size_t i = start; i < stop; ++i) raw.push_back(tests[i].p_raw);
        const std::vector<double> adjusted = holm_adjust(raw);
        for (size_t i = start; i < stop; ++i) tests[i].p_holm = adjusted[i - start];
        start = stop;
    }
    return tests;
}

}  // namespace coopsig
