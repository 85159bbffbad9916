#include <cmath>

#include "coopsig/agents.h"
#include "coopsig/errors.h"
#include "coopsig/planning.h"
#include "doctest.h"
#include "micro_oracle.h"

using namespace coopsig;

namespace {

ModelParams params_for(Model m, double beta, int s_level, int r_level) {
    return ModelParams(m, beta, s_level, r_level);
}

double total_mass(const TurnPolicy& policy) {
    double total = 0.0;
    for (const auto& [action, p] : policy.entries) {
        REQUIRE(p >= 0.0);
        total += p;
    }
    return total;
}

}  // namespace

TEST_CASE("model names round-trip") {
    for (Model m : {Model::IW, Model::ARSA, Model::JU, Model::SELF}) {
        CHECK(model_from_name(model_name(m)) == m);
    }
    CHECK(model_name(Model::IW) == "iw");
    CHECK(model_name(Model::ARSA) == "arsa");
    CHECK_THROWS_AS(model_from_name("oracle"), ConfigError);
}

TEST_CASE("model parameter validation") {
    CHECK_NOTHROW(ModelParams(Model::IW, 0.0, 1, 0));
    CHECK_NOTHROW(ModelParams(Model::IW, 50.0, 2, 2));
    CHECK_THROWS_AS(ModelParams(Model::IW, -1.0, 1, 1), ConfigError);
    CHECK_THROWS_AS(ModelParams(Model::IW, std::nan(""), 1, 1), ConfigError);
    CHECK_THROWS_AS(ModelParams(Model::IW, 4.0, 0, 1), ConfigError);
    CHECK_THROWS_AS(ModelParams(Model::IW, 4.0, 3, 1), ConfigError);
    CHECK_THROWS_AS(ModelParams(Model::IW, 4.0, 1, 3), ConfigError);
    CHECK_THROWS_AS(ModelParams(Model::IW, 4.0, 1, -1), ConfigError);
}

TEST_CASE("turn policy sampling and mode") {
    TurnPolicy policy;
    policy.entries = {{TurnAction::go_to(0), 0.25},
                      {TurnAction::go_to(1), 0.5},
                      {TurnAction::pass(), 0.25}};
    CHECK(policy.mode() == TurnAction::go_to(1));
    CHECK(policy.prob_of(TurnAction::go_to(1)) == doctest::Approx(0.5));
    CHECK(policy.prob_of(TurnAction::quit()) == 0.0);

    RandomStream rng(99);
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < 20000; ++i) {
        const TurnAction a = policy.sample(rng);
        if (a == TurnAction::go_to(0)) ++counts[0];
        if (a == TurnAction::go_to(1)) ++counts[1];
        if (a == TurnAction::pass()) ++counts[2];
    }
    CHECK(counts[0] + counts[1] + counts[2] == 20000);
    CHECK(counts[0] == doctest::Approx(5000).epsilon(0.05));
    CHECK(counts[1] == doctest::Approx(10000).epsilon(0.05));

    const TurnPolicy empty;
    RandomStream rng2(1);
    CHECK_THROWS_AS(empty.sample(rng2), EmptyChoiceSet);
    CHECK_THROWS_AS(empty.mode(), EmptyChoiceSet);
}

TEST_CASE("receiver plan for a known goal") {
    const Trial trial = micro::make_trial(0);
    const ModelParams p = params_for(Model::IW, 4.0, 1, 1);
    const TurnPolicy plan = receiver_goal_policy(trial, 0, p);
    REQUIRE(plan.entries.size() == 4);
    CHECK(plan.entries[0].first == TurnAction::go_to(0));
    CHECK(plan.entries[3].first == TurnAction::pass());
    CHECK(plan.entries[0].second == doctest::Approx(0.999999999962236).epsilon(1e-12));
    CHECK(plan.entries[1].second == doctest::Approx(1.4251640826871152e-21).epsilon(1e-3));
    CHECK(plan.entries[2].second == doctest::Approx(1.2664165548615925e-14).epsilon(1e-3));
    CHECK(plan.entries[3].second == doctest::Approx(3.775134544136534e-11).epsilon(1e-6));

    const std::array<double, 4> ref = micro::goal_plan(0, 4.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(plan.entries[static_cast<size_t>(i)].second ==
              doctest::Approx(ref[static_cast<size_t>(i)]).epsilon(1e-9));
    }
}

TEST_CASE("cooperative send weight") {
    const Trial trial = micro::make_trial(0);
    CHECK(cooperative_send_weight(trial, 0, 4.0) ==
          doctest::Approx(0.9999998874270866).epsilon(1e-12));
    CHECK(cooperative_send_weight(trial, 1, 4.0) ==
          doctest::Approx(1.1253516205084663e-07).epsilon(1e-6));
    CHECK(cooperative_send_weight(trial, 2, 4.0) ==
          doctest::Approx(0.4999999999905622).epsilon(1e-12));
    for (int g = 0; g < 3; ++g) {
        CHECK(cooperative_send_weight(trial, g, 4.0) ==
              doctest::Approx(micro::coop_send_weight(g, 4.0)).epsilon(1e-12));
    }
}

TEST_CASE("joint-goal posterior") {
    const Trial trial = micro::make_trial(0);
    const double beta = 4.0;
    const ModelParams p = params_for(Model::IW, beta, 1, 1);

    SUBCASE("level 0 frozen values") {
        const GoalBelief red = iw_goal_posterior(trial, Feature::Red, 0, p);
        CHECK(red.at(0) == doctest::Approx(0.9999998874648379).epsilon(1e-12));
        CHECK(red.at(1) == doctest::Approx(1.12535162055095e-07).epsilon(1e-6));
        CHECK(red.at(2) == 0.0);
        const GoalBelief circle = iw_goal_posterior(trial, Feature::Circle, 0, p);
        CHECK(circle.at(0) == doctest::Approx(0.6666666416546564).epsilon(1e-12));
        CHECK(circle.at(1) == 0.0);
        CHECK(circle.at(2) == doctest::Approx(0.3333333583453436).epsilon(1e-12));
    }
    SUBCASE("level 1 frozen values") {
        const GoalBelief circle = iw_goal_posterior(trial, Feature::Circle, 1, p);
        CHECK(circle.at(0) == doctest::Approx(0.9999883453565807).epsilon(1e-9));
        CHECK(circle.at(2) == doctest::Approx(1.1654643419289696e-05).epsilon(1e-6));
        const GoalBelief red = iw_goal_posterior(trial, Feature::Red, 1, p);
        CHECK(red.at(0) == doctest::Approx(0.9999999999999873).epsilon(1e-12));
        CHECK(red.at(1) == doctest::Approx(1.2698549723310223e-14).epsilon(1e-3));
    }
    SUBCASE("level 2 frozen values") {
        const GoalBelief red = iw_goal_posterior(trial, Feature::Red, 2, p);
        CHECK(red.at(0) == doctest::Approx(0.9999999999999747).epsilon(1e-12));
        CHECK(red.at(1) == doctest::Approx(2.5391726849570156e-14).epsilon(1e-3));
    }
    SUBCASE("matches the brute-force reference at every level") {
        for (double b : {1.7, 4.0}) {
            const ModelParams q = params_for(Model::IW, b, 1, 1);
            for (int level = 0; level <= 2; ++level) {
                for (int f : {0, 1, 3, 4}) {  // circle, triangle, red, green
                    const GoalBelief lib = iw_goal_posterior(trial, feature_at(f), level, q);
                    const std::array<double, 3> ref = micro::iw_posterior(level, f, b);
                    for (int x = 0; x < 3; ++x) {
                        CHECK(lib.at(x) == doctest::Approx(ref[x]).epsilon(1e-9));
                    }
                }
            }
        }
    }
    SUBCASE("send-conditioned likelihood equals renormalizing the full policy") {
        // The posterior's likelihood is computed as a soft-max over the two
        // send options alone; conditioning the full signaler policy on Send
        // must agree (same normalizer cancels).
        for (int level = 1; level <= 2; ++level) {
            for (int g = 0; g < 3; ++g) {
                const TurnPolicy full = iw_signaler_policy(trial, g, level, p);
                double send_total = 0.0;
                for (const auto& [action, prob] : full.entries) {
                    if (action.kind == TurnAction::Kind::Send) send_total += prob;
                }
                const auto features = true_features(trial.item(g));
                const std::vector<double> direct =
                    softmax({iw_signal_utility(trial, features[0], g, level, p),
                             iw_signal_utility(trial, features[1], g, level, p)},
                            p.beta);
                for (int i = 0; i < 2; ++i) {
                    const double conditioned =
                        full.prob_of(TurnAction::send(features[static_cast<size_t>(i)])) /
                        send_total;
                    CHECK(conditioned ==
                          doctest::Approx(direct[static_cast<size_t>(i)]).epsilon(1e-12));
                }
            }
        }
    }
    SUBCASE("posterior stays normalized at extreme rationality") {
        const ModelParams extreme = params_for(Model::IW, 50.0, 2, 2);
        for (int level = 0; level <= 2; ++level) {
            const GoalBelief belief = iw_goal_posterior(trial, Feature::Red, level, extreme);
            double total = 0.0;
            for (double v : belief.prob) {
                CHECK(std::isfinite(v));
                total += v;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("no consistent goal") {
        CHECK_THROWS_AS(iw_goal_posterior(trial, Feature::Purple, 0, p), NoConsistentReferent);
    }
}

TEST_CASE("joint-goal receiver mixture") {
    const Trial trial = micro::make_trial(0);
    const ModelParams p = params_for(Model::IW, 4.0, 1, 1);

    const TurnPolicy dist = iw_receiver_action_dist(trial, Feature::Red, 0, p);
    REQUIRE(dist.entries.size() == 4);
    CHECK(dist.entries[0].second == doctest::Approx(0.9999998874270866).epsilon(1e-12));
    CHECK(dist.entries[1].second == doctest::Approx(1.124973980624815e-07).epsilon(1e-6));
    CHECK(dist.entries[2].second == doctest::Approx(2.532407846987524e-14).epsilon(1e-3));
    CHECK(dist.entries[3].second == doctest::Approx(7.549001397924607e-11).epsilon(1e-6));

    for (int level = 0; level <= 2; ++level) {
        for (int f : {0, 3}) {
            const TurnPolicy lib = iw_receiver_action_dist(trial, feature_at(f), level, p);
            const std::array<double, 4> ref = micro::iw_action_dist(level, f, 4.0);
            for (int a = 0; a < 4; ++a) {
                CHECK(lib.entries[static_cast<size_t>(a)].second ==
                      doctest::Approx(ref[static_cast<size_t>(a)]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("joint-goal signal utilities") {
    const Trial trial = micro::make_trial(0);
    const ModelParams p = params_for(Model::IW, 4.0, 1, 1);

    CHECK(iw_signal_utility(trial, Feature::Circle, 0, 1, p) ==
          doctest::Approx(3.33333313311138).epsilon(1e-9));
    CHECK(iw_signal_utility(trial, Feature::Red, 0, 1, p) ==
          doctest::Approx(5.999998649578081).epsilon(1e-9));
    CHECK(iw_signal_utility(trial, Feature::Red, 0, 2, p) ==
          doctest::Approx(5.999999999773238).epsilon(1e-9));
    CHECK(iw_signal_utility(trial, Feature::Circle, 0, 2, p) ==
          doctest::Approx(5.999906762626039).epsilon(1e-9));

    for (int level = 1; level <= 2; ++level) {
        for (int g = 0; g < 3; ++g) {
            for (const Feature f : true_features(trial.item(g))) {
                CHECK(iw_signal_utility(trial, f, g, level, p) ==
                      doctest::Approx(micro::iw_signal_utility(level, static_cast<int>(f), g, 4.0))
                          .epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("joint-goal signaler policy") {
    const Trial trial = micro::make_trial(0);
    const ModelParams p = params_for(Model::IW, 4.0, 1, 1);

    const TurnPolicy policy = iw_signaler_policy(trial, 0, 1, p);
    REQUIRE(policy.entries.size() == 6);  // 2 sends, 3 walks, quit
    CHECK(policy.entries[0].first == TurnAction::send(Feature::Circle));
    CHECK(policy.entries[1].first == TurnAction::send(Feature::Red));
    CHECK(policy.entries[5].first == TurnAction::quit());
    CHECK(policy.prob_of(TurnAction::send(Feature::Red)) ==
          doctest::Approx(0.9999765787666237).epsilon(1e-9));
    CHECK(policy.prob_of(TurnAction::send(Feature::Circle)) ==
          doctest::Approx(2.3308662453283666e-05).epsilon(1e-6));
    CHECK(policy.prob_of(TurnAction::go_to(0)) ==
          doctest::Approx(1.1253314687393991e-07).epsilon(1e-6));
    CHECK(policy.prob_of(TurnAction::quit()) ==
          doctest::Approx(3.7750665176471224e-11).epsilon(1e-6));

    SUBCASE("high rationality modes") {
        const ModelParams sharp = params_for(Model::IW, 500.0, 1, 1);
        // Goal A: asking with the shared color still beats walking 6 steps.
        CHECK(iw_signaler_policy(trial, 0, 1, sharp).mode() == TurnAction::send(Feature::Red));
        // Goal B: the signaler is 2 steps away and just does it.
        CHECK(iw_signaler_policy(trial, 1, 1, sharp).mode() == TurnAction::go_to(1));
    }
}

TEST_CASE("signal-free joint-goal turn after a wrong walk") {
    const Trial trial = micro::make_trial(0);
    const ModelParams p = params_for(Model::IW, 4.0, 1, 1);

    const GoalBelief belief = iw_signal_free_posterior(trial, 1, p);
    CHECK(belief.at(1) == 0.0);
    // Renormalized cooperative weights over the remaining goals.
    const double wa = micro::coop_send_weight(0, 4.0);
    const double wc = micro::coop_send_weight(2, 4.0);
    CHECK(belief.at(0) == doctest::Approx(wa / (wa + wc)).epsilon(1e-12));
    CHECK(belief.at(2) == doctest::Approx(wc / (wa + wc)).epsilon(1e-12));

    const TurnPolicy dist = iw_signal_free_action_dist(trial, 1, p);
    CHECK(total_mass(dist) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist.mode() == TurnAction::go_to(0));
}

TEST_CASE("acting-pragmatics signal utilities are listener expectations") {
    const Trial trial = micro::make_trial(0);
    const ModelParams p = params_for(Model::ARSA, 4.0, 1, 1);

    CHECK(arsa_signal_utility(trial, Feature::Red, 0, 1, p) == doctest::Approx(0.0));
    CHECK(arsa_signal_utility(trial, Feature::Circle, 0, 1, p) == doctest::Approx(2.0));
    CHECK(arsa_signal_utility(trial, Feature::Red, 0, 2, p) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(arsa_signal_utility(trial, Feature::Circle, 0, 2, p) ==
          doctest::Approx(5.999999099416794).epsilon(1e-9));

    for (int level = 1; level <= 2; ++level) {
        for (int g = 0; g < 3; ++g) {
            for (const Feature f : true_features(trial.item(g))) {
                CHECK(arsa_signal_utility(trial, f, g, level, p) ==
                      doctest::Approx(
                          micro::arsa_signal_utility(level, static_cast<int>(f), g, 4.0))
                          .epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("acting-pragmatics policies") {
    const Trial trial = micro::make_trial(0);
    const ModelParams p = params_for(Model::ARSA, 4.0, 1, 1);

    SUBCASE("receiver equals the listener distribution") {
        for (int level = 0; level <= 2; ++level) {
            const TurnPolicy policy = arsa_receiver_policy(trial, Feature::Circle, level, p);
            const ReferentDistribution listener = rsa_listener(level, trial, Feature::Circle, 4.0);
            CHECK(total_mass(policy) == doctest::Approx(1.0).epsilon(1e-12));
            for (const auto& [action, prob] : policy.entries) {
                REQUIRE(action.kind == TurnAction::Kind::GoTo);
                CHECK(prob == doctest::Approx(listener.at(action.item_id)).epsilon(1e-12));
            }
        }
    }
    SUBCASE("wrong-goal item keeps zero mass") {
        const TurnPolicy policy = arsa_receiver_policy(trial, Feature::Red, 0, p);
        CHECK(policy.prob_of(TurnAction::go_to(2)) == 0.0);
        CHECK(policy.prob_of(TurnAction::pass()) == 0.0);
    }
    SUBCASE("signaler tie-break at high rationality") {
        // Goal A, level 1: Send("circle") expects utility 2, exactly tying
        // GoTo(A); the send option is enumerated first, so the mode is the
        // signal.
        const ModelParams sharp = params_for(Model::ARSA, 500.0, 1, 1);
        const TurnPolicy policy = arsa_signaler_policy(trial, 0, 1, sharp);
        CHECK(policy.mode() == TurnAction::send(Feature::Circle));
        CHECK(policy.prob_of(TurnAction::send(Feature::Circle)) ==
              doctest::Approx(policy.prob_of(TurnAction::go_to(0))).epsilon(1e-12));
    }
}

TEST_CASE("joint-utility partition and policies") {
    const Trial trial = micro::make_trial(0);
    const ModelParams p = params_for(Model::JU, 4.0, 1, 1);

    SUBCASE("responsibility: receiver only when strictly cheaper") {
        const Responsibility resp = ju_responsibility(trial);
        CHECK(resp.of(0) == Agent::Receiver);   // 2 < 6
        CHECK(resp.of(1) == Agent::Signaler);   // 6 > 2
        CHECK(resp.of(2) == Agent::Signaler);   // tie
    }
    SUBCASE("signaler frozen values") {
        const TurnPolicy policy = ju_signaler_policy(trial, 0, p);
        REQUIRE(policy.entries.size() == 4);
        CHECK(policy.prob_of(TurnAction::send(Feature::Circle)) ==
              doctest::Approx(0.4999999437135433).epsilon(1e-12));
        CHECK(policy.prob_of(TurnAction::send(Feature::Red)) ==
              doctest::Approx(0.4999999437135433).epsilon(1e-12));
        CHECK(policy.prob_of(TurnAction::go_to(0)) ==
              doctest::Approx(1.1253516205084663e-07).epsilon(1e-6));
        CHECK(policy.prob_of(TurnAction::quit()) ==
              doctest::Approx(3.7751341193012034e-11).epsilon(1e-6));
        CHECK(total_mass(policy) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("receiver restricts to her own consistent items") {
        const TurnPolicy red = ju_receiver_policy(trial, Feature::Red, p);
        REQUIRE(red.entries.size() == 1);
        CHECK(red.entries[0].first == TurnAction::go_to(0));
        CHECK(red.entries[0].second == doctest::Approx(1.0));
        const TurnPolicy circle = ju_receiver_policy(trial, Feature::Circle, p);
        REQUIRE(circle.entries.size() == 1);
        CHECK(circle.entries[0].first == TurnAction::go_to(0));
    }
    SUBCASE("falls back to all consistent items when none are hers") {
        const TurnPolicy triangle = ju_receiver_policy(trial, Feature::Triangle, p);
        REQUIRE(triangle.entries.size() == 1);
        CHECK(triangle.entries[0].first == TurnAction::go_to(1));
    }
    SUBCASE("no consistent item throws") {
        CHECK_THROWS_AS(ju_receiver_policy(trial, Feature::Purple, p), NoConsistentReferent);
    }
    SUBCASE("signal-free turn excludes the walked item") {
        // Excluding A leaves {B, C}, neither hers, so the fallback weighs
        // them by 8 minus her steps: 2 vs 6.
        const TurnPolicy policy = ju_receiver_policy_excluding(trial, 0, p);
        REQUIRE(policy.entries.size() == 2);
        CHECK(policy.entries[0].first == TurnAction::go_to(1));
        CHECK(policy.entries[1].first == TurnAction::go_to(2));
        CHECK(policy.entries[1].second == doctest::Approx(0.9999998874648379).epsilon(1e-9));
        // Excluding B keeps her item A in the candidate set.
        const TurnPolicy after_b = ju_receiver_policy_excluding(trial, 1, p);
        REQUIRE(after_b.entries.size() == 1);
        CHECK(after_b.entries[0].first == TurnAction::go_to(0));
    }
}

TEST_CASE("do-for-self walks to the goal with certainty") {
    const Trial trial = micro::make_trial(0);
    const TurnPolicy policy = self_policy(trial, 0);
    REQUIRE(policy.entries.size() == 1);
    CHECK(policy.entries[0].first == TurnAction::go_to(0));
    CHECK(policy.entries[0].second == 1.0);
}

TEST_CASE("symmetric arena: joint-goal posterior reduces to the listener") {
    // Anti-diagonal items are equidistant from both agents, so the
    // cooperative prior is flat and joint-goal inference must coincide with
    // plain pragmatic inference.
    const GridSpec grid(5, 5, {}, Cell{0, 0}, Cell{4, 4}, BarrierCondition::Custom);
    const Trial trial(grid,
                      {Item{0, Cell{0, 4}, Feature::Circle, Feature::Red},
                       Item{1, Cell{2, 2}, Feature::Triangle, Feature::Red},
                       Item{2, Cell{4, 0}, Feature::Circle, Feature::Green}},
                      0, 5);
    for (int x = 0; x < 3; ++x) {
        CHECK(agent_item_cost(trial, Agent::Signaler, x) == 4);
        CHECK(agent_item_cost(trial, Agent::Receiver, x) == 4);
    }
    const ModelParams p = params_for(Model::IW, 4.0, 1, 1);
    const GoalBelief belief = iw_goal_posterior(trial, Feature::Red, 0, p);
    const ReferentDistribution listener = rsa_listener(0, trial, Feature::Red, 4.0);
    for (int x = 0; x < 3; ++x) {
        CHECK(belief.at(x) == doctest::Approx(listener.at(x)).epsilon(1e-12));
    }
}

TEST_CASE("every policy is a distribution on random trials") {
    const GridSpec grid = default_grid(BarrierCondition::SB);
    const RandomStream base(60601);
    for (int t = 0; t < 60; ++t) {
        RandomStream stream = base.derive(static_cast<uint64_t>(t));
        const Trial trial = sample_trial(stream, grid, 2 + t % 8);
        const double beta = (t % 3 == 0) ? 0.0 : (t % 3 == 1 ? 4.0 : 50.0);
        const int goal = trial.target_id();
        const Feature signal = true_features(trial.target())[t % 2];

        for (int s_level : {1, 2}) {
            const ModelParams iw = params_for(Model::IW, beta, s_level, 1);
            CHECK(total_mass(iw_signaler_policy(trial, goal, s_level, iw)) ==
                  doctest::Approx(1.0).epsilon(1e-9));
            const ModelParams arsa = params_for(Model::ARSA, beta, s_level, 1);
            CHECK(total_mass(arsa_signaler_policy(trial, goal, s_level, arsa)) ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
        for (int r_level : {0, 1, 2}) {
            const ModelParams iw = params_for(Model::IW, beta, 1, r_level);
            CHECK(total_mass(iw_receiver_action_dist(trial, signal, r_level, iw)) ==
                  doctest::Approx(1.0).epsilon(1e-9));
            const ModelParams arsa = params_for(Model::ARSA, beta, 1, r_level);
            CHECK(total_mass(arsa_receiver_policy(trial, signal, r_level, arsa)) ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
        const ModelParams ju = params_for(Model::JU, beta, 1, 1);
        CHECK(total_mass(ju_signaler_policy(trial, goal, ju)) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(total_mass(ju_receiver_policy(trial, signal, ju)) ==
              doctest::Approx(1.0).epsilon(1e-9));
        CHECK(total_mass(iw_signal_free_action_dist(trial, goal, params_for(Model::IW, beta, 1, 1))) ==
              doctest::Approx(1.0).epsilon(1e-9));
        CHECK(total_mass(ju_receiver_policy_excluding(trial, goal, ju)) ==
              doctest::Approx(1.0).epsilon(1e-9));

        // Truthfulness: the signaler only ever sends features of her goal.
        const TurnPolicy signaler =
            iw_signaler_policy(trial, goal, 1, params_for(Model::IW, beta, 1, 1));
        for (const auto& [action, prob] : signaler.entries) {
            if (action.kind == TurnAction::Kind::Send && prob > 0.0) {
                CHECK(consistent(action.signal, trial.target()));
            }
        }
    }
}
