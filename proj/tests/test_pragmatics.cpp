#include <cmath>

#include "coopsig/errors.h"
#include "coopsig/pragmatics.h"
#include "doctest.h"
#include "micro_oracle.h"

using namespace coopsig;

namespace {

const Trial& probe(int target) {
    static const Trial trials[] = {micro::make_trial(0), micro::make_trial(1),
                                   micro::make_trial(2)};
    return trials[static_cast<size_t>(target)];
}

}  // namespace

TEST_CASE("true features and consistency") {
    const Trial& trial = probe(0);
    const auto a = true_features(trial.item(0));
    CHECK(a[0] == Feature::Circle);
    CHECK(a[1] == Feature::Red);
    const auto b = true_features(trial.item(1));
    CHECK(b[0] == Feature::Triangle);
    CHECK(b[1] == Feature::Red);

    CHECK(consistent(Feature::Red, trial.item(0)));
    CHECK(consistent(Feature::Red, trial.item(1)));
    CHECK_FALSE(consistent(Feature::Red, trial.item(2)));
    CHECK_FALSE(consistent(Feature::Square, trial.item(0)));
}

TEST_CASE("literal speaker splits evenly over the two true features") {
    const SignalDistribution dist = literal_speaker(probe(0), 0);
    CHECK(dist.at(Feature::Circle) == doctest::Approx(0.5));
    CHECK(dist.at(Feature::Red) == doctest::Approx(0.5));
    CHECK(dist.at(Feature::Triangle) == 0.0);
    CHECK(dist.at(Feature::Green) == 0.0);
    CHECK(dist.at(Feature::Square) == 0.0);
    CHECK(dist.at(Feature::Purple) == 0.0);
}

TEST_CASE("listener ladder on the probe arena") {
    const Trial& trial = probe(0);
    const double beta = 4.0;

    SUBCASE("level 0 inverts the literal speaker") {
        const ReferentDistribution red = rsa_listener(0, trial, Feature::Red, beta);
        CHECK(red.at(0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(red.at(1) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(red.at(2) == 0.0);
        const ReferentDistribution circle = rsa_listener(0, trial, Feature::Circle, beta);
        CHECK(circle.at(0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(circle.at(2) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("level 1 keeps ambiguity where speakers are symmetric") {
        const ReferentDistribution red = rsa_listener(1, trial, Feature::Red, beta);
        CHECK(red.at(0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(red.at(1) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(red.at(2) == 0.0);
    }
    SUBCASE("level 1 nearly resolves an asymmetric signal") {
        const ReferentDistribution circle = rsa_listener(1, trial, Feature::Circle, beta);
        CHECK(circle.at(0) == doctest::Approx(0.9999998874270992).epsilon(1e-9));
        CHECK(circle.at(1) == 0.0);
        CHECK(circle.at(2) == doctest::Approx(1.1257290072363001e-07).epsilon(1e-6));
    }
    SUBCASE("level 2 sharpens further and reallocates the shared feature") {
        const ReferentDistribution circle = rsa_listener(2, trial, Feature::Circle, beta);
        CHECK(circle.at(0) == doctest::Approx(0.9999999999999873).epsilon(1e-12));
        CHECK(circle.at(2) == doctest::Approx(1.2664211170193376e-14).epsilon(1e-3));
        // At level 2 "red" flips toward the item whose other feature is
        // unambiguous for the other party.
        const ReferentDistribution red = rsa_listener(2, trial, Feature::Red, beta);
        CHECK(red.at(0) == doctest::Approx(1.1257331891357568e-07).epsilon(1e-6));
        CHECK(red.at(1) == doctest::Approx(0.9999998874266811).epsilon(1e-9));
    }
    SUBCASE("no consistent referent") {
        CHECK_THROWS_AS(rsa_listener(0, trial, Feature::Purple, beta), NoConsistentReferent);
        CHECK_THROWS_AS(rsa_listener(1, trial, Feature::Square, beta), NoConsistentReferent);
    }
    SUBCASE("invalid level") {
        CHECK_THROWS_AS(rsa_listener(3, trial, Feature::Red, beta), ConfigError);
    }
}

TEST_CASE("speaker ladder on the probe arena") {
    const Trial& trial = probe(0);
    const double beta = 4.0;

    SUBCASE("level-1 expected utilities drive the choice") {
        // Goal A: "circle" sends the level-0 listener to A or C evenly,
        // "red" to A or B evenly.
        const ReferentDistribution circle0 = rsa_listener(0, trial, Feature::Circle, beta);
        CHECK(expected_receiver_utility(trial, circle0, 0) == doctest::Approx(2.0));
        const ReferentDistribution red0 = rsa_listener(0, trial, Feature::Red, beta);
        CHECK(expected_receiver_utility(trial, red0, 0) == doctest::Approx(0.0));

        const SignalDistribution s1 = rsa_speaker(1, trial, 0, beta);
        const double expected_circle = 1.0 / (1.0 + std::exp(-beta * 2.0));
        CHECK(s1.at(Feature::Circle) == doctest::Approx(expected_circle).epsilon(1e-12));
        CHECK(s1.at(Feature::Red) == doctest::Approx(1.0 - expected_circle).epsilon(1e-12));
        CHECK(s1.at(Feature::Triangle) == 0.0);
    }
    SUBCASE("level-2 frozen values") {
        const SignalDistribution s2 = rsa_speaker(2, trial, 0, beta);
        CHECK(s2.at(Feature::Circle) == doctest::Approx(0.9999999999622484).epsilon(1e-9));
        CHECK(s2.at(Feature::Red) == doctest::Approx(3.7751481434521615e-11).epsilon(1e-3));
    }
    SUBCASE("goal C prefers its unshared color") {
        const SignalDistribution s1 = rsa_speaker(1, trial, 2, beta);
        CHECK(s1.at(Feature::Green) > s1.at(Feature::Circle));
        const ReferentDistribution green0 = rsa_listener(0, trial, Feature::Green, beta);
        CHECK(expected_receiver_utility(trial, green0, 2) == doctest::Approx(6.0));
    }
    SUBCASE("invalid level") {
        CHECK_THROWS_AS(rsa_speaker(0, trial, 0, beta), ConfigError);
        CHECK_THROWS_AS(rsa_speaker(3, trial, 0, beta), ConfigError);
    }
}

TEST_CASE("library ladder matches the brute-force reference") {
    for (double beta : {1.7, 4.0}) {
        for (int target = 0; target < 3; ++target) {
            const Trial& trial = probe(target);
            for (int level = 0; level <= 2; ++level) {
                for (int f = 0; f < micro::kSignals; ++f) {
                    const Feature signal = feature_at(f);
                    bool any = false;
                    for (int x = 0; x < 3; ++x) any = any || micro::kTruth[x][f];
                    if (!any) continue;
                    const ReferentDistribution lib = rsa_listener(level, trial, signal, beta);
                    const std::array<double, 3> ref = micro::rsa_listener(level, f, beta);
                    for (int x = 0; x < 3; ++x) {
                        CHECK(lib.at(x) == doctest::Approx(ref[x]).epsilon(1e-9));
                    }
                }
            }
            for (int level = 1; level <= 2; ++level) {
                const SignalDistribution lib = rsa_speaker(level, trial, target, beta);
                const std::array<double, 6> ref = micro::rsa_speaker(level, target, beta);
                for (int f = 0; f < micro::kSignals; ++f) {
                    CHECK(lib.at(feature_at(f)) == doctest::Approx(ref[f]).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("ladder distributions stay normalized and truthful on random trials") {
    const GridSpec grid = default_grid(BarrierCondition::RB);
    const RandomStream base(8080);
    for (int t = 0; t < 200; ++t) {
        RandomStream stream = base.derive(static_cast<uint64_t>(t));
        const Trial trial = sample_trial(stream, grid, 2 + t % 8);
        const double beta = (t % 3 == 0) ? 0.0 : (t % 3 == 1 ? 4.0 : 50.0);

        for (int level = 1; level <= 2; ++level) {
            for (int g = 0; g < trial.num_items(); ++g) {
                const SignalDistribution speaker = rsa_speaker(level, trial, g, beta);
                double total = 0.0;
                for (int f = 0; f < kNumFeatures; ++f) {
                    const double p = speaker.at(feature_at(f));
                    CHECK(p >= 0.0);
                    total += p;
                    if (p > 0.0) CHECK(consistent(feature_at(f), trial.item(g)));
                }
                CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
        for (int level = 0; level <= 2; ++level) {
            const Feature signal = true_features(trial.target())[t % 2];
            const ReferentDistribution listener = rsa_listener(level, trial, signal, beta);
            double total = 0.0;
            for (int x = 0; x < trial.num_items(); ++x) {
                const double p = listener.at(x);
                CHECK(p >= 0.0);
                total += p;
                if (p > 0.0) CHECK(consistent(signal, trial.item(x)));
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}
