#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qleak/distribution.hpp"
#include "qleak/primitives.hpp"

using namespace qleak;
using test_helpers::random_distribution;

namespace {

JointDistribution uniform_equal_bit() {
    Eigen::MatrixXd m(2, 2);
    m << 0.5, 0.0, 0.0, 0.5;
    return JointDistribution({"0", "1"}, {"0", "1"}, m);
}

JointDistribution independent_bits() {
    Eigen::MatrixXd m(2, 2);
    m << 0.25, 0.25, 0.25, 0.25;
    return JointDistribution({"0", "1"}, {"0", "1"}, m);
}

} // namespace

TEST_CASE("shannon_entropy on simple vectors") {
    CHECK(shannon_entropy(Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shannon_entropy(Eigen::Vector2d(1.0, 0.0)) == doctest::Approx(0.0).epsilon(1e-12));
    // 2 - (3/4) log2 3, evaluated independently of the plogp loop.
    double expected = 2.0 - 0.75 * std::log2(3.0);
    CHECK(shannon_entropy(Eigen::Vector2d(0.25, 0.75)) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("shannon_entropy rejects invalid vectors") {
    CHECK_THROWS_AS(shannon_entropy(Eigen::Vector2d(0.5, 0.6)), NonDistribution);
    CHECK_THROWS_AS(shannon_entropy(Eigen::Vector2d(1.2, -0.2)), NonDistribution);
}

TEST_CASE("binary_entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.25) == doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("mutual_information on reference tables") {
    CHECK(mutual_information(uniform_equal_bit()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mutual_information(independent_bits()) == doctest::Approx(0.0).epsilon(1e-12));
    auto rot1 = build_primitive({PrimitiveKind::rot, 1});
    CHECK(mutual_information(rot1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dependent_part class structure") {
    auto identity = dependent_part(uniform_equal_bit(), Side::alice);
    CHECK(identity.class_count == 2);
    CHECK(identity.class_of.at("0") != identity.class_of.at("1"));

    auto collapsed = dependent_part(independent_bits(), Side::alice);
    CHECK(collapsed.class_count == 1);

    // The four sender rows of randomized 1-2-OT have pairwise distinct
    // conditionals, so nothing collapses.
    auto ot = build_primitive({PrimitiveKind::ot});
    auto dp = dependent_part(ot, Side::alice);
    CHECK(dp.class_count == 4);
}

TEST_CASE("dependent_part quotient marginal is the push-forward") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto d = random_distribution(rng, 4, 3);
        auto dp = dependent_part(d, Side::alice);
        Eigen::VectorXd pushed = Eigen::VectorXd::Zero(dp.class_count);
        Eigen::VectorXd marginal = d.x_marginal();
        for (Eigen::Index x = 0; x < d.x_size(); ++x) {
            pushed(dp.class_of.at(d.x_alphabet()[static_cast<std::size_t>(x)])) += marginal(x);
        }
        CHECK((dp.quotient.x_marginal() - pushed).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("monotone values") {
    CHECK(monotone(uniform_equal_bit(), Side::alice) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(monotone(independent_bits(), Side::alice) == doctest::Approx(0.0).epsilon(1e-12));
    // For 1-2-OT the receiver's output is already fully dependent, so the
    // monotone is H(Y|X) = 1.
    auto ot = build_primitive({PrimitiveKind::ot});
    auto dp = dependent_part(ot, Side::bob);
    CHECK(dp.class_count == 4);
    CHECK(monotone(ot, Side::bob) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("is_trivial classification") {
    CHECK(is_trivial(uniform_equal_bit()));
    CHECK(is_trivial(independent_bits()));
    CHECK_FALSE(is_trivial(build_primitive({PrimitiveKind::ot})));
    // Channel noise does not erase the dependency between the pair and the
    // received bit: all four conditionals P(Y|X=x) stay distinct, so both
    // monotones are strictly positive.
    CHECK_FALSE(is_trivial(build_primitive({PrimitiveKind::ot_noisy, 0, 0.25})));
}

TEST_CASE("condition_on splits composite symbols") {
    auto ot = build_primitive({PrimitiveKind::ot});
    // Condition on the receiver's selection part c = 0; kept part is y.
    SymbolProjection split_y = [](const std::string& s) {
        auto comma = s.find(',');
        return SymbolSplit{s.substr(comma + 1), s.substr(0, comma)};
    };
    auto conditioned = condition_on(ot, keep_all(), split_y, "", "0");
    CHECK(conditioned.x_size() == 4);
    CHECK(conditioned.y_size() == 2);
    // Given c = 0, Bob's output equals x0: mass 1/4 whenever y matches the
    // first bit of (x0, x1).
    for (Eigen::Index x = 0; x < 4; ++x) {
        for (Eigen::Index y = 0; y < 2; ++y) {
            double expected = conditioned.x_alphabet()[static_cast<std::size_t>(x)][0] ==
                                      conditioned.y_alphabet()[static_cast<std::size_t>(y)][0]
                                  ? 0.25
                                  : 0.0;
            CHECK(conditioned.prob(x, y) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("condition_on rejects zero-probability events") {
    auto d = uniform_equal_bit();
    CHECK_THROWS_AS(condition_on(d, keep_all(), keep_all(), "0", "2"), ZeroProbabilityEvent);
}

TEST_CASE("condition_on with a point event") {
    SymbolProjection whole_as_condition = [](const std::string& s) {
        return SymbolSplit{"*", s};
    };
    auto conditioned =
        condition_on(independent_bits(), keep_all(), whole_as_condition, "", "0");
    CHECK(conditioned.y_size() == 1);
    CHECK(conditioned.prob(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(conditioned.prob(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("equivalent_up_to_relabeling basics") {
    Eigen::MatrixXd a(2, 2), b(2, 2);
    a << 0.1, 0.3, 0.4, 0.2;
    b << 0.4, 0.2, 0.1, 0.3; // rows swapped
    JointDistribution d1({"0", "1"}, {"0", "1"}, a);
    JointDistribution d2({"0", "1"}, {"0", "1"}, b);
    CHECK(equivalent_up_to_relabeling(d1, d2));

    Eigen::MatrixXd point = Eigen::MatrixXd::Zero(2, 2);
    point(0, 0) = 1.0;
    CHECK_FALSE(equivalent_up_to_relabeling(independent_bits(),
                                            JointDistribution({"0", "1"}, {"0", "1"}, point)));
}

TEST_CASE("equivalent_up_to_relabeling survives an explicit permutation") {
    auto rot1 = build_primitive({PrimitiveKind::rot, 1});
    // Flip the sender's bit and permute the receiver's non-erasure symbols
    // accordingly; the matrix is the same table up to relabeling.
    Eigen::MatrixXd m = rot1.probs();
    Eigen::MatrixXd flipped(2, 3);
    flipped.row(0) = m.row(1);
    flipped.row(1) = m.row(0);
    flipped.col(0).swap(flipped.col(1));
    JointDistribution relabeled(rot1.x_alphabet(), rot1.y_alphabet(), flipped);
    CHECK(equivalent_up_to_relabeling(rot1, relabeled));
}

TEST_CASE("equivalent_up_to_relabeling rejects oversized alphabets") {
    std::mt19937_64 rng(3);
    auto big = random_distribution(rng, 9, 2);
    CHECK_THROWS_AS(equivalent_up_to_relabeling(big, big), AlphabetTooLarge);
}

TEST_CASE("mutual information bounds on random tables") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = random_distribution(rng, 2 + trial % 3, 2 + (trial / 3) % 3);
        double info = mutual_information(d);
        CHECK(info >= -1e-9);
        CHECK(info <= std::min(shannon_entropy(d.x_marginal()),
                               shannon_entropy(d.y_marginal())) +
                          1e-9);
    }
}

TEST_CASE("mutual information is preserved by the dependent-part quotient") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto d = random_distribution(rng, 4, 4);
        auto both = dependent_part(dependent_part(d, Side::alice).quotient, Side::bob);
        CHECK(mutual_information(both.quotient) ==
              doctest::Approx(mutual_information(d)).epsilon(1e-9));
    }
}

TEST_CASE("dependent_part is idempotent") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        // Duplicate a row so something actually collapses.
        auto d = random_distribution(rng, 3, 3);
        Eigen::MatrixXd m(4, 3);
        m.topRows(3) = d.probs();
        m.row(3) = d.probs().row(0);
        m /= m.sum();
        JointDistribution dup(test_helpers::symbols("x", 4), d.y_alphabet(), m);

        auto once = dependent_part(dup, Side::alice);
        auto twice = dependent_part(once.quotient, Side::alice);
        CHECK(once.class_count == 3);
        CHECK(twice.class_count == once.class_count);
    }
}

TEST_CASE("the two monotones vanish together") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 60; ++trial) {
        auto d = trial % 2 == 0 ? random_distribution(rng, 3, 3)
                                : test_helpers::random_trivial(rng, 3, 4);
        bool alice_positive = monotone(d, Side::alice) > 1e-9;
        bool bob_positive = monotone(d, Side::bob) > 1e-9;
        CHECK(alice_positive == bob_positive);
    }
}

TEST_CASE("relabeling equivalence is an equivalence relation") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_distribution(rng, 3, 3);
        // b: a with rows cycled; c: b with columns cycled.
        Eigen::MatrixXd mb(3, 3), mc(3, 3);
        for (int i = 0; i < 3; ++i) mb.row(i) = a.probs().row((i + 1) % 3);
        for (int j = 0; j < 3; ++j) mc.col(j) = mb.col((j + 2) % 3);
        JointDistribution b(a.x_alphabet(), a.y_alphabet(), mb);
        JointDistribution c(a.x_alphabet(), a.y_alphabet(), mc);

        CHECK(equivalent_up_to_relabeling(a, a)); // reflexive
        CHECK(equivalent_up_to_relabeling(a, b));
        CHECK(equivalent_up_to_relabeling(b, a)); // symmetric
        CHECK(equivalent_up_to_relabeling(b, c));
        CHECK(equivalent_up_to_relabeling(a, c)); // transitive
    }
}

TEST_CASE("constructor validation") {
    Eigen::MatrixXd m(2, 2);
    m << 0.5, 0.5, 0.1, 0.0;
    CHECK_THROWS_AS(JointDistribution({"0", "1"}, {"0", "1"}, m), NonDistribution);
    m << 0.5, 0.5, -0.1, 0.1;
    CHECK_THROWS_AS(JointDistribution({"0", "1"}, {"0", "1"}, m), NonDistribution);
    m << 0.25, 0.25, 0.25, 0.25;
    CHECK_THROWS_AS(JointDistribution({"0", "0"}, {"0", "1"}, m), NonDistribution);
    CHECK_THROWS_AS(JointDistribution({"0"}, {"0", "1"}, m), NonDistribution);
}
