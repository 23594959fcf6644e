#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qleak/attacks.hpp"
#include "qleak/embedding.hpp"
#include "qleak/primitives.hpp"

using namespace qleak;

namespace {

double sqrt_half() { return 1.0 / std::sqrt(2.0); }

// Mutual information between the party's basis outcome and the measurement
// label, from the labeled outcome report.
double outcome_mutual_information(const std::vector<PovmOutcome>& outcomes,
                                  Eigen::Index complement_dim) {
    Eigen::MatrixXd joint =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(outcomes.size()), complement_dim);
    for (std::size_t l = 0; l < outcomes.size(); ++l) {
        if (outcomes[l].conditional.empty()) continue;
        for (Eigen::Index m = 0; m < complement_dim; ++m) {
            joint(static_cast<Eigen::Index>(l), m) =
                outcomes[l].probability * outcomes[l].conditional[static_cast<std::size_t>(m)];
        }
    }
    joint /= joint.sum();
    std::vector<std::string> ls, ms;
    for (std::size_t l = 0; l < outcomes.size(); ++l) ls.push_back("l" + std::to_string(l));
    for (Eigen::Index m = 0; m < complement_dim; ++m) ms.push_back("m" + std::to_string(m));
    return mutual_information(JointDistribution(ls, ms, joint));
}

} // namespace

TEST_CASE("POVM validation") {
    Povm identity{{"only"}, {Matrix::Identity(3, 3)}};
    validate_povm(identity);

    Povm incomplete{{"a"}, {0.5 * Matrix::Identity(2, 2)}};
    CHECK_THROWS_AS(validate_povm(incomplete), NotAPovm);

    Matrix not_psd(2, 2);
    not_psd << 1.5, 0.0, 0.0, -0.5;
    Povm negative{{"a", "b"}, {not_psd, Matrix::Identity(2, 2) - not_psd}};
    CHECK_THROWS_AS(validate_povm(negative), NotAPovm);

    Povm mismatch{{"a"}, {Matrix::Identity(2, 2), Matrix::Zero(2, 2)}};
    CHECK_THROWS_AS(validate_povm(mismatch), NotAPovm);
}

TEST_CASE("identity POVM fires with probability one") {
    auto e = make_regular(build_primitive({PrimitiveKind::rot, 1}));
    Povm identity{{"only"}, {Matrix::Identity(3, 3)}};
    auto outcomes = povm_outcome_distribution(e.state, {1}, identity);
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("computational-basis POVM reproduces the receiver marginal") {
    auto e = make_regular(build_primitive({PrimitiveKind::rot, 1}));
    Povm basis;
    for (int i = 0; i < 3; ++i) {
        basis.labels.push_back(std::to_string(i));
        Matrix proj = Matrix::Zero(3, 3);
        proj(i, i) = 1.0;
        basis.elements.push_back(proj);
    }
    auto outcomes = povm_outcome_distribution(e.state, {1}, basis);
    CHECK(outcomes[0].probability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(outcomes[1].probability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(outcomes[2].probability == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("POVM dimension checks") {
    auto e = make_regular(build_primitive({PrimitiveKind::rot, 1}));
    Povm wrong{{"only"}, {Matrix::Identity(2, 2)}};
    CHECK_THROWS_AS(povm_outcome_distribution(e.state, {1}, wrong), DimensionMismatch);
    CHECK_THROWS_AS(povm_outcome_distribution(e.state, {2}, wrong), DimensionMismatch);
}

TEST_CASE("canonical 1-2-OT measurements") {
    auto [alice, bob] = canonical_ot_povms();
    for (const auto& povm : {alice, bob}) {
        Matrix sum = Matrix::Zero(4, 4);
        for (const auto& e : povm.elements) sum += e;
        CHECK((sum - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    }

    auto state = make_regular(build_primitive({PrimitiveKind::ot})).state;

    // Alice's measurement on her own register: conclusive outcomes identify
    // Bob's selection bit with certainty, half the time.
    auto alice_outcomes = povm_outcome_distribution(state, {0}, alice);
    REQUIRE(alice_outcomes.size() == 3);
    CHECK(alice_outcomes[0].probability + alice_outcomes[1].probability ==
          doctest::Approx(0.5).epsilon(1e-10));
    for (int z = 0; z < 2; ++z) {
        const auto& outcome = alice_outcomes[static_cast<std::size_t>(z)];
        double on_z = 0.0;
        // Bob's flat basis index is c * 2 + y.
        for (int y = 0; y < 2; ++y) on_z += outcome.conditional[static_cast<std::size_t>(z * 2 + y)];
        CHECK(on_z == doctest::Approx(1.0).epsilon(1e-10));
    }

    // Bob's measurement: conclusive outcomes give the XOR of Alice's bits.
    auto bob_outcomes = povm_outcome_distribution(state, {1}, bob);
    CHECK(bob_outcomes[0].probability + bob_outcomes[1].probability ==
          doctest::Approx(0.5).epsilon(1e-10));
    for (int z = 0; z < 2; ++z) {
        const auto& outcome = bob_outcomes[static_cast<std::size_t>(z)];
        double correct = 0.0;
        for (int x0 = 0; x0 < 2; ++x0) {
            for (int x1 = 0; x1 < 2; ++x1) {
                if ((x0 ^ x1) == z) correct += outcome.conditional[static_cast<std::size_t>(x0 * 2 + x1)];
            }
        }
        CHECK(correct == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("the canonical 1-2-OT state splits along the conclusive directions") {
    auto state = make_regular(build_primitive({PrimitiveKind::ot})).state;
    double s = sqrt_half();
    // Bell states over basis order (00, 01, 10, 11).
    Vector phi_minus(4), psi_minus(4), phi_plus(4), psi_plus(4), plus_plus(4);
    phi_minus << s, 0, 0, -s;
    psi_minus << 0, s, -s, 0;
    phi_plus << s, 0, 0, s;
    psi_plus << 0, s, s, 0;
    plus_plus << 0.5, 0.5, 0.5, 0.5;

    // Schmidt split of the canonical state under the (selection bit, received
    // bit) column order: the conclusive Bell directions carry weight 1/4 each
    // and |++>|++> the remaining 1/2.
    Vector b0 = (phi_plus - psi_plus) / std::sqrt(2.0);
    Vector b1 = (phi_minus - psi_minus) / std::sqrt(2.0);
    Vector expected = Vector::Zero(16);
    auto add_product = [&](double w, const Vector& a, const Vector& b) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) expected(i * 4 + j) += w * a(i) * b(j);
        }
    };
    add_product(0.5, psi_minus, b0);
    add_product(0.5, phi_minus, b1);
    add_product(sqrt_half(), plus_plus, plus_plus);
    CHECK((expected - state.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("outcome probabilities form a distribution") {
    auto state = make_regular(build_primitive({PrimitiveKind::ot})).state;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto povm = random_projective_povm(4, seed);
        auto outcomes = povm_outcome_distribution(state, {1}, povm);
        double total = 0.0;
        for (const auto& o : outcomes) total += o.probability;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("random projective POVMs are deterministic in the seed") {
    auto a = random_projective_povm(3, 7);
    auto b = random_projective_povm(3, 7);
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        CHECK((a.elements[i] - b.elements[i]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("no measurement beats the Holevo quantity") {
    for (auto kind : {PrimitiveKind::ot, PrimitiveKind::rot}) {
        auto d = build_primitive({kind, 1});
        auto e = make_regular(d);
        Eigen::Index nx = d.x_size(), ny = d.y_size();

        // chi of the ensemble {P(x), rho_B^x}; components are pure here.
        Ensemble ensemble{d.x_marginal(), {}};
        for (Eigen::Index x = 0; x < nx; ++x) {
            Vector row(ny);
            for (Eigen::Index y = 0; y < ny; ++y) row(y) = e.state.amplitudes()(x * ny + y);
            row /= row.norm();
            ensemble.states.emplace_back(Matrix(row * row.adjoint()),
                                         std::vector<Eigen::Index>{ny});
        }
        double chi = holevo_information(ensemble);

        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto povm = random_projective_povm(ny, seed);
            auto outcomes = povm_outcome_distribution(e.state, {1}, povm);
            CHECK(outcome_mutual_information(outcomes, nx) <= chi + 1e-9);
        }
    }
}
