#include "qleak/attacks.hpp"

#include <cmath>
#include <random>

namespace qleak {

namespace {

constexpr double kCompletenessTol = 1e-10;
constexpr double kPsdTol = -1e-9;

Vector ket(std::initializer_list<double> entries) {
    Vector v(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (double e : entries) v(i++) = e;
    return v / v.norm();
}

} // namespace

void validate_povm(const Povm& povm) {
    if (povm.elements.empty() || povm.labels.size() != povm.elements.size()) {
        throw NotAPovm("labels and elements must match and be non-empty");
    }
    Eigen::Index dim = povm.elements.front().rows();
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& e : povm.elements) {
        if (e.rows() != dim || e.cols() != dim) throw NotAPovm("elements differ in dimension");
        if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kCompletenessTol) {
            throw NotAPovm("element is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(e, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < kPsdTol) {
            throw NotAPovm("element is not positive semidefinite");
        }
        sum += e;
    }
    if ((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > kCompletenessTol) {
        throw NotAPovm("elements do not sum to the identity");
    }
}

std::vector<PovmOutcome> povm_outcome_distribution(const StateVector& state,
                                                   const std::vector<std::size_t>& subsystems,
                                                   const Povm& povm) {
    validate_povm(povm);
    const auto& dims = state.dims();
    for (std::size_t s : subsystems) {
        if (s >= dims.size()) throw DimensionMismatch("subsystem index out of range");
    }
    std::vector<bool> selected(dims.size(), false);
    for (std::size_t s : subsystems) selected[s] = true;
    Eigen::Index sel_dim = 1, comp_dim = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) (selected[i] ? sel_dim : comp_dim) *= dims[i];
    if (povm.elements.front().rows() != sel_dim) {
        throw DimensionMismatch("POVM dimension does not match selected subsystems");
    }

    std::vector<Eigen::Index> stride(dims.size());
    Eigen::Index s = 1;
    for (std::size_t i = dims.size(); i-- > 0;) {
        stride[i] = s;
        s *= dims[i];
    }
    std::vector<std::size_t> sel_subs, comp_subs;
    for (std::size_t i = 0; i < dims.size(); ++i) (selected[i] ? sel_subs : comp_subs).push_back(i);
    auto flat = [&](Eigen::Index si, Eigen::Index ci) {
        Eigen::Index idx = 0;
        for (std::size_t j = sel_subs.size(); j-- > 0;) {
            std::size_t sub = sel_subs[j];
            idx += (si % dims[sub]) * stride[sub];
            si /= dims[sub];
        }
        for (std::size_t j = comp_subs.size(); j-- > 0;) {
            std::size_t sub = comp_subs[j];
            idx += (ci % dims[sub]) * stride[sub];
            ci /= dims[sub];
        }
        return idx;
    };

    std::vector<PovmOutcome> outcomes;
    for (std::size_t l = 0; l < povm.elements.size(); ++l) {
        PovmOutcome outcome;
        outcome.label = povm.labels[l];
        outcome.conditional.assign(static_cast<std::size_t>(comp_dim), 0.0);
        double total = 0.0;
        for (Eigen::Index ci = 0; ci < comp_dim; ++ci) {
            Vector column(sel_dim);
            for (Eigen::Index si = 0; si < sel_dim; ++si) {
                column(si) = state.amplitudes()(flat(si, ci));
            }
            double joint = std::real((column.adjoint() * povm.elements[l] * column)(0));
            joint = std::max(joint, 0.0);
            outcome.conditional[static_cast<std::size_t>(ci)] = joint;
            total += joint;
        }
        outcome.probability = total;
        if (total > 0.0) {
            for (double& c : outcome.conditional) c /= total;
        } else {
            outcome.conditional.clear();
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

std::pair<Povm, Povm> canonical_ot_povms() {
    // Two-qubit basis order (00, 01, 10, 11); Bell states
    // |Phi+-> = (|00> +- |11>)/sqrt 2 and |Psi+-> = (|01> +- |10>)/sqrt 2.
    Vector minus_plus = ket({1, 1, -1, -1});
    Vector plus_minus = ket({1, -1, 1, -1});
    Vector psi_minus_phi_minus = ket({-1, 1, -1, 1}); // (|Psi-> - |Phi->)/sqrt 2
    Vector psi_plus_phi_plus = ket({-1, 1, 1, -1});   // (|Psi+> - |Phi+>)/sqrt 2

    Matrix id = Matrix::Identity(4, 4);
    Povm alice;
    alice.labels = {"A0", "A1", "A?"};
    alice.elements = {minus_plus * minus_plus.adjoint(), plus_minus * plus_minus.adjoint(),
                      Matrix()};
    alice.elements[2] = id - alice.elements[0] - alice.elements[1];

    Povm bob;
    bob.labels = {"B0", "B1", "B?"};
    bob.elements = {psi_minus_phi_minus * psi_minus_phi_minus.adjoint(),
                    psi_plus_phi_plus * psi_plus_phi_plus.adjoint(), Matrix()};
    // The inconclusive element carries |++><++| plus the direction outside the
    // embedding's support, so the three elements form a complete POVM without
    // changing any outcome probability on the canonical OT state.
    bob.elements[2] = id - bob.elements[0] - bob.elements[1];

    validate_povm(alice);
    validate_povm(bob);
    return {std::move(alice), std::move(bob)};
}

Povm random_projective_povm(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Povm povm;
    for (Eigen::Index k = 0; k < dim; ++k) {
        povm.labels.push_back("m" + std::to_string(k));
        Vector col = q.col(k);
        povm.elements.push_back(col * col.adjoint());
    }
    validate_povm(povm);
    return povm;
}

} // namespace qleak
