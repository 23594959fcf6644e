#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qleak/embedding.hpp"

namespace qleak {

/// Labeled POVM: Hermitian PSD elements of equal dimension summing to identity.
struct Povm {
    std::vector<std::string> labels;
    std::vector<Matrix> elements;
};

void validate_povm(const Povm& povm);

struct PovmOutcome {
    std::string label;
    double probability;
    /// Distribution of the other party's computational-basis outcome,
    /// conditioned on this POVM outcome; indexed by the complement registers'
    /// flat basis index. Empty when the outcome has probability zero.
    std::vector<double> conditional;
};

/// Applies the POVM to the given subsystems of a pure state; the complement
/// registers are measured in the computational basis for the conditionals.
std::vector<PovmOutcome> povm_outcome_distribution(const StateVector& state,
                                                   const std::vector<std::size_t>& subsystems,
                                                   const Povm& povm);

/// The explicit Bell-basis attacks on the canonical 1-2-OT embedding: Alice's
/// POVM recovers Bob's selection bit and Bob's POVM the XOR of Alice's bits,
/// each with probability 1/2.
std::pair<Povm, Povm> canonical_ot_povms();

/// Complete projective POVM from the columns of a Haar-random unitary.
Povm random_projective_povm(Eigen::Index dim, std::uint64_t seed);

} // namespace qleak
