#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qleak/distribution.hpp"
#include "qleak/quantum.hpp"

namespace qleak {

/// Phase assignment on the support of a joint distribution, values in [0, 2pi).
class PhaseFunction {
  public:
    using Key = std::pair<Eigen::Index, Eigen::Index>; // (x index, y index)

    PhaseFunction() = default;
    explicit PhaseFunction(std::map<Key, double> values);

    const std::map<Key, double>& values() const { return values_; }
    double at(Eigen::Index x, Eigen::Index y) const;
    void set(Eigen::Index x, Eigen::Index y, double theta);

    /// Zero phase on every support pair of d.
    static PhaseFunction canonical(const JointDistribution& d);

    /// Checks the domain equals the support of d exactly.
    void check_domain(const JointDistribution& d) const;

  private:
    std::map<Key, double> values_;
};

/// Pure state sum_{x,y} e^{i theta(x,y)} sqrt(P(x,y)) |x,y> with dims (|X|, |Y|).
struct RegularEmbedding {
    JointDistribution dist;
    PhaseFunction theta;
    StateVector state;
};

/// Canonical mixture form sum_k sqrt(lambda_k) |psi_k>_{AB} |k,k>_{A'B'}
/// with dims (|X|, |Y|, K, K).
struct GeneralEmbedding {
    JointDistribution dist;
    Eigen::VectorXd weights;
    std::vector<RegularEmbedding> components;
    StateVector state;
};

/// Mixed-state implementation aided by a trusted environment register.
/// Components share dims, either (|X|, |Y|) or (|X|, |Y|, K, K).
struct TripartiteImplementation {
    JointDistribution dist;
    Eigen::VectorXd env_weights;
    std::vector<StateVector> env_states;
};

struct CorrectnessReport {
    bool pass = false;
    double total_variation = 0.0; // measured (x,y) distribution vs d
    double gap_x_yb = 0.0;        // |S(X;YB') - I(X;Y)|
    double gap_xa_y = 0.0;        // |S(XA';Y) - I(X;Y)|
};

RegularEmbedding make_regular(const JointDistribution& d, const PhaseFunction& theta);
RegularEmbedding make_regular(const JointDistribution& d); // canonical

double leakage_regular(const RegularEmbedding& e);

GeneralEmbedding make_general(const JointDistribution& d,
                              const Eigen::VectorXd& weights,
                              const std::vector<PhaseFunction>& thetas);

/// Checks a four-register state (A, B, A', B') against d: computational-basis
/// statistics and both entropic Markov conditions.
CorrectnessReport correctness_check(const StateVector& state, const JointDistribution& d);

double leakage_general(const GeneralEmbedding& g);

std::vector<std::pair<double, RegularEmbedding>> regularize(const GeneralEmbedding& g);

/// (S(X;BB') - I(X;Y), S(AA';Y) - I(X;Y)) on the traced-out mixture; the two
/// components need not agree.
std::pair<double, double> tripartite_leakage(const TripartiteImplementation& t);

/// Environment holds a copy of (x, y); components are computational-basis states.
TripartiteImplementation classical_correlation_implementation(const JointDistribution& d);

namespace detail {

/// S(B) - I(X;Y) evaluated from amplitudes alone, tracing over the given side.
/// Fast path for optimizer inner loops; no cross-side assertion.
double leakage_one_side(const JointDistribution& d, const Vector& amps, Side traced_out);

} // namespace detail

} // namespace qleak
