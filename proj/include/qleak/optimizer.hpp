#pragma once

#include <cstdint>
#include <vector>

#include "qleak/embedding.hpp"

namespace qleak {

enum class SearchMethod { coordinate_descent, simplex_search };

struct OptimizerConfig {
    int starts = 32;
    int max_iterations = 2000;
    double convergence_tol = 1e-10;
    std::uint64_t seed = 0;
    SearchMethod method = SearchMethod::coordinate_descent;
};

/// Local phase changes theta(x,y) -> theta(x,y) + alpha(x) + beta(y) leave the
/// leakage unchanged, so phases along a spanning forest of the bipartite
/// support graph can be pinned to zero. The remaining support pairs are the
/// free parameters.
struct GaugeFixing {
    std::vector<PhaseFunction::Key> free_pairs;
    std::vector<PhaseFunction::Key> pinned_pairs;
};

GaugeFixing gauge_fix(const JointDistribution& d);

struct OptimizationResult {
    PhaseFunction best_theta;
    double best_leakage = 0.0;
    std::vector<std::pair<int, double>> trace; // (iteration, objective)
    bool converged = false;
};

OptimizationResult minimize_leakage(const JointDistribution& d, const OptimizerConfig& cfg);

} // namespace qleak
