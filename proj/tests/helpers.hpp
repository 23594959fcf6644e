#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qleak/distribution.hpp"
#include "qleak/embedding.hpp"

namespace test_helpers {

inline std::vector<std::string> symbols(const char* prefix, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Full-support distribution with entries from normalized exponentials.
inline qleak::JointDistribution random_distribution(std::mt19937_64& rng, int nx, int ny) {
    std::exponential_distribution<double> expo(1.0);
    Eigen::MatrixXd m(nx, ny);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) m(i, j) = expo(rng) + 1e-4;
    }
    m /= m.sum();
    return qleak::JointDistribution(symbols("x", nx), symbols("y", ny), std::move(m));
}

// Trivial by construction: X is a deterministic function of Y.
inline qleak::JointDistribution random_trivial(std::mt19937_64& rng, int nx, int ny) {
    std::exponential_distribution<double> expo(1.0);
    std::uniform_int_distribution<int> pick_x(0, nx - 1);
    Eigen::VectorXd py(ny);
    for (int j = 0; j < ny; ++j) py(j) = expo(rng) + 1e-3;
    py /= py.sum();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nx, ny);
    for (int j = 0; j < ny; ++j) m(pick_x(rng), j) = py(j);
    return qleak::JointDistribution(symbols("x", nx), symbols("y", ny), std::move(m));
}

inline qleak::PhaseFunction random_phases(const qleak::JointDistribution& d,
                                          std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(0.0, 6.283185307179586);
    qleak::PhaseFunction theta = qleak::PhaseFunction::canonical(d);
    for (auto [x, y] : d.support()) theta.set(x, y, uniform(rng));
    return theta;
}

} // namespace test_helpers
