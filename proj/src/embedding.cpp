#include "qleak/embedding.hpp"

#include <cmath>
#include <numeric>

namespace qleak {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSymmetryTol = 1e-9;
constexpr double kCorrectnessTol = 1e-9;
constexpr double kMixtureTraceTol = 1e-10;

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorMatrix> as_table(const Vector& amps, Eigen::Index nx, Eigen::Index ny) {
    return Eigen::Map<const RowMajorMatrix>(amps.data(), nx, ny);
}

// Normalizes a state's dims to the four-register layout (A, B, A', B').
std::vector<Eigen::Index> four_register_dims(const StateVector& state) {
    std::vector<Eigen::Index> dims = state.dims();
    if (dims.size() == 2) {
        dims.push_back(1);
        dims.push_back(1);
    }
    if (dims.size() != 4) {
        throw DimensionMismatch("expected registers (A, B, A', B')");
    }
    return dims;
}

// Holevo quantity from unnormalized conditional blocks; tr(block_x) = P(x).
double holevo_from_blocks(const std::vector<Matrix>& blocks) {
    Matrix avg = Matrix::Zero(blocks.front().rows(), blocks.front().cols());
    double avg_entropy = 0.0;
    for (const auto& b : blocks) {
        double w = b.trace().real();
        if (w <= 0.0) continue;
        avg += b;
        avg_entropy += w * detail::entropy_of_hermitian(b / w);
    }
    return detail::entropy_of_hermitian(avg) - avg_entropy;
}

// Conditional blocks over (B, B') given the computational-basis value of A,
// tracing out A'. Works for mixtures of states with identical dims.
std::vector<Matrix> blocks_given_x(const std::vector<std::pair<double, const StateVector*>>& mix,
                                   const std::vector<Eigen::Index>& dims) {
    Eigen::Index nx = dims[0], ny = dims[1], ka = dims[2], kb = dims[3];
    std::vector<Matrix> blocks(static_cast<std::size_t>(nx),
                               Matrix::Zero(ny * kb, ny * kb));
    std::vector<Eigen::Index> slice_dims{ny, ka, kb};
    for (const auto& [w, state] : mix) {
        const Vector& amps = state->amplitudes();
        Eigen::Index slice_len = ny * ka * kb;
        for (Eigen::Index x = 0; x < nx; ++x) {
            Vector slice = amps.segment(x * slice_len, slice_len);
            if (slice.squaredNorm() <= 0.0) continue;
            blocks[static_cast<std::size_t>(x)] += w * detail::reduced(slice, slice_dims, {0, 2});
        }
    }
    return blocks;
}

// Conditional blocks over (A, A') given the computational-basis value of B.
std::vector<Matrix> blocks_given_y(const std::vector<std::pair<double, const StateVector*>>& mix,
                                   const std::vector<Eigen::Index>& dims) {
    Eigen::Index nx = dims[0], ny = dims[1], ka = dims[2], kb = dims[3];
    std::vector<Matrix> blocks(static_cast<std::size_t>(ny),
                               Matrix::Zero(nx * ka, nx * ka));
    std::vector<Eigen::Index> slice_dims{nx, ka, kb};
    for (const auto& [w, state] : mix) {
        const Vector& amps = state->amplitudes();
        for (Eigen::Index y = 0; y < ny; ++y) {
            Vector slice(nx * ka * kb);
            for (Eigen::Index x = 0; x < nx; ++x) {
                for (Eigen::Index a = 0; a < ka; ++a) {
                    for (Eigen::Index b = 0; b < kb; ++b) {
                        slice((x * ka + a) * kb + b) = amps(((x * ny + y) * ka + a) * kb + b);
                    }
                }
            }
            if (slice.squaredNorm() <= 0.0) continue;
            blocks[static_cast<std::size_t>(y)] += w * detail::reduced(slice, slice_dims, {0, 1});
        }
    }
    return blocks;
}

} // namespace

PhaseFunction::PhaseFunction(std::map<Key, double> values) : values_(std::move(values)) {
    for (auto& [key, theta] : values_) {
        theta = std::fmod(theta, kTwoPi);
        if (theta < 0.0) theta += kTwoPi;
    }
}

double PhaseFunction::at(Eigen::Index x, Eigen::Index y) const {
    auto it = values_.find({x, y});
    if (it == values_.end()) throw PhaseDomainMismatch("phase not defined at support pair");
    return it->second;
}

void PhaseFunction::set(Eigen::Index x, Eigen::Index y, double theta) {
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    values_[{x, y}] = theta;
}

PhaseFunction PhaseFunction::canonical(const JointDistribution& d) {
    std::map<Key, double> values;
    for (auto [x, y] : d.support()) values[{x, y}] = 0.0;
    return PhaseFunction(std::move(values));
}

void PhaseFunction::check_domain(const JointDistribution& d) const {
    auto support = d.support();
    if (values_.size() != support.size()) {
        throw PhaseDomainMismatch("phase function domain differs from support");
    }
    for (auto [x, y] : support) {
        if (!values_.count({x, y})) {
            throw PhaseDomainMismatch("phase missing at support pair");
        }
    }
}

RegularEmbedding make_regular(const JointDistribution& d, const PhaseFunction& theta) {
    theta.check_domain(d);
    Eigen::Index nx = d.x_size(), ny = d.y_size();
    Vector amps = Vector::Zero(nx * ny);
    for (auto [x, y] : d.support()) {
        amps(x * ny + y) = std::polar(std::sqrt(d.prob(x, y)), theta.at(x, y));
    }
    return RegularEmbedding{d, theta, StateVector(std::move(amps), {nx, ny})};
}

RegularEmbedding make_regular(const JointDistribution& d) {
    return make_regular(d, PhaseFunction::canonical(d));
}

double leakage_regular(const RegularEmbedding& e) {
    Eigen::Index nx = e.dist.x_size(), ny = e.dist.y_size();
    auto table = as_table(e.state.amplitudes(), nx, ny);
    double s_a = detail::entropy_of_hermitian(table * table.adjoint());
    double s_b = detail::entropy_of_hermitian(table.adjoint() * table);
    if (std::abs(s_a - s_b) > kSymmetryTol) {
        throw Error("pure-state entropies of the two halves disagree");
    }
    return s_b - mutual_information(e.dist);
}

GeneralEmbedding make_general(const JointDistribution& d,
                              const Eigen::VectorXd& weights,
                              const std::vector<PhaseFunction>& thetas) {
    if (weights.size() < 1 || weights.size() != static_cast<Eigen::Index>(thetas.size())) {
        throw NonDistribution("component count mismatch");
    }
    if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-12) {
        throw NonDistribution("mixture weights are not a distribution");
    }
    std::vector<RegularEmbedding> components;
    components.reserve(thetas.size());
    for (const auto& theta : thetas) components.push_back(make_regular(d, theta));

    Eigen::Index nx = d.x_size(), ny = d.y_size();
    Eigen::Index k_count = weights.size();
    Vector amps = Vector::Zero(nx * ny * k_count * k_count);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        double w = std::sqrt(weights(k));
        const Vector& comp = components[static_cast<std::size_t>(k)].state.amplitudes();
        for (Eigen::Index xy = 0; xy < nx * ny; ++xy) {
            amps((xy * k_count + k) * k_count + k) = w * comp(xy);
        }
    }
    StateVector state(std::move(amps), {nx, ny, k_count, k_count});

    // Mixture invariant: tracing out the work registers recovers the
    // weighted sum of component projectors.
    Matrix rho_ab = detail::reduced(state.amplitudes(), state.dims(), {0, 1});
    Matrix expected = Matrix::Zero(nx * ny, nx * ny);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const Vector& comp = components[static_cast<std::size_t>(k)].state.amplitudes();
        expected += weights(k) * (comp * comp.adjoint());
    }
    if ((rho_ab - expected).cwiseAbs().maxCoeff() > kMixtureTraceTol) {
        throw Error("mixture form violates the partial-trace invariant");
    }

    GeneralEmbedding g{d, weights, std::move(components), std::move(state)};
    CorrectnessReport report = correctness_check(g.state, d);
    if (!report.pass) {
        throw Error("constructed general embedding failed the correctness check");
    }
    return g;
}

CorrectnessReport correctness_check(const StateVector& state, const JointDistribution& d) {
    std::vector<Eigen::Index> dims = four_register_dims(state);
    Eigen::Index nx = dims[0], ny = dims[1], ka = dims[2], kb = dims[3];
    if (nx != d.x_size() || ny != d.y_size()) {
        throw DimensionMismatch("state registers do not match the alphabets");
    }
    const Vector& amps = state.amplitudes();

    CorrectnessReport report;
    double tv = 0.0;
    for (Eigen::Index x = 0; x < nx; ++x) {
        for (Eigen::Index y = 0; y < ny; ++y) {
            double mass = 0.0;
            for (Eigen::Index a = 0; a < ka; ++a) {
                for (Eigen::Index b = 0; b < kb; ++b) {
                    mass += std::norm(amps(((x * ny + y) * ka + a) * kb + b));
                }
            }
            tv += std::abs(mass - d.prob(x, y));
        }
    }
    report.total_variation = 0.5 * tv;

    double info = mutual_information(d);

    // S(X;YB'): condition on x, dephase B, trace out A'.
    std::vector<Matrix> x_blocks(static_cast<std::size_t>(nx),
                                 Matrix::Zero(ny * kb, ny * kb));
    for (Eigen::Index x = 0; x < nx; ++x) {
        for (Eigen::Index y = 0; y < ny; ++y) {
            Vector w(ka * kb);
            for (Eigen::Index a = 0; a < ka; ++a) {
                for (Eigen::Index b = 0; b < kb; ++b) {
                    w(a * kb + b) = amps(((x * ny + y) * ka + a) * kb + b);
                }
            }
            if (w.squaredNorm() <= 0.0) continue;
            x_blocks[static_cast<std::size_t>(x)].block(y * kb, y * kb, kb, kb) +=
                detail::reduced(w, {ka, kb}, {1});
        }
    }
    report.gap_x_yb = std::abs(holevo_from_blocks(x_blocks) - info);

    // S(XA';Y): condition on y, dephase A, trace out B'.
    std::vector<Matrix> y_blocks(static_cast<std::size_t>(ny),
                                 Matrix::Zero(nx * ka, nx * ka));
    for (Eigen::Index y = 0; y < ny; ++y) {
        for (Eigen::Index x = 0; x < nx; ++x) {
            Vector w(ka * kb);
            for (Eigen::Index a = 0; a < ka; ++a) {
                for (Eigen::Index b = 0; b < kb; ++b) {
                    w(a * kb + b) = amps(((x * ny + y) * ka + a) * kb + b);
                }
            }
            if (w.squaredNorm() <= 0.0) continue;
            y_blocks[static_cast<std::size_t>(y)].block(x * ka, x * ka, ka, ka) +=
                detail::reduced(w, {ka, kb}, {0});
        }
    }
    report.gap_xa_y = std::abs(holevo_from_blocks(y_blocks) - info);

    report.pass = report.total_variation <= kCorrectnessTol &&
                  report.gap_x_yb <= kCorrectnessTol &&
                  report.gap_xa_y <= kCorrectnessTol;
    return report;
}

double leakage_general(const GeneralEmbedding& g) {
    std::vector<Eigen::Index> dims = four_register_dims(g.state);
    std::vector<std::pair<double, const StateVector*>> mix{{1.0, &g.state}};
    double info = mutual_information(g.dist);
    double chi_bob = holevo_from_blocks(blocks_given_x(mix, dims));
    double chi_alice = holevo_from_blocks(blocks_given_y(mix, dims));
    if (std::abs(chi_bob - chi_alice) > kSymmetryTol) {
        throw Error("leakage symmetry violated for a general embedding");
    }
    return std::max(chi_bob - info, chi_alice - info);
}

std::vector<std::pair<double, RegularEmbedding>> regularize(const GeneralEmbedding& g) {
    std::vector<std::pair<double, RegularEmbedding>> out;
    out.reserve(g.components.size());
    for (Eigen::Index k = 0; k < g.weights.size(); ++k) {
        out.emplace_back(g.weights(k), g.components[static_cast<std::size_t>(k)]);
    }
    return out;
}

std::pair<double, double> tripartite_leakage(const TripartiteImplementation& t) {
    if (t.env_states.empty() ||
        t.env_weights.size() != static_cast<Eigen::Index>(t.env_states.size())) {
        throw DimensionMismatch("environment weight/state count mismatch");
    }
    if ((t.env_weights.array() < 0.0).any() || std::abs(t.env_weights.sum() - 1.0) > 1e-9) {
        throw NonDistribution("environment weights are not a distribution");
    }
    std::vector<Eigen::Index> dims = four_register_dims(t.env_states.front());
    for (const auto& st : t.env_states) {
        if (four_register_dims(st) != dims) {
            throw DimensionMismatch("environment components differ in dims");
        }
    }
    std::vector<std::pair<double, const StateVector*>> mix;
    for (Eigen::Index e = 0; e < t.env_weights.size(); ++e) {
        if (t.env_weights(e) > 0.0) {
            mix.emplace_back(t.env_weights(e), &t.env_states[static_cast<std::size_t>(e)]);
        }
    }
    double info = mutual_information(t.dist);
    double chi_bob = holevo_from_blocks(blocks_given_x(mix, dims));
    double chi_alice = holevo_from_blocks(blocks_given_y(mix, dims));
    return {chi_bob - info, chi_alice - info};
}

TripartiteImplementation classical_correlation_implementation(const JointDistribution& d) {
    Eigen::Index nx = d.x_size(), ny = d.y_size();
    auto support = d.support();
    Eigen::VectorXd weights(static_cast<Eigen::Index>(support.size()));
    std::vector<StateVector> states;
    for (std::size_t i = 0; i < support.size(); ++i) {
        auto [x, y] = support[i];
        weights(static_cast<Eigen::Index>(i)) = d.prob(x, y);
        Vector amps = Vector::Zero(nx * ny);
        amps(x * ny + y) = 1.0;
        states.emplace_back(std::move(amps), std::vector<Eigen::Index>{nx, ny});
    }
    return TripartiteImplementation{d, std::move(weights), std::move(states)};
}

namespace detail {

double leakage_one_side(const JointDistribution& d, const Vector& amps, Side traced_out) {
    Eigen::Index nx = d.x_size(), ny = d.y_size();
    auto table = as_table(amps, nx, ny);
    Matrix gram = traced_out == Side::alice ? Matrix(table.adjoint() * table)
                                            : Matrix(table * table.adjoint());
    return entropy_of_hermitian(gram) - mutual_information(d);
}

} // namespace detail

} // namespace qleak
