#include "qleak/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qleak {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kFreeParameterCap = 64;
constexpr int kOneParameterGrid = 4096;
constexpr int kCoarseScanPoints = 24;
constexpr double kGolden = 0.6180339887498949;

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

double wrap(double phase) {
    phase = std::fmod(phase, kTwoPi);
    return phase < 0.0 ? phase + kTwoPi : phase;
}

// Leakage as a function of the free phases, with pinned phases fixed at zero.
class Objective {
  public:
    Objective(const JointDistribution& d, const GaugeFixing& gauge)
        : dist_(d),
          gauge_(gauge),
          info_(mutual_information(d)),
          traced_out_(d.x_size() >= d.y_size() ? Side::alice : Side::bob) {
        Eigen::Index ny = d.y_size();
        amps_ = Vector::Zero(d.x_size() * ny);
        for (auto [x, y] : gauge_.pinned_pairs) {
            amps_(x * ny + y) = std::sqrt(d.prob(x, y));
        }
        for (auto [x, y] : gauge_.free_pairs) {
            free_index_.push_back(x * ny + y);
            free_magnitude_.push_back(std::sqrt(d.prob(x, y)));
        }
    }

    double operator()(const std::vector<double>& phi) {
        for (std::size_t j = 0; j < free_index_.size(); ++j) {
            amps_(free_index_[j]) = std::polar(free_magnitude_[j], phi[j]);
        }
        Eigen::Index nx = dist_.x_size(), ny = dist_.y_size();
        Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            table(amps_.data(), nx, ny);
        Matrix gram = traced_out_ == Side::alice ? Matrix(table.adjoint() * table)
                                                 : Matrix(table * table.adjoint());
        return detail::entropy_of_hermitian(gram) - info_;
    }

    PhaseFunction theta(const std::vector<double>& phi) const {
        PhaseFunction out = PhaseFunction::canonical(dist_);
        for (std::size_t j = 0; j < gauge_.free_pairs.size(); ++j) {
            out.set(gauge_.free_pairs[j].first, gauge_.free_pairs[j].second, wrap(phi[j]));
        }
        return out;
    }

  private:
    const JointDistribution& dist_;
    const GaugeFixing& gauge_;
    double info_;
    Side traced_out_;
    Vector amps_;
    std::vector<Eigen::Index> free_index_;
    std::vector<double> free_magnitude_;
};

struct LocalSearchOutcome {
    std::vector<double> phi;
    double value = 0.0;
    bool converged = false;
    std::vector<std::pair<int, double>> trace;
};

double golden_section(Objective& f, std::vector<double>& phi, std::size_t coord,
                      double lo, double hi, double f_mid) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    phi[coord] = x1;
    double f1 = f(phi);
    phi[coord] = x2;
    double f2 = f(phi);
    while (b - a > 1e-10) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            phi[coord] = x1;
            f1 = f(phi);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            phi[coord] = x2;
            f2 = f(phi);
        }
    }
    double best = f1 <= f2 ? x1 : x2;
    double fbest = std::min(f1, f2);
    if (f_mid <= fbest) {
        best = 0.5 * (lo + hi);
        fbest = f_mid;
    }
    phi[coord] = best;
    return fbest;
}

LocalSearchOutcome coordinate_descent(Objective& f, std::vector<double> phi,
                                      const OptimizerConfig& cfg) {
    LocalSearchOutcome out;
    double current = f(phi);
    out.trace.emplace_back(0, current);
    for (int sweep = 1; sweep <= cfg.max_iterations; ++sweep) {
        double before = current;
        for (std::size_t j = 0; j < phi.size(); ++j) {
            // Coarse periodic scan, then golden-section refinement of the
            // winning bracket; the spectrum can have crossings, so a single
            // unimodal search over [0, 2pi) is not safe.
            double step = kTwoPi / kCoarseScanPoints;
            double best_phase = phi[j];
            double best_value = current;
            for (int g = 0; g < kCoarseScanPoints; ++g) {
                phi[j] = g * step;
                double v = f(phi);
                if (v < best_value) {
                    best_value = v;
                    best_phase = phi[j];
                }
            }
            current = golden_section(f, phi, j, best_phase - step, best_phase + step,
                                     best_value);
        }
        out.trace.emplace_back(sweep, current);
        if (before - current < cfg.convergence_tol) {
            out.converged = true;
            break;
        }
    }
    out.phi = std::move(phi);
    out.value = current;
    return out;
}

LocalSearchOutcome nelder_mead(Objective& f, std::vector<double> start,
                               const OptimizerConfig& cfg) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += 0.5;
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    LocalSearchOutcome out;
    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> v2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            v2.push_back(values[i]);
        }
        simplex = std::move(s2);
        values = std::move(v2);
    };
    order();
    out.trace.emplace_back(0, values.front());
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
        }
        auto affine = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (simplex[n][j] - centroid[j]);
            return p;
        };
        std::vector<double> reflected = affine(-1.0);
        double fr = f(reflected);
        if (fr < values[0]) {
            std::vector<double> expanded = affine(-2.0);
            double fe = f(expanded);
            if (fe < fr) {
                simplex[n] = std::move(expanded);
                values[n] = fe;
            } else {
                simplex[n] = std::move(reflected);
                values[n] = fr;
            }
        } else if (fr < values[n - 1]) {
            simplex[n] = std::move(reflected);
            values[n] = fr;
        } else {
            std::vector<double> contracted = affine(0.5);
            double fc = f(contracted);
            if (fc < values[n]) {
                simplex[n] = std::move(contracted);
                values[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        simplex[i][j] = 0.5 * (simplex[i][j] + simplex[0][j]);
                    }
                    values[i] = f(simplex[i]);
                }
            }
        }
        order();
        out.trace.emplace_back(it, values.front());
        if (values[n] - values[0] < cfg.convergence_tol) {
            out.converged = true;
            break;
        }
    }
    out.phi = simplex.front();
    out.value = values.front();
    return out;
}

} // namespace

GaugeFixing gauge_fix(const JointDistribution& d) {
    GaugeFixing gauge;
    UnionFind uf(static_cast<int>(d.x_size() + d.y_size()));
    for (auto [x, y] : d.support()) {
        if (uf.unite(static_cast<int>(x), static_cast<int>(d.x_size() + y))) {
            gauge.pinned_pairs.emplace_back(x, y);
        } else {
            gauge.free_pairs.emplace_back(x, y);
        }
    }
    return gauge;
}

OptimizationResult minimize_leakage(const JointDistribution& d, const OptimizerConfig& cfg) {
    if (cfg.starts < 1 || cfg.max_iterations < 1 || cfg.convergence_tol <= 0.0) {
        throw InvalidSpec("optimizer config out of range");
    }
    GaugeFixing gauge = gauge_fix(d);
    std::size_t n_free = gauge.free_pairs.size();
    if (n_free > kFreeParameterCap) {
        throw TooManyParameters(std::to_string(n_free) + " free phases exceed the cap of 64");
    }
    Objective f(d, gauge);

    LocalSearchOutcome best;
    bool have_best = false;
    auto consider = [&](LocalSearchOutcome candidate) {
        if (!have_best || candidate.value < best.value) {
            best = std::move(candidate);
            have_best = true;
        }
    };

    if (n_free == 0) {
        std::vector<double> empty;
        best.phi = empty;
        best.value = f(empty);
        best.converged = true;
        best.trace.emplace_back(0, best.value);
        have_best = true;
    } else {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
        std::vector<std::vector<double>> starts;
        starts.emplace_back(n_free, 0.0); // canonical embedding is always start 0
        for (int s = 1; s < cfg.starts; ++s) {
            std::vector<double> phi(n_free);
            for (double& v : phi) v = uniform(rng);
            starts.push_back(std::move(phi));
        }
        for (auto& start : starts) {
            consider(cfg.method == SearchMethod::coordinate_descent
                         ? coordinate_descent(f, start, cfg)
                         : nelder_mead(f, start, cfg));
        }
        if (n_free == 1) {
            double step = kTwoPi / kOneParameterGrid;
            std::vector<double> phi(1, 0.0);
            double best_phase = 0.0, best_value = f(phi);
            for (int g = 1; g < kOneParameterGrid; ++g) {
                phi[0] = g * step;
                double v = f(phi);
                if (v < best_value) {
                    best_value = v;
                    best_phase = phi[0];
                }
            }
            LocalSearchOutcome grid;
            grid.phi = {best_phase};
            grid.value = golden_section(f, grid.phi, 0, best_phase - step,
                                        best_phase + step, best_value);
            grid.converged = true;
            grid.trace.emplace_back(0, grid.value);
            consider(std::move(grid));
        }
    }

    OptimizationResult result;
    result.best_theta = f.theta(best.phi);
    result.trace = std::move(best.trace);
    result.converged = best.converged;
    // Re-evaluate through the public path so the reported value is exactly
    // reproducible from best_theta.
    result.best_leakage = leakage_regular(make_regular(d, result.best_theta));
    return result;
}

} // namespace qleak
