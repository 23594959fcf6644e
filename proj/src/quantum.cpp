#include "qleak/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qleak {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kHermitianTol = 1e-10;
constexpr double kEigenvalueFloor = -1e-9;

Eigen::Index dims_product(const std::vector<Eigen::Index>& dims) {
    Eigen::Index p = 1;
    for (Eigen::Index d : dims) {
        if (d <= 0) throw DimensionMismatch("non-positive subsystem dimension");
        p *= d;
    }
    return p;
}

void check_keep(const std::vector<std::size_t>& keep, std::size_t n_subsystems) {
    for (std::size_t k : keep) {
        if (k >= n_subsystems) throw DimensionMismatch("keep index out of range");
    }
    for (std::size_t i = 1; i < keep.size(); ++i) {
        if (keep[i] <= keep[i - 1]) throw DimensionMismatch("keep indices must be strictly increasing");
    }
}

bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

} // namespace

StateVector::StateVector(Vector amplitudes, std::vector<Eigen::Index> dims)
    : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (dims_product(dims_) != amps_.size()) {
        throw DimensionMismatch("subsystem dimensions do not factor the amplitude vector");
    }
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTol) {
        throw DimensionMismatch("state vector is not normalized");
    }
}

DensityMatrix::DensityMatrix(Matrix entries, std::vector<Eigen::Index> dims)
    : m_(std::move(entries)), dims_(std::move(dims)) {
    if (dims_product(dims_) != m_.rows()) {
        throw DimensionMismatch("subsystem dimensions do not factor the matrix");
    }
    if (!is_hermitian(m_, kHermitianTol)) throw NotHermitian("density matrix is not Hermitian");
    if (std::abs(m_.trace().real() - 1.0) > kNormTol) {
        throw DimensionMismatch("density matrix trace differs from one");
    }
}

namespace detail {

Matrix reduced(const Vector& amps, const std::vector<Eigen::Index>& dims,
               const std::vector<std::size_t>& keep) {
    check_keep(keep, dims.size());
    Eigen::Index keep_dim = 1, drop_dim = 1;
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) kept[k] = true;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        (kept[i] ? keep_dim : drop_dim) *= dims[i];
    }
    // Strides for mapping (kept index, dropped index) -> flat index.
    std::vector<Eigen::Index> stride(dims.size());
    Eigen::Index s = 1;
    for (std::size_t i = dims.size(); i-- > 0;) {
        stride[i] = s;
        s *= dims[i];
    }
    std::vector<Eigen::Index> keep_subs, drop_subs;
    for (std::size_t i = 0; i < dims.size(); ++i) (kept[i] ? keep_subs : drop_subs).push_back(static_cast<Eigen::Index>(i));

    auto flat = [&](Eigen::Index ki, Eigen::Index di) {
        Eigen::Index idx = 0;
        for (std::size_t j = keep_subs.size(); j-- > 0;) {
            Eigen::Index sub = keep_subs[j];
            idx += (ki % dims[static_cast<std::size_t>(sub)]) * stride[static_cast<std::size_t>(sub)];
            ki /= dims[static_cast<std::size_t>(sub)];
        }
        for (std::size_t j = drop_subs.size(); j-- > 0;) {
            Eigen::Index sub = drop_subs[j];
            idx += (di % dims[static_cast<std::size_t>(sub)]) * stride[static_cast<std::size_t>(sub)];
            di /= dims[static_cast<std::size_t>(sub)];
        }
        return idx;
    };

    Matrix out = Matrix::Zero(keep_dim, keep_dim);
    for (Eigen::Index di = 0; di < drop_dim; ++di) {
        Vector col(keep_dim);
        for (Eigen::Index ki = 0; ki < keep_dim; ++ki) col(ki) = amps(flat(ki, di));
        out.noalias() += col * col.adjoint();
    }
    return out;
}

double entropy_of_hermitian(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double lambda = solver.eigenvalues()(i);
        if (lambda < kEigenvalueFloor) {
            throw NotPositiveSemidefinite("eigenvalue " + std::to_string(lambda));
        }
        lambda = std::clamp(lambda, 0.0, 1.0);
        if (lambda > 0.0) h -= lambda * std::log2(lambda);
    }
    return h;
}

} // namespace detail

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    const auto& dims = rho.dims();
    check_keep(keep, dims.size());
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) kept[k] = true;
    Eigen::Index keep_dim = 1, drop_dim = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) (kept[i] ? keep_dim : drop_dim) *= dims[i];

    std::vector<Eigen::Index> stride(dims.size());
    Eigen::Index s = 1;
    for (std::size_t i = dims.size(); i-- > 0;) {
        stride[i] = s;
        s *= dims[i];
    }
    std::vector<Eigen::Index> keep_subs, drop_subs;
    for (std::size_t i = 0; i < dims.size(); ++i) (kept[i] ? keep_subs : drop_subs).push_back(static_cast<Eigen::Index>(i));
    auto flat = [&](Eigen::Index ki, Eigen::Index di) {
        Eigen::Index idx = 0;
        for (std::size_t j = keep_subs.size(); j-- > 0;) {
            Eigen::Index sub = keep_subs[j];
            idx += (ki % dims[static_cast<std::size_t>(sub)]) * stride[static_cast<std::size_t>(sub)];
            ki /= dims[static_cast<std::size_t>(sub)];
        }
        for (std::size_t j = drop_subs.size(); j-- > 0;) {
            Eigen::Index sub = drop_subs[j];
            idx += (di % dims[static_cast<std::size_t>(sub)]) * stride[static_cast<std::size_t>(sub)];
            di /= dims[static_cast<std::size_t>(sub)];
        }
        return idx;
    };

    Matrix out = Matrix::Zero(keep_dim, keep_dim);
    for (Eigen::Index r = 0; r < keep_dim; ++r) {
        for (Eigen::Index c = 0; c < keep_dim; ++c) {
            Complex acc = 0.0;
            for (Eigen::Index di = 0; di < drop_dim; ++di) {
                acc += rho.entries()(flat(r, di), flat(c, di));
            }
            out(r, c) = acc;
        }
    }
    std::vector<Eigen::Index> out_dims;
    for (std::size_t k : keep) out_dims.push_back(dims[k]);
    return DensityMatrix(std::move(out), std::move(out_dims));
}

DensityMatrix partial_trace(const StateVector& psi, const std::vector<std::size_t>& keep) {
    Matrix out = detail::reduced(psi.amplitudes(), psi.dims(), keep);
    std::vector<Eigen::Index> out_dims;
    for (std::size_t k : keep) out_dims.push_back(psi.dims()[k]);
    return DensityMatrix(std::move(out), std::move(out_dims));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return detail::entropy_of_hermitian(rho.entries());
}

double trace_norm(const Matrix& m) {
    if (!is_hermitian(m, kHermitianTol)) throw NotHermitian("trace_norm expects a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

double holevo_information(const Ensemble& e) {
    if (e.weights.size() != static_cast<Eigen::Index>(e.states.size())) {
        throw DimensionMismatch("ensemble weight/state count mismatch");
    }
    if (e.states.empty()) throw DimensionMismatch("empty ensemble");
    Eigen::Index dim = e.states.front().dim();
    for (const auto& st : e.states) {
        if (st.dim() != dim) throw DimensionMismatch("ensemble states differ in dimension");
    }
    if ((e.weights.array() < 0.0).any() || std::abs(e.weights.sum() - 1.0) > 1e-9) {
        throw NonDistribution("ensemble weights are not a distribution");
    }
    Matrix avg = Matrix::Zero(dim, dim);
    double avg_component_entropy = 0.0;
    for (Eigen::Index i = 0; i < e.weights.size(); ++i) {
        double w = e.weights(i);
        if (w <= 0.0) continue;
        avg += w * e.states[static_cast<std::size_t>(i)].entries();
        avg_component_entropy += w * von_neumann_entropy(e.states[static_cast<std::size_t>(i)]);
    }
    return detail::entropy_of_hermitian(avg) - avg_component_entropy;
}

} // namespace qleak
