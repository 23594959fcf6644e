#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qleak/errors.hpp"

namespace qleak {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Normalized pure state over an ordered list of tensor factors.
/// Index 0 is the leftmost factor; Alice's registers precede Bob's.
class StateVector {
  public:
    StateVector(Vector amplitudes, std::vector<Eigen::Index> dims);

    const Vector& amplitudes() const { return amps_; }
    const std::vector<Eigen::Index>& dims() const { return dims_; }
    Eigen::Index dim() const { return amps_.size(); }

  private:
    Vector amps_;
    std::vector<Eigen::Index> dims_;
};

/// Hermitian, unit-trace, positive semidefinite matrix with subsystem structure.
class DensityMatrix {
  public:
    DensityMatrix(Matrix entries, std::vector<Eigen::Index> dims);

    const Matrix& entries() const { return m_; }
    const std::vector<Eigen::Index>& dims() const { return dims_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    Matrix m_;
    std::vector<Eigen::Index> dims_;
};

struct Ensemble {
    Eigen::VectorXd weights;
    std::vector<DensityMatrix> states;
};

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);
DensityMatrix partial_trace(const StateVector& psi, const std::vector<std::size_t>& keep);

/// Shannon entropy of the eigenvalue spectrum, in bits. Eigenvalues in
/// [-1e-9, 0) are clamped to zero; anything more negative is rejected.
double von_neumann_entropy(const DensityMatrix& rho);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Matrix& m);

/// S(avg) - sum_x w_x S(rho^x); the Holevo quantity of the cq-state.
double holevo_information(const Ensemble& e);

namespace detail {

/// Reduced density matrix of an unnormalized vector; no invariant checks.
Matrix reduced(const Vector& amps, const std::vector<Eigen::Index>& dims,
               const std::vector<std::size_t>& keep);

/// Entropy in bits of a Hermitian matrix given directly, with eigenvalue clamping.
double entropy_of_hermitian(const Matrix& m);

} // namespace detail

} // namespace qleak
