// Copyright 2026 The qdce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex linear algebra over a register of qubits and one truncated
// bosonic mode. Subsystem order is (A1, A2, A3, Cavity); qubit basis is
// |g> = 0, |e> = 1; Fock states are ascending.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdce {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<int>;

inline constexpr Complex kI{0.0, 1.0};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidDensityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Positions of the four parts of the protocol register.
enum Subsystem : int { kA1 = 0, kA2 = 1, kA3 = 2, kCavity = 3 };

inline int total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

inline Dims register_dims(int n_max) {
  if (n_max < 1) throw DimensionError("Fock cutoff n_max must be >= 1");
  return {2, 2, 2, n_max + 1};
}

class StateVector {
 public:
  StateVector(Vector amplitudes, Dims dims) : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (dims_.empty() || std::any_of(dims_.begin(), dims_.end(), [](int d) { return d < 1; }))
      throw DimensionError("state dims must be a non-empty list of positive sizes");
    if (amps_.size() != total_dim(dims_))
      throw DimensionError("state length " + std::to_string(amps_.size()) +
                           " does not match product of dims " + std::to_string(total_dim(dims_)));
  }

  /// Single-subsystem state from a plain amplitude list.
  static StateVector of(std::initializer_list<Complex> amplitudes) {
    Vector v(static_cast<Eigen::Index>(amplitudes.size()));
    Eigen::Index i = 0;
    for (const auto& a : amplitudes) v(i++) = a;
    return StateVector(std::move(v), {static_cast<int>(amplitudes.size())});
  }

  static StateVector basis(int index, int dim) {
    if (index < 0 || index >= dim) throw DimensionError("basis index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return StateVector(std::move(v), {dim});
  }

  const Vector& amplitudes() const { return amps_; }
  const Dims& dims() const { return dims_; }
  int size() const { return static_cast<int>(amps_.size()); }
  Complex operator[](int i) const { return amps_(i); }

  double norm() const { return amps_.norm(); }
  StateVector normalized() const { return StateVector(amps_ / amps_.norm(), dims_); }
  StateVector scaled(Complex s) const { return StateVector(amps_ * s, dims_); }

 private:
  Vector amps_;
  Dims dims_;
};

class Operator {
 public:
  Operator(Matrix matrix, Dims dims) : m_(std::move(matrix)), dims_(std::move(dims)) {
    if (m_.rows() != m_.cols()) throw DimensionError("operator matrix must be square");
    if (m_.rows() != total_dim(dims_))
      throw DimensionError("operator size " + std::to_string(m_.rows()) +
                           " does not match product of dims " + std::to_string(total_dim(dims_)));
  }

  static Operator identity(const Dims& dims) {
    const int n = total_dim(dims);
    return Operator(Matrix::Identity(n, n), dims);
  }

  const Matrix& matrix() const { return m_; }
  const Dims& dims() const { return dims_; }
  int size() const { return static_cast<int>(m_.rows()); }

  Operator adjoint() const { return Operator(m_.adjoint(), dims_); }

  Operator operator*(const Operator& rhs) const {
    if (dims_ != rhs.dims_) throw DimensionError("operator product with mismatched dims");
    return Operator(m_ * rhs.m_, dims_);
  }

  StateVector operator*(const StateVector& psi) const {
    if (dims_ != psi.dims()) throw DimensionError("operator/state dims mismatch");
    return StateVector(m_ * psi.amplitudes(), dims_);
  }

  /// Largest entrywise modulus of U^dagger U - I.
  double unitarity_defect() const {
    return (m_.adjoint() * m_ - Matrix::Identity(size(), size())).cwiseAbs().maxCoeff();
  }
  bool is_unitary(double tol = 1e-12) const { return unitarity_defect() <= tol; }

  double hermiticity_defect() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

 private:
  Matrix m_;
  Dims dims_;
};

/// Reduced density operator over a list of kept subsystems.
struct DensityMatrix {
  Matrix matrix;
  Dims dims;

  double trace() const { return matrix.trace().real(); }
  double purity() const { return (matrix * matrix).trace().real(); }

  /// Eigenvector of the largest eigenvalue; for a pure state this is the
  /// state itself, with the phase fixed so its largest entry is real positive.
  StateVector dominant_state() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix);
    Vector v = es.eigenvectors().col(matrix.rows() - 1);
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    v *= std::conj(v(k)) / std::abs(v(k));
    return StateVector(v, dims);
  }
};

/// Validated 4x4 density operator of two qubits (A2 then A3).
class TwoQubitDensity {
 public:
  explicit TwoQubitDensity(const Eigen::Matrix4cd& m, double tol = 1e-10) : m_(m) {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw InvalidDensityError("density matrix is not Hermitian");
    if (std::abs(m_.trace() - Complex{1.0}) > tol)
      throw InvalidDensityError("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m_);
    if (es.eigenvalues().minCoeff() < -tol)
      throw InvalidDensityError("density matrix has a negative eigenvalue");
  }

  static TwoQubitDensity pure(const Eigen::Vector4cd& psi) {
    return TwoQubitDensity(psi * psi.adjoint());
  }

  static TwoQubitDensity from(const DensityMatrix& rho) {
    if (rho.dims != Dims{2, 2}) throw DimensionError("two-qubit density needs dims [2, 2]");
    return TwoQubitDensity(Eigen::Matrix4cd(rho.matrix));
  }

  const Eigen::Matrix4cd& matrix() const { return m_; }
  double purity() const { return (m_ * m_).trace().real(); }

 private:
  Eigen::Matrix4cd m_;
};

namespace detail {

inline Dims concat_dims(const Dims& a, const Dims& b) {
  Dims out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Row-major mixed-radix digits; the first subsystem is most significant.
inline std::vector<int> digits_of(int index, const Dims& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

inline int index_of(const std::vector<int>& digits, const Dims& dims) {
  int index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

inline void check_targets(std::span<const int> targets, const Dims& register_dims) {
  if (targets.empty()) throw DimensionError("target list is empty");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= static_cast<int>(register_dims.size()))
      throw DimensionError("subsystem index " + std::to_string(targets[i]) + " out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (targets[i] == targets[j]) throw DimensionError("subsystem indices must be distinct");
  }
}

}  // namespace detail

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  return StateVector(detail::kron(a.amplitudes(), b.amplitudes()), detail::concat_dims(a.dims(), b.dims()));
}

inline Operator tensor(const Operator& a, const Operator& b) {
  return Operator(detail::kron(a.matrix(), b.matrix()), detail::concat_dims(a.dims(), b.dims()));
}

/// Kronecker product of the factors in order; dims are concatenated.
template <typename T>
T tensor(std::span<const T> factors) {
  if (factors.empty()) throw DimensionError("tensor of an empty factor list");
  T out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

template <typename T>
T tensor(std::initializer_list<T> factors) {
  return tensor(std::span<const T>(factors.begin(), factors.size()));
}

/// Lifts `op` acting on `targets` (in the order op's dims are declared) to the
/// full register, acting as identity on every other subsystem.
inline Operator embed(const Operator& op, std::span<const int> targets, const Dims& register_dims) {
  detail::check_targets(targets, register_dims);
  if (op.dims().size() != targets.size())
    throw DimensionError("operator has " + std::to_string(op.dims().size()) + " subsystems but " +
                         std::to_string(targets.size()) + " targets were given");
  for (std::size_t k = 0; k < targets.size(); ++k)
    if (op.dims()[k] != register_dims[targets[k]])
      throw DimensionError("operator dim " + std::to_string(op.dims()[k]) + " does not match subsystem " +
                           std::to_string(targets[k]) + " of dim " + std::to_string(register_dims[targets[k]]));

  const int n = total_dim(register_dims);
  const int local = op.size();
  Matrix out = Matrix::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    std::vector<int> digits = detail::digits_of(col, register_dims);
    std::vector<int> local_digits(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) local_digits[k] = digits[targets[k]];
    const int local_col = detail::index_of(local_digits, op.dims());
    for (int local_row = 0; local_row < local; ++local_row) {
      const Complex v = op.matrix()(local_row, local_col);
      if (v == Complex{}) continue;
      const std::vector<int> row_digits = detail::digits_of(local_row, op.dims());
      for (std::size_t k = 0; k < targets.size(); ++k) digits[targets[k]] = row_digits[k];
      out(detail::index_of(digits, register_dims), col) += v;
    }
  }
  return Operator(std::move(out), register_dims);
}

inline Operator embed(const Operator& op, std::initializer_list<int> targets, const Dims& register_dims) {
  return embed(op, std::span<const int>(targets.begin(), targets.size()), register_dims);
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems appear in
/// ascending register order.
inline DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep) {
  const Dims& dims = state.dims();
  detail::check_targets(keep, dims);
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);

  Dims kept_dims, traced_dims;
  for (int k : kept) kept_dims.push_back(dims[k]);
  for (int k : traced) traced_dims.push_back(dims[k]);
  const int nk = total_dim(kept_dims);
  const int nt = traced.empty() ? 1 : total_dim(traced_dims);

  // Reshape psi into an (nk x nt) matrix M so that rho = M M^dagger.
  Matrix m = Matrix::Zero(nk, nt);
  for (int i = 0; i < state.size(); ++i) {
    const std::vector<int> digits = detail::digits_of(i, dims);
    int row = 0, col = 0;
    for (int k : kept) row = row * dims[k] + digits[k];
    for (int k : traced) col = col * dims[k] + digits[k];
    m(row, col) = state[i];
  }
  return DensityMatrix{m * m.adjoint(), kept_dims};
}

inline DensityMatrix partial_trace(const StateVector& state, std::initializer_list<int> keep) {
  return partial_trace(state, std::span<const int>(keep.begin(), keep.end()));
}

/// |<a|b>|^2, insensitive to the global phase of either argument.
inline double fidelity_up_to_global_phase(const StateVector& a, const StateVector& b) {
  if (a.dims() != b.dims()) throw DimensionError("fidelity of states with different dims");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Re-expresses a register state under a different Fock cutoff. Shrinking is
/// only allowed when the dropped levels carry no amplitude beyond `tol`.
inline StateVector with_fock_cutoff(const StateVector& state, int n_max, double tol = 1e-12) {
  const Dims& dims = state.dims();
  Dims out_dims = dims;
  out_dims.back() = n_max + 1;
  Vector out = Vector::Zero(total_dim(out_dims));
  for (int i = 0; i < state.size(); ++i) {
    std::vector<int> digits = detail::digits_of(i, dims);
    if (digits.back() > n_max) {
      if (std::abs(state[i]) > tol) throw DimensionError("populated Fock level above the new cutoff");
      continue;
    }
    out(detail::index_of(digits, out_dims)) = state[i];
  }
  return StateVector(std::move(out), std::move(out_dims));
}

// Single-qubit and single-mode building blocks.

inline StateVector ket_g() { return StateVector::basis(0, 2); }
inline StateVector ket_e() { return StateVector::basis(1, 2); }
inline StateVector fock(int n, int n_max) { return StateVector::basis(n, n_max + 1); }

/// sigma^+ = |e><g|
inline Operator sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return Operator(m, {2});
}

/// sigma^- = |g><e|
inline Operator sigma_minus() { return sigma_plus().adjoint(); }

/// sigma_ee = |e><e|
inline Operator sigma_ee() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return Operator(m, {2});
}

inline Operator pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return Operator(m, {2});
}

/// Truncated annihilation operator on Fock(n_max + 1).
inline Operator annihilation(int n_max) {
  Matrix m = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(m, {n_max + 1});
}

inline Operator creation(int n_max) { return annihilation(n_max).adjoint(); }

inline Operator number(int n_max) {
  Matrix m = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) m(n, n) = static_cast<double>(n);
  return Operator(m, {n_max + 1});
}

/// Population of the cavity on Fock levels >= `level`.
inline double fock_population_at_or_above(const StateVector& state, int level) {
  const int nf = state.dims().back();
  double p = 0.0;
  for (int i = 0; i < state.size(); ++i)
    if (i % nf >= level) p += std::norm(state[i]);
  return p;
}

}  // namespace qdce
