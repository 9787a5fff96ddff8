#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mpscap {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Sizes here are tiny (bond dimension <= 3)
/// up to a few hundred for the finite-n channel matrices, so there is no
/// blocking or expression-template machinery.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Max-abs entrywise distance. Throws StructuralError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// a^dagger * m * a.
ComplexMatrix congruence(const ComplexMatrix& a, const ComplexMatrix& m);

/// a * m * a^dagger.
ComplexMatrix conjugate_by(const ComplexMatrix& a, const ComplexMatrix& m);

// Allocation-free a^dagger m a for the enumeration hot loop. `scratch` and
// `out` must already be square with a's dimension.
void congruence_into(const ComplexMatrix& a, const ComplexMatrix& m, ComplexMatrix& scratch,
                     ComplexMatrix& out);

double hermiticity_residual(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// ascending. Off-diagonal entries are driven below `tol` (max-abs).
/// Only the Hermitian part of `m` is used.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double tol = 1e-12,
                                          int max_sweeps = 100);

}  // namespace mpscap
