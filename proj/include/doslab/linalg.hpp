#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace doslab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

enum class ErrorKind {
  parse,
  invalid_argument,
  promise_violation,
  capacity,
  assertion,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Dense square complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}
  ComplexMatrix(int dim, CVec entries);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix diagonal(const std::vector<double>& d);

  int dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  cplx& at(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const cplx& at(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }
  cplx* row(int r) { return a_.data() + static_cast<size_t>(r) * dim_; }
  const cplx* row(int r) const { return a_.data() + static_cast<size_t>(r) * dim_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  // max |M - M^dagger| entrywise
  double hermiticity_deviation() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_deviation() <= tol; }
  // replaces M by (M + M^dagger)/2
  ComplexMatrix symmetrized() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  bool operator==(const ComplexMatrix& o) const = default;

 private:
  int dim_ = 0;
  CVec a_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
CVec matvec(const ComplexMatrix& a, const CVec& x);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// outer product accumulation: m += s * v w^dagger
void add_outer(ComplexMatrix& m, const CVec& v, const CVec& w, double s = 1.0);

cplx inner(const CVec& a, const CVec& b);  // <a|b>, conjugate-linear in a
double norm2(const CVec& v);

/// Exact eigensystem of a Hermitian matrix. Eigenvalues ascending; eigenvector
/// columns orthonormal with the phase convention that the first component of
/// each column with magnitude above 1e-12 is real positive. Deterministic for
/// identical input.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;  // column k pairs with eigenvalues[k]; empty if values-only

  CVec column(int k) const;
};

// Householder tridiagonalization + implicit-shift QL. Rejects non-square or
// non-Hermitian input (deviation beyond hermitian_tol) with a diagnostic.
SpectralDecomposition eig_hermitian(const ComplexMatrix& m, bool with_vectors = true,
                                    double hermitian_tol = 1e-12);
std::vector<double> eig_hermitian_values(const ComplexMatrix& m, double hermitian_tol = 1e-12);

/// Same eigenvectors, eigenvalues mapped through phi.
ComplexMatrix spectral_function(const ComplexMatrix& m, const std::function<double(double)>& phi);

/// Joint canonical structure of a pair of Hermitian projectors: counts of the
/// commuting (0,0),(0,1),(1,0),(1,1) joint-spectrum blocks plus the principal
/// angles of the genuinely non-commuting 2x2 blocks, each angle in (0, pi/2).
struct PrincipalAngleReport {
  int n00 = 0;
  int n01 = 0;  // ker P intersect ran Q
  int n10 = 0;  // ran P intersect ker Q
  int n11 = 0;
  std::vector<double> angles;  // ascending

  int angle_blocks() const { return static_cast<int>(angles.size()); }
};

// Both inputs are symmetrized, then required to be idempotent to idem_tol.
PrincipalAngleReport principal_angles(const ComplexMatrix& p, const ComplexMatrix& q,
                                      double idem_tol = 1e-10);

/// epsilon = ||Q(1-P)Q||, min_eig = least eigenvalue of P-Q. holds is the
/// statement min_eig >= -sqrt(epsilon) - 1e-9, which is a theorem for any
/// projector pair; it is reported so tests can assert it.
struct ProjectorBoundReport {
  double epsilon = 0.0;
  double min_eig = 0.0;
  double sqrt_epsilon = 0.0;
  bool holds = false;
};

ProjectorBoundReport projector_difference_bound(const ComplexMatrix& p, const ComplexMatrix& q);

// Compression B^dagger M B where B has orthonormal columns of length m.dim().
ComplexMatrix compress(const ComplexMatrix& m, const std::vector<CVec>& basis);

// max |B^dagger B - I| over a joint column set; used to validate bases.
double orthonormality_deviation(const std::vector<CVec>& columns);

// Projector onto the span of (assumed orthonormal) columns.
ComplexMatrix projector_onto(const std::vector<CVec>& columns, int dim);

}  // namespace doslab
