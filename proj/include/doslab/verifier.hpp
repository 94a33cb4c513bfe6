#pragma once

#include <optional>
#include <vector>

#include "doslab/linalg.hpp"

namespace doslab {

/// A verifier operator together with its acceptance/rejection thresholds.
/// Thresholds are closed: eigenvalues within 1e-9 of a or b snap onto them.
struct VerifierInstance {
  ComplexMatrix omega;  // Hermitian, spectrum within [0,1] up to 1e-9
  double a = 0.0;
  double b = 0.0;
  int n = 0;  // input qubits when dim == 2^n, else -1

  int dim() const { return omega.dim(); }
  double gap() const { return a - b; }

  // validates Hermiticity, spectrum bounds and 0 <= b < a <= 1
  static VerifierInstance make(ComplexMatrix om, double a, double b);
};

struct CountReport {
  int dim_accept = 0;
  std::optional<double> lambda_at;     // descending lambda_{dim A}; empty when dim A = 0
  std::optional<double> lambda_after;  // lambda_{dim A + 1}; empty when dim A = dim
  bool promise_ok = true;
  std::optional<double> offending_eigenvalue;  // witness when the promise fails
  int count_min = 0;  // #{lambda >= a}
  int count_max = 0;  // #{lambda > b}; with the promise these coincide with dim_accept
};

/// dim A = number of eigenvalues >= a. Promise violations are reported, not
/// thrown, so callers can surface grace-interval diagnostics.
CountReport accepting_dimension(const VerifierInstance& v);

/// True iff <psi|Omega|psi> >= a on span(basis_a) and <= b on span(basis_r),
/// checked through the extremal eigenvalues of the compressed operators.
/// The two bases must jointly form an orthonormal basis of the full space.
bool check_subspace_promise(const VerifierInstance& v, const std::vector<CVec>& basis_a,
                            const std::vector<CVec>& basis_r);

/// The minimax identity lambda_{dim A} >= a > b >= lambda_{dim A + 1}
/// (eigenvalues descending). Throws on a promise violation.
bool minimax_certify(const VerifierInstance& v);

/// Spectral-level amplification: eigenvectors are kept, eigenvalues move
/// through the monotone piecewise-linear map sending [0,b] onto [0,2^-r] and
/// [a,1] onto [1-2^-r,1]; thresholds become (1-2^-r, 2^-r). Requires r >= 2
/// and a valid promise; dim A is preserved exactly.
VerifierInstance amplify_spectrum(const VerifierInstance& v, int r);

}  // namespace doslab
