#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doslab/linalg.hpp"
#include "doslab/verifier.hpp"

namespace doslab {

/// One few-body Hermitian term, ||H_i|| <= 1. sites are sorted ascending and
/// the matrix acts on their product space with site order little-endian
/// (first listed site = least significant digit of the local index).
struct LocalTerm {
  std::vector<int> sites;
  ComplexMatrix matrix;
};

struct LocalHamiltonian {
  std::vector<int> site_dims;
  std::vector<LocalTerm> terms;

  int num_sites() const { return static_cast<int>(site_dims.size()); }
  int locality() const;  // k = max support size
  int64_t total_dim() const;

  // structural validation; norm violations (||H_i|| > 1 + 1e-9) are appended
  // to warnings when given, they never abort
  void validate(std::vector<std::string>* warnings = nullptr) const;
};

// total dimension above this is rejected rather than silently approximated
constexpr int64_t kDenseDimCap = 4096;

/// Dense sum of embedded terms; site 0 is the least significant digit of the
/// global index.
ComplexMatrix assemble(const LocalHamiltonian& h);

struct DosQuery {
  double e1 = 0.0;
  double e2 = 0.0;
  double delta = 0.0;  // grace width centered on e1 and e2

  void validate() const;  // e2 - e1 > 0, 0 < delta < e2 - e1
};

struct DosReport {
  int count = 0;  // eigenvalues in [e1, e2], closed with 1e-9 snap
  std::vector<double> grace_violations;
  bool strict_ok = true;
  int count_min = 0;  // grace mode: eigenvalues in [e1+delta/2, e2-delta/2]
  int count_max = 0;  //              eigenvalues in [e1-delta/2, e2+delta/2]
  std::vector<double> eigenvalues;
  std::vector<double> histogram_edges;
  std::vector<int64_t> histogram_counts;
};

DosReport count_dos(const LocalHamiltonian& h, const DosQuery& q, bool grace_mode);

struct GroundCountReport {
  int count = 0;          // dimension of the eigenspace with energy <= e1
  int count_via_dos = 0;  // same number through the DOS reduction
  bool agree = false;
};

/// #{lambda <= e1} given lambda_min >= e0 and an empty interval (e1, e2).
/// Also runs the reduction onto count_dos with delta = e2-e1, E1 = e0-delta/2,
/// E2 = e1+delta/2 and checks the two answers agree.
GroundCountReport count_ground(const LocalHamiltonian& h, double e0, double e1, double e2);

struct ShiftResult {
  LocalHamiltonian h_prime;  // nu * (H^2 - (e1+e2) H + e1 e2)
  double nu = 0.0;
  double a_neg = 0.0;  // in-window eigenvalues of H land at or below this
  double b_pos = 0.0;  // out-of-window eigenvalues land at or above this
  int m_terms = 0;     // number of terms in h_prime
  double e1 = 0.0, e2 = 0.0, delta = 0.0;
};

/// Quadratic spectral shift: eigenvalues lambda of H map to
/// nu (lambda - e1)(lambda - e2), eigenvectors unchanged. Terms of H^2 are
/// emitted as Hermitian pair sums nu(H_i H_j + H_j H_i), i < j, plus nu H_i^2,
/// the linear part and one constant term; nu = 1/(4 m_terms^2) keeps every
/// term subnormalized.
ShiftResult quadratic_shift(const LocalHamiltonian& h, double e1, double e2, double delta);

/// Verifier with acceptance probability 1/2 - <psi|H'|psi>/(2 m_terms) and
/// thresholds a = 1/2 + |a_neg|/(2 m_terms), b = 1/2 - b_pos/(2 m_terms);
/// its accepting dimension equals the DOS count of the source query.
VerifierInstance dos_verifier_omega(const ShiftResult& s);

}  // namespace doslab
