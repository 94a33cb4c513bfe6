#pragma once

#include <optional>
#include <vector>

#include "doslab/circuit.hpp"
#include "doslab/linalg.hpp"
#include "doslab/local_ham.hpp"

namespace doslab {

enum class FinalVariant { projector, standard };

// full clock-Hamiltonian dimension 2^m (T+1) above this is rejected
constexpr int64_t kClockDimCap = 5000;

/// Clock Hamiltonian H = H_init + sum_t H_evol(t) + H_final over the circuit
/// register tensor an explicit (T+1)-level clock appended after qubit m-1
/// (global index = state + 2^m * t). All three term families are positive
/// semidefinite. eps records the rejection threshold b of the source instance.
struct ClockHamiltonian {
  ComplexMatrix matrix;
  int m = 0;
  int n = 0;
  int t_len = 0;  // circuit length T
  FinalVariant variant = FinalVariant::standard;
  double eps = 0.0;     // = b
  double a_thresh = 0.0;
  ComplexMatrix final_block;  // the 2^m projector tensored with |T><T|
  Circuit source;

  int dim() const { return (1 << m) * (t_len + 1); }
};

/// variant = projector uses Pi_{U[R]} (x) |T><T| with R the eigenvectors of
/// Omega at or below b pushed through the circuit; variant = standard uses
/// |0><0|_0 (x) 1 (x) |T><T|. The gap promise of Omega at (a, b) is required.
ClockHamiltonian compile_clock(const Circuit& c, FinalVariant variant, double a, double b);

/// W = sum_j U_j...U_1 (x) |j><j|; returns H' = W^dagger H W after verifying
/// that the evolution part conjugates to 1 (x) E with E the clock hopping
/// matrix, to 1e-10.
ComplexMatrix block_diagonalize(const ClockHamiltonian& h, const Circuit& c);

/// Closed-form spectra of the clock hopping matrices:
///   E  -> {1 - cos(n pi/(T+1))},        n = 0..T
///   E' -> {1 - cos((n+1/2) pi/(T+3/2))}, n = 0..T
/// sorted ascending.
std::vector<double> hopping_spectrum(int t_len, bool prime);

/// The assembled (T+1)x(T+1) tridiagonal matrix itself; the primed variant
/// adds a half-unit penalty on the last clock state, which realizes the
/// primed closed form exactly and is dominated by every full-strength
/// penalty appearing in compiled Hamiltonians.
ComplexMatrix hopping_matrix(int t_len, bool prime);

double clock_gap_bound(int t_len);  // 1 - cos(pi/(2T+3))

struct GroundSpaceReport {
  int degeneracy = 0;
  double splitting = 0.0;        // width of the ground cluster
  std::optional<double> gap;     // first eigenvalue above the cluster minus its top
  double gap_bound = 0.0;        // 1-cos(pi/(2T+3)) minus sqrt(eps) for the standard variant
  double cutoff = 0.0;
  bool gap_ok = false;
  int expected_dim = 0;
  bool matches_expected = false;
};

/// degeneracy = #{lambda <= cutoff} with cutoff 1e-9 (projector variant) or
/// eps + 1e-9 (standard variant). A degeneracy different from expected_dim is
/// flagged in the report, not thrown.
GroundSpaceReport analyze_ground_space(const ClockHamiltonian& h, int expected_dim);

struct SwapBoundReport {
  double min_eig_diff = 0.0;  // least eigenvalue of H_std - H_proj
  double sqrt_eps = 0.0;
  bool holds = false;
  double chi_max = 0.0;  // max <chi| |1><1|_0 (x) 1 |chi> over a basis of U[R]
  bool chi_ok = false;
};

/// Verifies H_final^std >= H_final - sqrt(eps): both Hamiltonians must come
/// from the same circuit and thresholds. The difference is supported on the
/// |T> clock block, so its least eigenvalue is min(0, lambda_min of the
/// 2^m-dimensional final-block difference).
SwapBoundReport final_term_swap_bound(const ClockHamiltonian& h_proj,
                                      const ClockHamiltonian& h_std);

/// Orthonormal bases, in the W-rotated frame, for S1 (accepting proofs x
/// correct ancilla x clock), S2 (rejecting proofs x correct ancilla x clock),
/// S3 (wrong ancilla); dim S1 = dim A * (T+1).
struct SubspaceSplit {
  std::vector<CVec> s1, s2, s3;
};

SubspaceSplit subspace_split(const Circuit& c, double a, double b);

/// Terms-form view with site dims [2,...,2, T+1]; assembling it reproduces
/// the dense matrix exactly.
LocalHamiltonian to_local_hamiltonian(const ClockHamiltonian& h);

}  // namespace doslab
