#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "doslab/bigint.hpp"
#include "doslab/circuit.hpp"

namespace doslab {

constexpr uint64_t kDefaultPathCap = 100000000;  // 1e8 nominal paths

/// One trace path: forward indices i_0..i_T and backward interior indices
/// j_1..j_{T-1}; the boundary identifications j_0 = i_0 and j_T = i_T are
/// implicit. i_0 must have all ancilla bits zero.
struct Path {
  std::vector<uint64_t> fwd;  // size T+1
  std::vector<uint64_t> bwd;  // size T-1
};

/// f(zeta) = P(i_T) prod_t <i_t|U_t|i_{t-1}> prod_t <j_t|U_t|j_{t-1}>, with
/// P(i_T) = 1 iff the output-qubit bit of i_T equals accept_bit. The circuit
/// must be all-real so that f is real.
double path_amplitude(const Circuit& c, const Path& p, int accept_bit = 1);

// nominal path count 2^{n + (2T-1) m}; throws capacity beyond the cap
uint64_t nominal_path_count(const Circuit& c, uint64_t path_cap = kDefaultPathCap);

// |zeta| bookkeeping: 2 T m + n bits per path label
int zeta_bits_of(const Circuit& c);

struct TraceEnumeration {
  double trace = 0.0;            // sum of f over all paths
  uint64_t paths_total = 0;      // nominal count
  uint64_t paths_visited = 0;    // surviving zero-transition pruning
};

/// Sum of f(zeta) over every path; equals tr Omega(c) to 1e-9. Pruning of
/// zero transitions is a pure optimization: skipped paths contribute exactly
/// zero.
TraceEnumeration enumerate_trace(const Circuit& c, int accept_bit = 1,
                                 uint64_t path_cap = kDefaultPathCap);

/// g(zeta) = round-half-away-from-zero of 2^{zeta_bits+2} (f + 1), exact on
/// the double representation of f; f must lie in [-1, 1] up to 1e-9.
BigInt integerize(double f_value, int zeta_bits);

/// h(zeta, xi) = 1 iff 0 <= xi < g(zeta)
bool path_indicator(const BigInt& g, const BigInt& xi);

struct ModelCount {
  BigInt model_count;          // N = sum_zeta g(zeta) = sum_{zeta,xi} h(zeta,xi)
  int zeta_bits = 0;
  uint64_t paths_total = 0;
  uint64_t paths_visited = 0;
  bool rounding_exact = false;  // true when every g was computed without rounding
};

/// N in exact integer arithmetic. Pruned paths have f identically zero and
/// contribute g = 2^{zeta_bits+2} each, accounted for in closed form.
/// exact_rational evaluates f as exact dyadic rationals and requires every
/// gate entry to be a dyadic rational.
ModelCount count_oracle(const Circuit& c, int accept_bit = 1, bool exact_rational = false,
                        uint64_t path_cap = kDefaultPathCap);

struct TraceCountReport {
  double trace_direct = 0.0;   // tr Omega of the circuit as given
  double trace_pathsum = 0.0;
  int zeta_bits = 0;
  BigInt model_count;
  uint64_t num_paths = 0;
  double estimate = 0.0;  // 2^{-zeta_bits-2} N - num_paths
  bool within_quarter = false;
  bool promise_ok = false;
  std::optional<int> dim_estimate;  // nearest integer to tr of the amplified Omega
  double a = 0.0, b = 0.0;
  int r = 0;
  bool exact_rational = false;
  bool rounding_exact = false;
};

/// Full reduction: path-sum trace, integerized model count, reconstruction of
/// the trace to within 1/4, and (when Omega satisfies the promise at (a,b))
/// the accepting dimension recovered from the spectrally amplified instance.
TraceCountReport reconstruct(const Circuit& c, double a, double b, int r,
                             bool exact_rational = false, int accept_bit = 1,
                             uint64_t path_cap = kDefaultPathCap);

}  // namespace doslab
