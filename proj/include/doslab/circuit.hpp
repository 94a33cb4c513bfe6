#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doslab/linalg.hpp"
#include "doslab/rng.hpp"

namespace doslab {

/// One gate of a circuit. Named gates cover the fixed library; raw gates
/// carry an arbitrary unitary over their targets. The matrix acts on the
/// local index whose bit j is the value of targets[j] (targets[0] is the
/// least significant local bit).
struct Gate {
  std::string name;          // one of the named gates, or "U" for raw
  std::vector<int> targets;  // distinct qubit indices
  ComplexMatrix matrix;      // dim 2^targets.size()

  int arity() const { return static_cast<int>(targets.size()); }
  bool is_raw() const { return name == "U"; }
  double unitarity_deviation() const;  // max |U^dagger U - I|
};

Gate make_named_gate(const std::string& name, const std::vector<int>& targets);
Gate make_raw_gate(const std::vector<int>& targets, ComplexMatrix matrix);

/// Verifier circuit: qubits 0..n-1 form the input register I, qubits n..m-1
/// the ancilla register A (initialized to |0>), and qubit 0 is the measured
/// output. Basis indices are little-endian (qubit 0 = least significant bit).
struct Circuit {
  int m = 0;  // total qubits
  int n = 0;  // input-register qubits
  std::vector<Gate> gates;

  int length() const { return static_cast<int>(gates.size()); }
  void validate() const;  // throws on malformed structure
  bool all_gates_real(double tol = 1e-14) const;
};

struct StateVector {
  int m = 0;
  CVec amplitudes;  // size 2^m, little-endian

  static StateVector basis_state(int m, uint64_t index);
  double norm() const;
};

// Circuit text format, line oriented with '#' comments:
//   qubits <m> inputs <n>
//   G <NAME> <targets...>        NAME in {I,X,Y,Z,H,S,T,CNOT,CZ,SWAP}
//   U <arity> <targets...> <2*4^arity floats, re im pairs, row-major>
// Raw-gate arity is capped at 4 so realified circuits still round-trip.
Circuit parse_circuit(const std::string& text);
std::string serialize_circuit(const Circuit& c);

// structural equality (exact float comparison; serialization round-trips)
bool circuits_equal(const Circuit& a, const Circuit& b);

void apply_gate(StateVector& s, const Gate& g);
void apply_gate_adjoint(StateVector& s, const Gate& g);
StateVector apply_circuit(const Circuit& c, const StateVector& s);
StateVector apply_circuit_adjoint(const Circuit& c, const StateVector& s);

/// Dense lift of a gate to the full 2^m-dimensional space.
ComplexMatrix embed_gate(const Gate& g, int m);

/// The 2^n x 2^n verifier operator
///   Omega = (1_I x <0|_A) U^dagger (|1><1|_0 x 1) U (1_I x |0>_A),
/// built column-by-column by simulating U on each input basis state,
/// projecting on output qubit 0, and back-propagating. 0 <= Omega <= 1.
ComplexMatrix omega(const Circuit& c);

/// Planted verifier on m = n+1 qubits whose Omega has exactly d eigenvalues
/// 1-eps and 2^n-d eigenvalues eps: a seeded scramble on the input register,
/// a swap of the input bit of qubit 0 onto the ancilla, and a rotation of
/// qubit 0 multiplexed over the remaining qubits (angle asin(sqrt(1-eps)) on
/// d patterns, asin(sqrt(eps)) elsewhere), followed by t_pad identity gates.
struct PlantedInstance {
  Circuit circuit;
  int expected_dim = 0;
};

PlantedInstance plant_verifier(int n, int d, int t_pad, double eps, uint64_t seed);

/// Rewrites the circuit with all-real gates on one extra qubit (appended as
/// the highest index, part of the ancilla register): amplitude a+bi is stored
/// as a|r=0> + b|r=1>, and a complex gate A+iB becomes [[A,-B],[B,A]] on its
/// targets plus the r qubit. tr Omega is preserved exactly.
Circuit realify(const Circuit& c);

}  // namespace doslab
