#include "doslab/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace doslab {

namespace {

constexpr int kMaxRawArity = 4;   // parse-level cap; realified 3-qubit gates need 4
constexpr int kMaxQubits = 14;

const double kInvSqrt2 = 0.70710678118654752440084436210485;

ComplexMatrix named_matrix(const std::string& name) {
  auto m2 = [](cplx a, cplx b, cplx c, cplx d) {
    ComplexMatrix m(2);
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 0) = c;
    m.at(1, 1) = d;
    return m;
  };
  if (name == "I") return ComplexMatrix::identity(2);
  if (name == "X") return m2(0, 1, 1, 0);
  if (name == "Y") return m2(0, cplx(0, -1), cplx(0, 1), 0);
  if (name == "Z") return m2(1, 0, 0, -1);
  if (name == "H") return m2(kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
  if (name == "S") return m2(1, 0, 0, cplx(0, 1));
  if (name == "T") return m2(1, 0, 0, cplx(kInvSqrt2, kInvSqrt2));
  if (name == "CNOT") {
    // targets (control, target); local bit 0 = control, bit 1 = target
    ComplexMatrix m(4);
    m.at(0, 0) = 1;
    m.at(3, 1) = 1;
    m.at(2, 2) = 1;
    m.at(1, 3) = 1;
    return m;
  }
  if (name == "CZ") {
    ComplexMatrix m = ComplexMatrix::identity(4);
    m.at(3, 3) = -1;
    return m;
  }
  if (name == "SWAP") {
    ComplexMatrix m(4);
    m.at(0, 0) = 1;
    m.at(2, 1) = 1;
    m.at(1, 2) = 1;
    m.at(3, 3) = 1;
    return m;
  }
  throw Error(ErrorKind::parse, "unknown gate name '" + name + "'");
}

int named_arity(const std::string& name) {
  return (name == "CNOT" || name == "CZ" || name == "SWAP") ? 2 : 1;
}

void check_targets(const std::vector<int>& targets) {
  std::set<int> seen;
  for (int t : targets) {
    if (t < 0) throw Error(ErrorKind::invalid_argument, "negative qubit index");
    if (!seen.insert(t).second)
      throw Error(ErrorKind::invalid_argument, "repeated qubit index in gate targets");
  }
}

}  // namespace

double Gate::unitarity_deviation() const {
  return max_abs_diff(matmul(matrix.adjoint(), matrix), ComplexMatrix::identity(matrix.dim()));
}

Gate make_named_gate(const std::string& name, const std::vector<int>& targets) {
  Gate g{name, targets, named_matrix(name)};
  check_targets(targets);
  if (static_cast<int>(targets.size()) != named_arity(name))
    throw Error(ErrorKind::invalid_argument,
                "gate " + name + " expects " + std::to_string(named_arity(name)) + " target(s)");
  return g;
}

Gate make_raw_gate(const std::vector<int>& targets, ComplexMatrix matrix) {
  check_targets(targets);
  if (targets.empty() || static_cast<int>(targets.size()) > kMaxRawArity)
    throw Error(ErrorKind::invalid_argument, "raw gate arity out of range");
  if (matrix.dim() != (1 << targets.size()))
    throw Error(ErrorKind::invalid_argument, "raw gate matrix dimension mismatch");
  Gate g{"U", targets, std::move(matrix)};
  const double dev = g.unitarity_deviation();
  if (dev > 1e-10) {
    std::ostringstream os;
    os << "raw gate is not unitary: max |U^dagger U - I| = " << dev;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  return g;
}

void Circuit::validate() const {
  if (m < 1 || m > kMaxQubits)
    throw Error(ErrorKind::invalid_argument, "qubit count out of supported range");
  if (n < 0 || n > m) throw Error(ErrorKind::invalid_argument, "input register larger than circuit");
  if (gates.empty()) throw Error(ErrorKind::invalid_argument, "circuit must contain at least one gate");
  for (const Gate& g : gates)
    for (int t : g.targets)
      if (t >= m) throw Error(ErrorKind::invalid_argument, "gate target out of range");
}

bool Circuit::all_gates_real(double tol) const {
  for (const Gate& g : gates)
    for (int i = 0; i < g.matrix.dim(); ++i)
      for (int j = 0; j < g.matrix.dim(); ++j)
        if (std::abs(g.matrix.at(i, j).imag()) > tol) return false;
  return true;
}

StateVector StateVector::basis_state(int m, uint64_t index) {
  StateVector s{m, CVec(size_t{1} << m)};
  s.amplitudes[index] = 1.0;
  return s;
}

double StateVector::norm() const { return norm2(amplitudes); }

Circuit parse_circuit(const std::string& text) {
  Circuit c;
  bool have_header = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;

    if (tok == "qubits") {
      std::string kw;
      if (have_header) fail("duplicate header");
      if (!(ls >> c.m >> kw >> c.n) || kw != "inputs") fail("malformed header, expected 'qubits <m> inputs <n>'");
      if (c.m < 1 || c.m > kMaxQubits) fail("qubit count out of supported range");
      if (c.n < 0 || c.n > c.m) fail("inputs exceed qubit count");
      have_header = true;
    } else if (tok == "G") {
      if (!have_header) fail("gate before header");
      std::string name;
      if (!(ls >> name)) fail("missing gate name");
      std::vector<int> targets;
      int t;
      while (ls >> t) targets.push_back(t);
      try {
        Gate g = make_named_gate(name, targets);
        for (int q : g.targets)
          if (q >= c.m) fail("target out of range");
        c.gates.push_back(std::move(g));
      } catch (const Error& e) {
        fail(e.what());
      }
    } else if (tok == "U") {
      if (!have_header) fail("gate before header");
      int arity;
      if (!(ls >> arity)) fail("missing raw gate arity");
      if (arity < 1 || arity > kMaxRawArity) fail("raw gate arity out of range");
      std::vector<int> targets(arity);
      for (int& q : targets) {
        if (!(ls >> q)) fail("missing raw gate target");
        if (q < 0 || q >= c.m) fail("target out of range");
      }
      const int dim = 1 << arity;
      CVec entries(static_cast<size_t>(dim) * dim);
      for (cplx& z : entries) {
        double re, im;
        if (!(ls >> re >> im)) fail("missing raw gate matrix entries");
        z = cplx(re, im);
      }
      double extra;
      if (ls >> extra) fail("trailing entries after raw gate matrix");
      try {
        c.gates.push_back(make_raw_gate(targets, ComplexMatrix(dim, std::move(entries))));
      } catch (const Error& e) {
        fail(e.what());
      }
    } else {
      fail("unknown directive '" + tok + "'");
    }
  }
  if (!have_header) throw Error(ErrorKind::parse, "missing 'qubits <m> inputs <n>' header");
  if (c.gates.empty()) throw Error(ErrorKind::parse, "circuit must contain at least one gate");
  c.validate();
  return c;
}

std::string serialize_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "qubits " << c.m << " inputs " << c.n << "\n";
  char buf[64];
  for (const Gate& g : c.gates) {
    if (!g.is_raw()) {
      os << "G " << g.name;
      for (int t : g.targets) os << ' ' << t;
      os << "\n";
    } else {
      os << "U " << g.arity();
      for (int t : g.targets) os << ' ' << t;
      for (int i = 0; i < g.matrix.dim(); ++i)
        for (int j = 0; j < g.matrix.dim(); ++j) {
          std::snprintf(buf, sizeof buf, " %.17g %.17g", g.matrix.at(i, j).real(),
                        g.matrix.at(i, j).imag());
          os << buf;
        }
      os << "\n";
    }
  }
  return os.str();
}

bool circuits_equal(const Circuit& a, const Circuit& b) {
  if (a.m != b.m || a.n != b.n || a.gates.size() != b.gates.size()) return false;
  for (size_t i = 0; i < a.gates.size(); ++i) {
    const Gate& x = a.gates[i];
    const Gate& y = b.gates[i];
    if (x.name != y.name || x.targets != y.targets || !(x.matrix == y.matrix)) return false;
  }
  return true;
}

namespace {

void apply_gate_matrix(StateVector& s, const std::vector<int>& targets, const ComplexMatrix& u) {
  const int g = static_cast<int>(targets.size());
  const int local_dim = 1 << g;
  const uint64_t size = uint64_t{1} << s.m;

  uint64_t target_mask = 0;
  for (int t : targets) target_mask |= uint64_t{1} << t;

  std::vector<uint64_t> spread(local_dim, 0);
  for (int l = 0; l < local_dim; ++l)
    for (int j = 0; j < g; ++j)
      if (l & (1 << j)) spread[l] |= uint64_t{1} << targets[j];

  CVec in(local_dim), out(local_dim);
  for (uint64_t base = 0; base < size; ++base) {
    if (base & target_mask) continue;
    for (int l = 0; l < local_dim; ++l) in[l] = s.amplitudes[base | spread[l]];
    for (int r = 0; r < local_dim; ++r) {
      cplx acc = 0.0;
      const cplx* row = u.row(r);
      for (int l = 0; l < local_dim; ++l) acc += row[l] * in[l];
      out[r] = acc;
    }
    for (int l = 0; l < local_dim; ++l) s.amplitudes[base | spread[l]] = out[l];
  }
}

}  // namespace

void apply_gate(StateVector& s, const Gate& g) { apply_gate_matrix(s, g.targets, g.matrix); }

void apply_gate_adjoint(StateVector& s, const Gate& g) {
  apply_gate_matrix(s, g.targets, g.matrix.adjoint());
}

StateVector apply_circuit(const Circuit& c, const StateVector& s) {
  if (s.m != c.m) throw Error(ErrorKind::invalid_argument, "state and circuit qubit counts differ");
  StateVector r = s;
  for (const Gate& g : c.gates) apply_gate(r, g);
  return r;
}

StateVector apply_circuit_adjoint(const Circuit& c, const StateVector& s) {
  if (s.m != c.m) throw Error(ErrorKind::invalid_argument, "state and circuit qubit counts differ");
  StateVector r = s;
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) apply_gate_adjoint(r, *it);
  return r;
}

ComplexMatrix embed_gate(const Gate& g, int m) {
  const uint64_t size = uint64_t{1} << m;
  const int arity = g.arity();
  uint64_t target_mask = 0;
  for (int t : g.targets) target_mask |= uint64_t{1} << t;

  auto local_index = [&](uint64_t full) {
    int l = 0;
    for (int j = 0; j < arity; ++j)
      if (full & (uint64_t{1} << g.targets[j])) l |= 1 << j;
    return l;
  };

  ComplexMatrix u(static_cast<int>(size));
  for (uint64_t row = 0; row < size; ++row)
    for (uint64_t col = 0; col < size; ++col) {
      if ((row & ~target_mask) != (col & ~target_mask)) continue;
      u.at(static_cast<int>(row), static_cast<int>(col)) =
          g.matrix.at(local_index(row), local_index(col));
    }
  return u;
}

ComplexMatrix omega(const Circuit& c) {
  c.validate();
  const int dim = 1 << c.n;
  ComplexMatrix om(dim);
  for (int i = 0; i < dim; ++i) {
    StateVector psi = StateVector::basis_state(c.m, static_cast<uint64_t>(i));
    StateVector phi = apply_circuit(c, psi);
    for (size_t idx = 0; idx < phi.amplitudes.size(); ++idx)
      if (!(idx & 1)) phi.amplitudes[idx] = 0.0;  // keep output qubit = |1>
    StateVector chi = apply_circuit_adjoint(c, phi);
    for (int j = 0; j < dim; ++j) om.at(j, i) = chi.amplitudes[j];
  }
  const double dev = om.hermiticity_deviation();
  if (dev > 1e-9)
    throw Error(ErrorKind::internal, "assembled verifier operator is not Hermitian");
  return om.symmetrized();
}

namespace {

ComplexMatrix random_gaussian_matrix(int dim, CounterRng& rng, bool complex_entries) {
  ComplexMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double re = rng.next_gaussian();
      const double im = complex_entries ? rng.next_gaussian() : 0.0;
      g.at(i, j) = cplx(re, im);
    }
  return g;
}

// Gram-Schmidt on columns; deterministic, no pivoting.
ComplexMatrix orthonormalized_columns(ComplexMatrix g) {
  const int n = g.dim();
  for (int j = 0; j < n; ++j) {
    CVec col(n);
    for (int i = 0; i < n; ++i) col[i] = g.at(i, j);
    for (int k = 0; k < j; ++k) {
      CVec prev(n);
      for (int i = 0; i < n; ++i) prev[i] = g.at(i, k);
      const cplx ov = inner(prev, col);
      for (int i = 0; i < n; ++i) col[i] -= ov * prev[i];
    }
    const double nn = norm2(col);
    if (nn < 1e-12) throw Error(ErrorKind::internal, "rank-deficient random matrix");
    for (int i = 0; i < n; ++i) g.at(i, j) = col[i] / nn;
  }
  return g;
}

// real orthogonal scrambles keep planted circuits all-real, so realification
// appends only the idle qubit and the planted spectrum survives verbatim
ComplexMatrix random_orthogonal(int dim, CounterRng& rng) {
  return orthonormalized_columns(random_gaussian_matrix(dim, rng, false));
}

// multiplexed-rotation gate list: rotation of qubit 0 by theta[y], selected by
// control qubits (1..k) holding pattern y; adjacent CNOT chains are merged
// into raw 3-qubit gates to keep planted circuits short.
struct MuxEmitter {
  std::vector<Gate> out;

  void emit(const std::vector<int>& controls, const std::vector<double>& theta) {
    const int k = static_cast<int>(controls.size());
    if (k <= 2) {
      // one raw gate on (0, controls...): block-diagonal rotations
      const int dim = 1 << (k + 1);
      ComplexMatrix u(dim);
      for (int y = 0; y < (1 << k); ++y) {
        const double c = std::cos(theta[y]);
        const double s = std::sin(theta[y]);
        const int base = y << 1;  // local bit 0 = target
        u.at(base, base) = c;
        u.at(base, base | 1) = -s;
        u.at(base | 1, base) = s;
        u.at(base | 1, base | 1) = c;
      }
      std::vector<int> targets{0};
      targets.insert(targets.end(), controls.begin(), controls.end());
      out.push_back(make_raw_gate(targets, std::move(u)));
      return;
    }
    // peel the last control: R(theta_y0/1) = R(plus_y -/+ minus_y) around CNOTs
    const int half = 1 << (k - 1);
    std::vector<double> plus(half), minus(half);
    for (int y = 0; y < half; ++y) {
      plus[y] = 0.5 * (theta[y] + theta[y + half]);
      minus[y] = 0.5 * (theta[y] - theta[y + half]);
    }
    const std::vector<int> rest(controls.begin(), controls.end() - 1);
    const int last = controls.back();
    out.push_back(make_named_gate("CNOT", {last, 0}));
    emit(rest, minus);
    out.push_back(make_named_gate("CNOT", {last, 0}));
    emit(rest, plus);
  }

  // merge adjacent CNOT(c,0) pairs into one raw permutation gate
  std::vector<Gate> merged() const {
    std::vector<Gate> m;
    size_t i = 0;
    while (i < out.size()) {
      if (i + 1 < out.size() && out[i].name == "CNOT" && out[i + 1].name == "CNOT" &&
          out[i].targets[0] != out[i + 1].targets[0]) {
        const int c1 = out[i].targets[0];
        const int c2 = out[i + 1].targets[0];
        ComplexMatrix u(8);  // targets (0, c1, c2): X on bit 0 iff bit1 ^ bit2... no: iff bit1 or bit2 set
        for (int b = 0; b < 8; ++b) {
          const int flips = ((b >> 1) & 1) ^ ((b >> 2) & 1);
          // second CNOT applied after first; both flip bit 0 when their control is set,
          // so the net flip is the XOR of the two control bits
          u.at(b ^ flips, b) = 1.0;
        }
        m.push_back(make_raw_gate({0, c1, c2}, std::move(u)));
        i += 2;
      } else {
        m.push_back(out[i]);
        ++i;
      }
    }
    return m;
  }
};

}  // namespace

PlantedInstance plant_verifier(int n, int d, int t_pad, double eps, uint64_t seed) {
  if (n < 1 || n + 1 > kMaxQubits)
    throw Error(ErrorKind::invalid_argument, "plant: n out of supported range");
  if (d < 0 || d > (1 << n))
    throw Error(ErrorKind::invalid_argument, "plant: d must lie in [0, 2^n]");
  if (!(eps >= 0.0 && eps < 0.25))
    throw Error(ErrorKind::invalid_argument, "plant: eps must lie in [0, 1/4)");
  if (t_pad < 0) throw Error(ErrorKind::invalid_argument, "plant: negative padding");

  const int m = n + 1;
  CounterRng rng(seed);
  Circuit c;
  c.m = m;
  c.n = n;

  // seeded scramble of the input register: a random unitary on one or two qubits
  if (n == 1) {
    c.gates.push_back(make_raw_gate({0}, random_orthogonal(2, rng)));
  } else {
    const int qa = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
    int qb = static_cast<int>(rng.next_below(static_cast<uint64_t>(n - 1)));
    if (qb >= qa) ++qb;
    c.gates.push_back(make_raw_gate({qa, qb}, random_orthogonal(4, rng)));
  }

  // decision: move the qubit-0 input bit onto the ancilla, then rotate qubit 0
  // by asin(sqrt(1-eps)) on the first d control patterns and asin(sqrt(eps))
  // on the rest, so <x|Omega|x'> = delta_xx' with exactly d entries 1-eps.
  const double th_acc = std::asin(std::sqrt(1.0 - eps));
  const double th_rej = std::asin(std::sqrt(eps));
  std::vector<double> theta(1 << n, th_rej);
  for (int y = 0; y < d; ++y) theta[y] = th_acc;

  if (n <= 2) {
    // swap + multiplexed rotation fit in a single raw gate on all m qubits
    const int dim = 1 << m;
    ComplexMatrix swap_m(dim);
    for (int b = 0; b < dim; ++b) {
      const int b0 = b & 1, bn = (b >> n) & 1;
      const int swapped = (b & ~(1 | (1 << n))) | (bn) | (b0 << n);
      swap_m.at(swapped, b) = 1.0;
    }
    ComplexMatrix rot(dim);
    for (int y = 0; y < (1 << n); ++y) {
      const double cth = std::cos(theta[y]);
      const double sth = std::sin(theta[y]);
      const int base = y << 1;
      rot.at(base, base) = cth;
      rot.at(base, base | 1) = -sth;
      rot.at(base | 1, base) = sth;
      rot.at(base | 1, base | 1) = cth;
    }
    std::vector<int> targets(m);
    for (int q = 0; q < m; ++q) targets[q] = q;
    c.gates.push_back(make_raw_gate(targets, matmul(rot, swap_m)));
  } else {
    c.gates.push_back(make_named_gate("SWAP", {0, n}));
    MuxEmitter mux;
    std::vector<int> controls(n);
    for (int q = 1; q <= n; ++q) controls[q - 1] = q;
    mux.emit(controls, theta);
    for (Gate& g : mux.merged()) c.gates.push_back(std::move(g));
  }

  for (int i = 0; i < t_pad; ++i) c.gates.push_back(make_named_gate("I", {0}));
  c.validate();
  return PlantedInstance{std::move(c), d};
}

Circuit realify(const Circuit& c) {
  c.validate();
  Circuit r;
  r.m = c.m + 1;
  r.n = c.n;
  if (r.m > kMaxQubits)
    throw Error(ErrorKind::capacity, "realified circuit exceeds the supported qubit count");
  const int rq = c.m;  // appended real/imaginary qubit

  for (const Gate& g : c.gates) {
    bool real = true;
    for (int i = 0; i < g.matrix.dim() && real; ++i)
      for (int j = 0; j < g.matrix.dim(); ++j)
        if (std::abs(g.matrix.at(i, j).imag()) > 1e-14) {
          real = false;
          break;
        }
    if (real) {
      r.gates.push_back(g);
      continue;
    }
    if (g.arity() + 1 > kMaxRawArity)
      throw Error(ErrorKind::capacity, "cannot realify a complex gate of arity 4");
    const int dl = g.matrix.dim();
    ComplexMatrix u(2 * dl);  // local bit layout: gate bits low, r bit highest
    for (int i = 0; i < dl; ++i)
      for (int j = 0; j < dl; ++j) {
        const double re = g.matrix.at(i, j).real();
        const double im = g.matrix.at(i, j).imag();
        u.at(i, j) = re;
        u.at(i, j + dl) = -im;
        u.at(i + dl, j) = im;
        u.at(i + dl, j + dl) = re;
      }
    std::vector<int> targets = g.targets;
    targets.push_back(rq);
    r.gates.push_back(make_raw_gate(targets, std::move(u)));
  }
  r.validate();
  return r;
}

}  // namespace doslab
