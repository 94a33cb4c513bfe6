#include "doslab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace doslab {

namespace {

constexpr double kSnap = 1e-9;

int log2_exact(int dim) {
  for (int n = 0; n < 31; ++n)
    if ((1 << n) == dim) return n;
  return -1;
}

}  // namespace

VerifierInstance VerifierInstance::make(ComplexMatrix om, double a, double b) {
  const double dev = om.hermiticity_deviation();
  if (dev > 1e-12) {
    std::ostringstream os;
    os << "verifier operator is not Hermitian: max |M - M^dagger| = " << dev;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  if (!(0.0 <= b && b < a && a <= 1.0))
    throw Error(ErrorKind::invalid_argument, "thresholds must satisfy 0 <= b < a <= 1");
  VerifierInstance v;
  v.omega = om.symmetrized();
  v.a = a;
  v.b = b;
  v.n = log2_exact(om.dim());
  const std::vector<double> lam = eig_hermitian_values(v.omega);
  if (lam.front() < -kSnap || lam.back() > 1.0 + kSnap) {
    std::ostringstream os;
    os << "verifier spectrum escapes [0,1]: range [" << lam.front() << ", " << lam.back() << "]";
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  return v;
}

CountReport accepting_dimension(const VerifierInstance& v) {
  const std::vector<double> lam = eig_hermitian_values(v.omega);  // ascending
  CountReport r;
  for (double x : lam) {
    if (x >= v.a - kSnap) ++r.dim_accept;
    if (x > v.b + kSnap) ++r.count_max;
    if (x > v.b + kSnap && x < v.a - kSnap) {
      r.promise_ok = false;
      r.offending_eigenvalue = x;
    }
  }
  r.count_min = r.dim_accept;
  const int dim = v.dim();
  if (r.dim_accept > 0) r.lambda_at = lam[dim - r.dim_accept];
  if (r.dim_accept < dim) r.lambda_after = lam[dim - r.dim_accept - 1];
  return r;
}

bool check_subspace_promise(const VerifierInstance& v, const std::vector<CVec>& basis_a,
                            const std::vector<CVec>& basis_r) {
  if (static_cast<int>(basis_a.size() + basis_r.size()) != v.dim())
    throw Error(ErrorKind::invalid_argument,
                "subspace bases must jointly span the full space (column count mismatch)");
  std::vector<CVec> joint = basis_a;
  joint.insert(joint.end(), basis_r.begin(), basis_r.end());
  const double dev = orthonormality_deviation(joint);
  if (dev > 1e-9) {
    std::ostringstream os;
    os << "subspace bases are not jointly orthonormal: deviation " << dev;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  if (!basis_a.empty()) {
    const std::vector<double> lam = eig_hermitian_values(compress(v.omega, basis_a).symmetrized());
    if (lam.front() < v.a - kSnap) return false;
  }
  if (!basis_r.empty()) {
    const std::vector<double> lam = eig_hermitian_values(compress(v.omega, basis_r).symmetrized());
    if (lam.back() > v.b + kSnap) return false;
  }
  return true;
}

bool minimax_certify(const VerifierInstance& v) {
  const CountReport rep = accepting_dimension(v);
  if (!rep.promise_ok) {
    std::ostringstream os;
    os << "gap promise violated: eigenvalue " << *rep.offending_eigenvalue << " lies strictly in ("
       << v.b << ", " << v.a << ")";
    throw Error(ErrorKind::promise_violation, os.str());
  }
  if (!(v.a > v.b)) return false;
  if (rep.lambda_at && *rep.lambda_at < v.a - kSnap) return false;
  if (rep.lambda_after && *rep.lambda_after > v.b + kSnap) return false;
  return true;
}

VerifierInstance amplify_spectrum(const VerifierInstance& v, int r) {
  if (r < 2)
    throw Error(ErrorKind::invalid_argument,
                "amplification requires r >= 2 (r = 1 collapses the thresholds)");
  const CountReport rep = accepting_dimension(v);
  if (!rep.promise_ok)
    throw Error(ErrorKind::promise_violation, "cannot amplify: gap promise violated");

  const double lo = std::ldexp(1.0, -r);  // 2^-r
  const double hi = 1.0 - lo;
  const double a = v.a, b = v.b;
  auto phi = [lo, hi, a, b](double x) {
    x = std::clamp(x, 0.0, 1.0);
    if (x <= b) return b > 0.0 ? x * (lo / b) : 0.0;
    if (x >= a) return a < 1.0 ? hi + (x - a) * (lo / (1.0 - a)) : 1.0;
    return lo + (x - b) * ((hi - lo) / (a - b));
  };
  VerifierInstance out = VerifierInstance::make(spectral_function(v.omega, phi), hi, lo);
  const CountReport after = accepting_dimension(out);
  if (after.dim_accept != rep.dim_accept)
    throw Error(ErrorKind::internal, "amplification changed the accepting dimension");
  return out;
}

}  // namespace doslab
