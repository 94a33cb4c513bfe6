#include "doslab/clock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doslab/verifier.hpp"

namespace doslab {

namespace {

constexpr double kSnap = 1e-9;
const double kPi = 3.14159265358979323846264338327950288;

// eigenvectors of Omega with eigenvalue <= b + snap, ascending
std::vector<CVec> rejecting_eigenvectors(const SpectralDecomposition& s, double b) {
  std::vector<CVec> r;
  for (size_t k = 0; k < s.eigenvalues.size(); ++k)
    if (s.eigenvalues[k] <= b + kSnap) r.push_back(s.column(static_cast<int>(k)));
  return r;
}

// |v>_I |0>_A lifted to the full 2^m register
CVec lift_input(const CVec& v, int m) {
  CVec out(size_t{1} << m);
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

CVec push_through(const Circuit& c, const CVec& lifted) {
  StateVector s{c.m, lifted};
  return apply_circuit(c, s).amplitudes;
}

}  // namespace

ClockHamiltonian compile_clock(const Circuit& c, FinalVariant variant, double a, double b) {
  c.validate();
  const int m = c.m;
  const int t_len = c.length();
  const int ns = 1 << m;
  const int64_t dim = int64_t{ns} * (t_len + 1);
  if (dim > kClockDimCap) {
    std::ostringstream os;
    os << "clock Hamiltonian dimension " << dim << " exceeds the cap " << kClockDimCap;
    throw Error(ErrorKind::capacity, os.str());
  }

  const ComplexMatrix om = omega(c);
  const VerifierInstance vi = VerifierInstance::make(om, a, b);
  const CountReport count = accepting_dimension(vi);
  if (!count.promise_ok) {
    std::ostringstream os;
    os << "source verifier violates the gap promise at (" << a << ", " << b
       << "): eigenvalue " << *count.offending_eigenvalue;
    throw Error(ErrorKind::promise_violation, os.str());
  }

  ClockHamiltonian h;
  h.m = m;
  h.n = c.n;
  h.t_len = t_len;
  h.variant = variant;
  h.eps = b;
  h.a_thresh = a;
  h.source = c;
  h.matrix = ComplexMatrix(static_cast<int>(dim));
  ComplexMatrix& H = h.matrix;
  auto idx = [ns](int s, int t) { return s + ns * t; };

  // H_init = 1_I (x) (1 - |0><0|_A) (x) |0><0|_T
  const int anc_mask = (ns - 1) & ~((1 << c.n) - 1);
  for (int s = 0; s < ns; ++s)
    if (s & anc_mask) H.at(idx(s, 0), idx(s, 0)) += 1.0;

  // H_evol(t) = 1/2 [ 1 (x) (|t><t| + |t-1><t-1|) - U_t (x) |t><t-1| - U_t^dag (x) |t-1><t| ]
  for (int t = 1; t <= t_len; ++t) {
    const ComplexMatrix u = embed_gate(c.gates[t - 1], m);
    for (int r = 0; r < ns; ++r) {
      H.at(idx(r, t), idx(r, t)) += 0.5;
      H.at(idx(r, t - 1), idx(r, t - 1)) += 0.5;
      for (int s = 0; s < ns; ++s) {
        const cplx z = u.at(r, s);
        if (z == cplx(0.0, 0.0)) continue;
        H.at(idx(r, t), idx(s, t - 1)) -= 0.5 * z;
        H.at(idx(s, t - 1), idx(r, t)) -= 0.5 * std::conj(z);
      }
    }
  }

  // H_final at clock T
  ComplexMatrix fin(ns);
  if (variant == FinalVariant::standard) {
    for (int s = 0; s < ns; ++s)
      if (!(s & 1)) fin.at(s, s) = 1.0;  // |0><0| on the output qubit
  } else {
    const SpectralDecomposition sd = eig_hermitian(om);
    for (const CVec& r : rejecting_eigenvectors(sd, b)) {
      const CVec chi = push_through(c, lift_input(r, m));
      add_outer(fin, chi, chi);
    }
    fin = fin.symmetrized();
  }
  for (int r = 0; r < ns; ++r)
    for (int s = 0; s < ns; ++s) H.at(idx(r, t_len), idx(s, t_len)) += fin.at(r, s);

  h.final_block = std::move(fin);
  return h;
}

// E' carries a half-unit penalty on the last clock state: its spectrum is
// exactly 1 - cos((n+1/2) pi/(T+3/2)), and every penalized sector of the
// compiled Hamiltonian (whose end penalties are full strength) dominates it.
ComplexMatrix hopping_matrix(int t_len, bool prime) {
  if (t_len < 1) throw Error(ErrorKind::invalid_argument, "hopping matrix requires T >= 1");
  const int n = t_len + 1;
  ComplexMatrix e(n);
  for (int i = 0; i < n; ++i) e.at(i, i) = 1.0;
  e.at(0, 0) = 0.5;
  e.at(n - 1, n - 1) = prime ? 1.0 : 0.5;
  for (int i = 0; i + 1 < n; ++i) {
    e.at(i, i + 1) = -0.5;
    e.at(i + 1, i) = -0.5;
  }
  return e;
}

std::vector<double> hopping_spectrum(int t_len, bool prime) {
  if (t_len < 1) throw Error(ErrorKind::invalid_argument, "hopping spectrum requires T >= 1");
  std::vector<double> lam(t_len + 1);
  for (int k = 0; k <= t_len; ++k) {
    const double w = prime ? (k + 0.5) * kPi / (t_len + 1.5) : k * kPi / (t_len + 1);
    lam[k] = 1.0 - std::cos(w);
  }
  std::sort(lam.begin(), lam.end());
  return lam;
}

double clock_gap_bound(int t_len) { return 1.0 - std::cos(kPi / (2 * t_len + 3)); }

ComplexMatrix block_diagonalize(const ClockHamiltonian& h, const Circuit& c) {
  c.validate();
  if (c.m != h.m || c.length() != h.t_len)
    throw Error(ErrorKind::invalid_argument, "circuit does not match the clock Hamiltonian");
  const int ns = 1 << h.m;
  const int nt = h.t_len + 1;

  // prefix products P_j = U_j ... U_1 (P_0 = 1)
  std::vector<ComplexMatrix> prefix(nt);
  prefix[0] = ComplexMatrix::identity(ns);
  for (int j = 1; j < nt; ++j)
    prefix[j] = matmul(embed_gate(c.gates[j - 1], h.m), prefix[j - 1]);

  // H' = W^dag H W blockwise: H'[t,t'] = P_t^dag H[t,t'] P_t'
  auto block = [&](const ComplexMatrix& src, int t, int tp) {
    ComplexMatrix b(ns);
    for (int r = 0; r < ns; ++r)
      for (int s = 0; s < ns; ++s) b.at(r, s) = src.at(r + ns * t, s + ns * tp);
    return b;
  };
  ComplexMatrix out(h.matrix.dim());
  for (int t = 0; t < nt; ++t)
    for (int tp = 0; tp < nt; ++tp) {
      const ComplexMatrix b = matmul(prefix[t].adjoint(), matmul(block(h.matrix, t, tp), prefix[tp]));
      for (int r = 0; r < ns; ++r)
        for (int s = 0; s < ns; ++s) out.at(r + ns * t, s + ns * tp) = b.at(r, s);
    }

  // the evolution part must conjugate exactly to 1 (x) E
  ComplexMatrix evol(h.matrix.dim());
  for (int t = 1; t <= h.t_len; ++t) {
    const ComplexMatrix u = embed_gate(c.gates[t - 1], h.m);
    for (int r = 0; r < ns; ++r) {
      evol.at(r + ns * t, r + ns * t) += 0.5;
      evol.at(r + ns * (t - 1), r + ns * (t - 1)) += 0.5;
      for (int s = 0; s < ns; ++s) {
        const cplx z = u.at(r, s);
        if (z == cplx(0.0, 0.0)) continue;
        evol.at(r + ns * t, s + ns * (t - 1)) -= 0.5 * z;
        evol.at(s + ns * (t - 1), r + ns * t) -= 0.5 * std::conj(z);
      }
    }
  }
  ComplexMatrix evol_rot(h.matrix.dim());
  for (int t = 0; t < nt; ++t)
    for (int tp = 0; tp < nt; ++tp) {
      const ComplexMatrix b = matmul(prefix[t].adjoint(), matmul(block(evol, t, tp), prefix[tp]));
      for (int r = 0; r < ns; ++r)
        for (int s = 0; s < ns; ++s) evol_rot.at(r + ns * t, s + ns * tp) = b.at(r, s);
    }
  const ComplexMatrix expected = kron(hopping_matrix(h.t_len, false), ComplexMatrix::identity(ns));
  if (max_abs_diff(evol_rot, expected) > 1e-10)
    throw Error(ErrorKind::internal, "conjugated evolution term is not 1 (x) E");

  return out;
}

GroundSpaceReport analyze_ground_space(const ClockHamiltonian& h, int expected_dim) {
  const std::vector<double> lam = eig_hermitian_values(h.matrix.symmetrized());
  GroundSpaceReport rep;
  rep.expected_dim = expected_dim;
  rep.cutoff = (h.variant == FinalVariant::projector) ? kSnap : h.eps + kSnap;
  for (double x : lam)
    if (x <= rep.cutoff) ++rep.degeneracy;
  rep.splitting = rep.degeneracy > 0 ? lam[rep.degeneracy - 1] - lam[0] : 0.0;
  const double top = rep.degeneracy > 0 ? lam[rep.degeneracy - 1] : 0.0;
  if (rep.degeneracy < static_cast<int>(lam.size())) rep.gap = lam[rep.degeneracy] - top;
  rep.gap_bound = clock_gap_bound(h.t_len) -
                  (h.variant == FinalVariant::standard ? std::sqrt(h.eps) : 0.0) - kSnap;
  rep.gap_ok = !rep.gap || *rep.gap >= rep.gap_bound;
  rep.matches_expected = rep.degeneracy == expected_dim;
  return rep;
}

SwapBoundReport final_term_swap_bound(const ClockHamiltonian& h_proj,
                                      const ClockHamiltonian& h_std) {
  if (h_proj.variant != FinalVariant::projector || h_std.variant != FinalVariant::standard)
    throw Error(ErrorKind::invalid_argument, "expected a (projector, standard) pair");
  if (h_proj.m != h_std.m || h_proj.t_len != h_std.t_len || h_proj.eps != h_std.eps ||
      h_proj.a_thresh != h_std.a_thresh ||
      !circuits_equal(h_proj.source, h_std.source))
    throw Error(ErrorKind::invalid_argument,
                "Hamiltonians were not compiled from the same circuit and thresholds");

  SwapBoundReport rep;
  rep.sqrt_eps = std::sqrt(h_proj.eps);
  // H_std - H_proj = (P - Q) (x) |T><T|, so the spectrum is that of the final
  // block difference padded with zeros from the other clock sectors.
  const std::vector<double> lam =
      eig_hermitian_values((h_std.final_block - h_proj.final_block).symmetrized());
  rep.min_eig_diff = std::min(0.0, lam.front());
  rep.holds = rep.min_eig_diff >= -rep.sqrt_eps - kSnap;

  // Eq. check: every basis state of U[R] meets the accept projector with
  // probability at most eps
  const Circuit& c = h_proj.source;
  const SpectralDecomposition sd = eig_hermitian(omega(c));
  rep.chi_max = 0.0;
  for (const CVec& r : rejecting_eigenvectors(sd, h_proj.eps)) {
    const CVec chi = push_through(c, lift_input(r, h_proj.m));
    double p1 = 0.0;
    for (size_t i = 1; i < chi.size(); i += 2) p1 += std::norm(chi[i]);
    rep.chi_max = std::max(rep.chi_max, p1);
  }
  rep.chi_ok = rep.chi_max <= h_proj.eps + kSnap;
  return rep;
}

SubspaceSplit subspace_split(const Circuit& c, double a, double b) {
  c.validate();
  const ComplexMatrix om = omega(c);
  const SpectralDecomposition sd = eig_hermitian(om);
  const int nt = c.length() + 1;
  const int ns = 1 << c.m;
  const int dim_in = 1 << c.n;

  SubspaceSplit split;
  auto append_lifted = [&](std::vector<CVec>& dst, const CVec& v) {
    for (int t = 0; t < nt; ++t) {
      CVec full(static_cast<size_t>(ns) * nt);
      for (int x = 0; x < dim_in; ++x) full[x + ns * t] = v[x];
      dst.push_back(std::move(full));
    }
  };
  for (int k = 0; k < dim_in; ++k) {
    const double lam = sd.eigenvalues[k];
    if (lam >= a - kSnap) {
      append_lifted(split.s1, sd.column(k));
    } else if (lam <= b + kSnap) {
      append_lifted(split.s2, sd.column(k));
    } else {
      std::ostringstream os;
      os << "gap promise violated at eigenvalue " << lam;
      throw Error(ErrorKind::promise_violation, os.str());
    }
  }
  const int anc_mask = (ns - 1) & ~(dim_in - 1);
  for (int s = 0; s < ns; ++s) {
    if (!(s & anc_mask)) continue;
    for (int t = 0; t < nt; ++t) {
      CVec full(static_cast<size_t>(ns) * nt);
      full[s + ns * t] = 1.0;
      split.s3.push_back(std::move(full));
    }
  }
  return split;
}

LocalHamiltonian to_local_hamiltonian(const ClockHamiltonian& h) {
  LocalHamiltonian lh;
  lh.site_dims.assign(h.m, 2);
  lh.site_dims.push_back(h.t_len + 1);
  const int clock_site = h.m;
  const int nt = h.t_len + 1;

  // H_init: support = ancilla sites + clock
  if (h.n < h.m) {
    std::vector<int> sites;
    for (int s = h.n; s < h.m; ++s) sites.push_back(s);
    sites.push_back(clock_site);
    const int anc_dim = 1 << (h.m - h.n);
    ComplexMatrix m(anc_dim * nt);
    for (int x = 1; x < anc_dim; ++x) m.at(x, x) = 1.0;  // t = 0 block only
    lh.terms.push_back(LocalTerm{std::move(sites), std::move(m)});
  }

  // H_evol(t): support = gate targets + clock
  for (int t = 1; t <= h.t_len; ++t) {
    const Gate& g = h.source.gates[t - 1];
    std::vector<int> sorted_targets = g.targets;
    std::sort(sorted_targets.begin(), sorted_targets.end());
    const int gd = g.matrix.dim();
    // gate matrix re-indexed to the sorted target order
    std::vector<int> bitpos(g.targets.size());
    for (size_t j = 0; j < g.targets.size(); ++j)
      bitpos[j] = static_cast<int>(std::lower_bound(sorted_targets.begin(), sorted_targets.end(),
                                                    g.targets[j]) -
                                   sorted_targets.begin());
    auto remap = [&](int l) {
      int r = 0;
      for (size_t j = 0; j < bitpos.size(); ++j)
        if (l & (1 << j)) r |= 1 << bitpos[j];
      return r;
    };
    ComplexMatrix u(gd);
    for (int r = 0; r < gd; ++r)
      for (int s = 0; s < gd; ++s) u.at(remap(r), remap(s)) = g.matrix.at(r, s);

    ComplexMatrix m(gd * nt);
    for (int l = 0; l < gd; ++l) {
      m.at(l + gd * t, l + gd * t) += 0.5;
      m.at(l + gd * (t - 1), l + gd * (t - 1)) += 0.5;
    }
    for (int r = 0; r < gd; ++r)
      for (int s = 0; s < gd; ++s) {
        const cplx z = u.at(r, s);
        if (z == cplx(0.0, 0.0)) continue;
        m.at(r + gd * t, s + gd * (t - 1)) -= 0.5 * z;
        m.at(s + gd * (t - 1), r + gd * t) -= 0.5 * std::conj(z);
      }
    std::vector<int> sites = sorted_targets;
    sites.push_back(clock_site);
    lh.terms.push_back(LocalTerm{std::move(sites), std::move(m)});
  }

  // H_final
  if (h.variant == FinalVariant::standard) {
    ComplexMatrix m(2 * nt);
    m.at(0 + 2 * h.t_len, 0 + 2 * h.t_len) = 1.0;
    lh.terms.push_back(LocalTerm{{0, clock_site}, std::move(m)});
  } else {
    const int ns = 1 << h.m;
    std::vector<int> sites(h.m + 1);
    for (int s = 0; s <= h.m; ++s) sites[s] = s;
    ComplexMatrix m(ns * nt);
    for (int r = 0; r < ns; ++r)
      for (int s = 0; s < ns; ++s)
        m.at(r + ns * h.t_len, s + ns * h.t_len) = h.final_block.at(r, s);
    lh.terms.push_back(LocalTerm{std::move(sites), std::move(m)});
  }
  lh.validate();
  return lh;
}

}  // namespace doslab
