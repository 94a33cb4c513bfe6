#include "doslab/local_ham.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace doslab {

namespace {

constexpr double kSnap = 1e-9;

double operator_norm(const ComplexMatrix& m) {
  const std::vector<double> lam = eig_hermitian_values(m.symmetrized());
  return std::max(std::abs(lam.front()), std::abs(lam.back()));
}

}  // namespace

int LocalHamiltonian::locality() const {
  int k = 0;
  for (const LocalTerm& t : terms) k = std::max(k, static_cast<int>(t.sites.size()));
  return k;
}

int64_t LocalHamiltonian::total_dim() const {
  int64_t d = 1;
  for (int s : site_dims) {
    d *= s;
    if (d > (int64_t{1} << 40)) return d;  // already hopeless, avoid overflow
  }
  return d;
}

void LocalHamiltonian::validate(std::vector<std::string>* warnings) const {
  if (site_dims.empty()) throw Error(ErrorKind::invalid_argument, "no sites");
  for (int d : site_dims)
    if (d < 2) throw Error(ErrorKind::invalid_argument, "site dimension must be at least 2");
  for (size_t ti = 0; ti < terms.size(); ++ti) {
    const LocalTerm& t = terms[ti];
    if (t.sites.empty()) throw Error(ErrorKind::invalid_argument, "term with empty support");
    if (!std::is_sorted(t.sites.begin(), t.sites.end()) ||
        std::adjacent_find(t.sites.begin(), t.sites.end()) != t.sites.end())
      throw Error(ErrorKind::invalid_argument, "term sites must be sorted and distinct");
    int64_t d = 1;
    for (int s : t.sites) {
      if (s < 0 || s >= num_sites())
        throw Error(ErrorKind::invalid_argument, "term site index out of range");
      d *= site_dims[s];
    }
    if (t.matrix.dim() != d)
      throw Error(ErrorKind::invalid_argument, "term matrix dimension does not match its support");
    const double dev = t.matrix.hermiticity_deviation();
    if (dev > 1e-12) {
      std::ostringstream os;
      os << "term " << ti << " is not Hermitian: deviation " << dev;
      throw Error(ErrorKind::invalid_argument, os.str());
    }
    if (warnings) {
      const double nrm = operator_norm(t.matrix);
      if (nrm > 1.0 + kSnap) {
        std::ostringstream os;
        os << "term " << ti << " exceeds unit norm: ||H_i|| = " << nrm;
        warnings->push_back(os.str());
      }
    }
  }
}

ComplexMatrix assemble(const LocalHamiltonian& h) {
  h.validate();
  const int64_t dim = h.total_dim();
  if (dim > kDenseDimCap) {
    std::ostringstream os;
    os << "total dimension " << dim << " exceeds the dense cap " << kDenseDimCap;
    throw Error(ErrorKind::capacity, os.str());
  }

  std::vector<int64_t> stride(h.num_sites());
  int64_t acc = 1;
  for (int s = 0; s < h.num_sites(); ++s) {
    stride[s] = acc;
    acc *= h.site_dims[s];
  }

  ComplexMatrix out(static_cast<int>(dim));
  for (const LocalTerm& t : h.terms) {
    const int ns = static_cast<int>(t.sites.size());
    std::vector<int> ldims(ns);
    int64_t ldim = 1;
    for (int j = 0; j < ns; ++j) {
      ldims[j] = h.site_dims[t.sites[j]];
      ldim *= ldims[j];
    }
    // enumerate assignments of the non-support sites
    std::vector<int> other;
    for (int s = 0; s < h.num_sites(); ++s)
      if (!std::binary_search(t.sites.begin(), t.sites.end(), s)) other.push_back(s);
    int64_t rest_dim = 1;
    for (int s : other) rest_dim *= h.site_dims[s];

    // global offsets of each local index, and of each rest-assignment
    std::vector<int64_t> loc_off(ldim);
    for (int64_t l = 0; l < ldim; ++l) {
      int64_t off = 0, v = l;
      for (int j = 0; j < ns; ++j) {
        off += (v % ldims[j]) * stride[t.sites[j]];
        v /= ldims[j];
      }
      loc_off[l] = off;
    }
    for (int64_t rest = 0; rest < rest_dim; ++rest) {
      int64_t off = 0, v = rest;
      for (int s : other) {
        off += (v % h.site_dims[s]) * stride[s];
        v /= h.site_dims[s];
      }
      for (int64_t r = 0; r < ldim; ++r)
        for (int64_t c = 0; c < ldim; ++c)
          out.at(static_cast<int>(off + loc_off[r]), static_cast<int>(off + loc_off[c])) +=
              t.matrix.at(static_cast<int>(r), static_cast<int>(c));
    }
  }
  return out;
}

void DosQuery::validate() const {
  if (!(e2 - e1 > 0.0))
    throw Error(ErrorKind::invalid_argument, "DOS query requires e2 > e1");
  if (!(delta > 0.0 && delta < e2 - e1))
    throw Error(ErrorKind::invalid_argument, "DOS query requires 0 < delta < e2 - e1");
}

DosReport count_dos(const LocalHamiltonian& h, const DosQuery& q, bool grace_mode) {
  q.validate();
  DosReport rep;
  rep.eigenvalues = eig_hermitian_values(assemble(h).symmetrized());

  auto inside_open = [&](double x, double lo, double hi) {
    return x > lo + kSnap && x < hi - kSnap;
  };
  const double half = 0.5 * q.delta;
  for (double lam : rep.eigenvalues) {
    if (lam >= q.e1 - kSnap && lam <= q.e2 + kSnap) ++rep.count;
    if (inside_open(lam, q.e1 - half, q.e1 + half) || inside_open(lam, q.e2 - half, q.e2 + half))
      rep.grace_violations.push_back(lam);
    if (lam >= q.e1 + half - kSnap && lam <= q.e2 - half + kSnap) ++rep.count_min;
    if (lam >= q.e1 - half - kSnap && lam <= q.e2 + half + kSnap) ++rep.count_max;
  }
  rep.strict_ok = grace_mode || rep.grace_violations.empty();

  // fixed 32-bin histogram over the spectral range
  const double lo = rep.eigenvalues.front();
  const double hi = rep.eigenvalues.back();
  const int nbins = 32;
  const double lo_edge = (hi > lo) ? lo : lo - 0.5;
  const double hi_edge = (hi > lo) ? hi : hi + 0.5;
  rep.histogram_edges.resize(nbins + 1);
  rep.histogram_counts.assign(nbins, 0);
  for (int i = 0; i <= nbins; ++i)
    rep.histogram_edges[i] = lo_edge + (hi_edge - lo_edge) * i / nbins;
  for (double lam : rep.eigenvalues) {
    int bin = static_cast<int>((lam - lo_edge) / (hi_edge - lo_edge) * nbins);
    bin = std::clamp(bin, 0, nbins - 1);
    ++rep.histogram_counts[bin];
  }
  return rep;
}

GroundCountReport count_ground(const LocalHamiltonian& h, double e0, double e1, double e2) {
  if (!(e0 <= e1 && e1 < e2))
    throw Error(ErrorKind::invalid_argument, "ground count requires e0 <= e1 < e2");
  const std::vector<double> lam = eig_hermitian_values(assemble(h).symmetrized());
  if (lam.front() < e0 - kSnap) {
    std::ostringstream os;
    os << "spectrum passes below e0: eigenvalue " << lam.front() << " < " << e0;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  for (double x : lam)
    if (x > e1 + kSnap && x < e2 - kSnap) {
      std::ostringstream os;
      os << "eigenvalue " << x << " lies strictly inside the forbidden interval (" << e1 << ", "
         << e2 << ")";
      throw Error(ErrorKind::invalid_argument, os.str());
    }

  GroundCountReport rep;
  for (double x : lam)
    if (x <= e1 + kSnap) ++rep.count;

  // the reduction onto a DOS query must reproduce the same number
  DosQuery q;
  q.delta = e2 - e1;
  q.e1 = e0 - 0.5 * q.delta;
  q.e2 = e1 + 0.5 * q.delta;
  rep.count_via_dos = count_dos(h, q, false).count;
  rep.agree = rep.count == rep.count_via_dos;
  if (!rep.agree)
    throw Error(ErrorKind::internal, "direct ground count and DOS reduction disagree");
  return rep;
}

ShiftResult quadratic_shift(const LocalHamiltonian& h, double e1, double e2, double delta) {
  DosQuery q{e1, e2, delta};
  q.validate();
  h.validate();

  const int nt = static_cast<int>(h.terms.size());
  const int m_terms = nt * (nt + 1) / 2 + nt + 1;
  const double nu = 1.0 / (4.0 * static_cast<double>(m_terms) * m_terms);

  ShiftResult out;
  out.nu = nu;
  out.m_terms = m_terms;
  out.e1 = e1;
  out.e2 = e2;
  out.delta = delta;
  out.a_neg = -nu * 0.5 * delta * (e2 - e1 - 0.5 * delta);
  out.b_pos = nu * 0.5 * delta * (e2 - e1 + 0.5 * delta);

  LocalHamiltonian hp;
  hp.site_dims = h.site_dims;

  auto merged_sites = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> u;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
  };
  // dense product of two terms on the union of their supports
  auto lift_to = [&](const LocalTerm& t, const std::vector<int>& sites) {
    LocalHamiltonian tmp;
    tmp.site_dims.reserve(sites.size());
    for (int s : sites) tmp.site_dims.push_back(h.site_dims[s]);
    std::vector<int> remapped(t.sites.size());
    for (size_t i = 0; i < t.sites.size(); ++i)
      remapped[i] = static_cast<int>(
          std::lower_bound(sites.begin(), sites.end(), t.sites[i]) - sites.begin());
    tmp.terms.push_back(LocalTerm{remapped, t.matrix});
    return assemble(tmp);
  };

  // quadratic part: nu H_i^2 and nu (H_i H_j + H_j H_i) for i < j
  for (int i = 0; i < nt; ++i) {
    for (int j = i; j < nt; ++j) {
      const std::vector<int> sites = merged_sites(h.terms[i].sites, h.terms[j].sites);
      const ComplexMatrix a = lift_to(h.terms[i], sites);
      const ComplexMatrix b = lift_to(h.terms[j], sites);
      ComplexMatrix prod = matmul(a, b);
      if (j > i) prod += matmul(b, a);
      prod *= cplx(nu, 0.0);
      hp.terms.push_back(LocalTerm{sites, prod.symmetrized()});
    }
  }
  // linear part: -nu (e1+e2) H_i
  for (int i = 0; i < nt; ++i) {
    ComplexMatrix m = h.terms[i].matrix;
    m *= cplx(-nu * (e1 + e2), 0.0);
    hp.terms.push_back(LocalTerm{h.terms[i].sites, std::move(m)});
  }
  // constant part: nu e1 e2, attached to site 0
  {
    ComplexMatrix id = ComplexMatrix::identity(h.site_dims[0]);
    id *= cplx(nu * e1 * e2, 0.0);
    hp.terms.push_back(LocalTerm{{0}, std::move(id)});
  }
  hp.validate();
  out.h_prime = std::move(hp);
  return out;
}

VerifierInstance dos_verifier_omega(const ShiftResult& s) {
  ComplexMatrix hp = assemble(s.h_prime);
  const double m = static_cast<double>(s.m_terms);
  ComplexMatrix om = ComplexMatrix::identity(hp.dim());
  hp *= cplx(1.0 / m, 0.0);
  om -= hp;
  om *= cplx(0.5, 0.0);
  const double a = 0.5 + std::abs(s.a_neg) / (2.0 * m);
  const double b = 0.5 - s.b_pos / (2.0 * m);
  return VerifierInstance::make(om.symmetrized(), a, b);
}

}  // namespace doslab
