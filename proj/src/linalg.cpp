#include "doslab/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <sstream>

namespace doslab {

namespace {

double sq(double x) { return x * x; }

cplx phase_of(cplx z) {
  double a = std::abs(z);
  return a > 0.0 ? z / a : cplx(1.0, 0.0);
}

}  // namespace

ComplexMatrix::ComplexMatrix(int dim, CVec entries) : dim_(dim), a_(std::move(entries)) {
  if (dim < 0 || a_.size() != static_cast<size_t>(dim) * dim)
    throw Error(ErrorKind::invalid_argument, "matrix entries do not form a square matrix");
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
  ComplexMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m.at(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r.at(j, i) = std::conj(at(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r.at(j, i) = at(i, j);
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : a_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermiticity_deviation() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) m = std::max(m, std::abs(at(i, j) - std::conj(at(j, i))));
  return m;
}

ComplexMatrix ComplexMatrix::symmetrized() const {
  ComplexMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r.at(i, j) = 0.5 * (at(i, j) + std::conj(at(j, i)));
  return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw Error(ErrorKind::invalid_argument, "matrix dimension mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw Error(ErrorKind::invalid_argument, "matrix dimension mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& z : a_) z *= s;
  return *this;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::invalid_argument, "matmul dimension mismatch");
  const int n = a.dim();
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i) {
    const cplx* ai = a.row(i);
    cplx* ri = r.row(i);
    for (int k = 0; k < n; ++k) {
      const cplx s = ai[k];
      if (s == cplx(0.0, 0.0)) continue;
      const cplx* bk = b.row(k);
      for (int j = 0; j < n; ++j) ri[j] += s * bk[j];
    }
  }
  return r;
}

CVec matvec(const ComplexMatrix& a, const CVec& x) {
  if (x.size() != static_cast<size_t>(a.dim()))
    throw Error(ErrorKind::invalid_argument, "matvec dimension mismatch");
  CVec y(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    cplx s = 0.0;
    const cplx* ai = a.row(i);
    for (int j = 0; j < a.dim(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int na = a.dim(), nb = b.dim();
  ComplexMatrix r(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) {
      const cplx s = a.at(i, j);
      if (s == cplx(0.0, 0.0)) continue;
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) r.at(i * nb + k, j * nb + l) = s * b.at(k, l);
    }
  return r;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::invalid_argument, "dimension mismatch");
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a.at(i, j) - b.at(i, j)));
  return m;
}

void add_outer(ComplexMatrix& m, const CVec& v, const CVec& w, double s) {
  const int n = m.dim();
  for (int i = 0; i < n; ++i) {
    const cplx vi = s * v[i];
    cplx* mi = m.row(i);
    for (int j = 0; j < n; ++j) mi[j] += vi * std::conj(w[j]);
  }
}

cplx inner(const CVec& a, const CVec& b) {
  cplx s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(const CVec& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

CVec SpectralDecomposition::column(int k) const {
  CVec v(eigenvectors.dim());
  for (int i = 0; i < eigenvectors.dim(); ++i) v[i] = eigenvectors.at(i, k);
  return v;
}

namespace {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form, then implicit-shift QL. q, when non-null, accumulates the unitary so
// that  m = q . tridiag(d, e) . q^dagger  before QL, and the eigenvectors
// afterwards.
void tridiagonalize(ComplexMatrix& a, std::vector<double>& d, std::vector<double>& e,
                    ComplexMatrix* q) {
  const int n = a.dim();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 0) return;

  std::vector<CVec> hh(std::max(0, n - 2));   // householder vectors per step
  std::vector<double> tau(std::max(0, n - 2), 0.0);
  CVec p(n), w(n);

  for (int k = 0; k + 2 < n; ++k) {
    const int len = n - 1 - k;
    // column below the diagonal
    CVec v(len);
    double scale = 0.0;
    for (int i = 0; i < len; ++i) {
      v[i] = a.at(k + 1 + i, k);
      scale += std::abs(v[i].real()) + std::abs(v[i].imag());
    }
    if (scale == 0.0) {
      tau[k] = 0.0;
      continue;
    }
    double sigma = 0.0;
    for (int i = 0; i < len; ++i) {
      v[i] /= scale;
      sigma += std::norm(v[i]);
    }
    const cplx alpha = -phase_of(v[0]) * std::sqrt(sigma);
    v[0] -= alpha;
    const double vnorm2 = 2.0 * (sigma + std::sqrt(sigma) * std::abs(a.at(k + 1, k)) / scale);
    if (vnorm2 <= 0.0) {
      tau[k] = 0.0;
      continue;
    }
    const double t = 2.0 / vnorm2;

    // two-sided update of the trailing block, rank-2 form
    for (int i = 0; i < len; ++i) {
      cplx s = 0.0;
      const cplx* row = a.row(k + 1 + i) + (k + 1);
      for (int j = 0; j < len; ++j) s += row[j] * v[j];
      p[i] = t * s;
    }
    cplx vp = 0.0;
    for (int i = 0; i < len; ++i) vp += std::conj(v[i]) * p[i];
    const cplx kk = 0.5 * t * vp;
    for (int i = 0; i < len; ++i) w[i] = p[i] - kk * v[i];
    for (int i = 0; i < len; ++i) {
      cplx* row = a.row(k + 1 + i) + (k + 1);
      const cplx vi = v[i];
      const cplx wi = w[i];
      for (int j = 0; j < len; ++j) row[j] -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
    }

    a.at(k + 1, k) = alpha * scale;
    a.at(k, k + 1) = std::conj(alpha * scale);
    for (int i = 2; i <= len; ++i) {
      a.at(k + i, k) = 0.0;
      a.at(k, k + i) = 0.0;
    }
    tau[k] = t;
    hh[k] = std::move(v);
  }

  for (int i = 0; i < n; ++i) d[i] = a.at(i, i).real();

  // phase-rotate the subdiagonal onto the real axis
  CVec colphase(n, cplx(1.0, 0.0));
  for (int i = 0; i + 1 < n; ++i) {
    const cplx sub = a.at(i + 1, i);
    e[i] = std::abs(sub);
    colphase[i + 1] = phase_of(sub) * colphase[i];
  }

  if (q) {
    *q = ComplexMatrix(n);
    for (int j = 0; j < n; ++j) q->at(j, j) = colphase[j];
    for (int k = n - 3; k >= 0; --k) {
      if (tau[k] == 0.0) continue;
      const CVec& v = hh[k];
      const int len = n - 1 - k;
      // q <- (I - tau v v^dagger) q on rows k+1..n-1
      for (int j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (int i = 0; i < len; ++i) s += std::conj(v[i]) * q->at(k + 1 + i, j);
        s *= tau[k];
        for (int i = 0; i < len; ++i) q->at(k + 1 + i, j) -= s * v[i];
      }
    }
  }
}

// Implicit-shift QL on a real symmetric tridiagonal matrix; rotations are
// applied to the complex columns of v when given. e[i] couples i and i+1.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix* v) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw Error(ErrorKind::internal, "tridiagonal QL failed to converge in 60 iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (v) {
            for (int k = 0; k < n; ++k) {
              const cplx f2 = v->at(k, i + 1);
              v->at(k, i + 1) = s * v->at(k, i) + c * f2;
              v->at(k, i) = c * v->at(k, i) - s * f2;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

SpectralDecomposition eig_hermitian(const ComplexMatrix& m, bool with_vectors,
                                    double hermitian_tol) {
  if (m.dim() == 0) throw Error(ErrorKind::invalid_argument, "empty matrix");
  const double dev = m.hermiticity_deviation();
  if (dev > hermitian_tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |M - M^dagger| = " << dev << " exceeds " << hermitian_tol;
    throw Error(ErrorKind::invalid_argument, os.str());
  }

  ComplexMatrix a = m.symmetrized();
  const int n = a.dim();
  std::vector<double> d, e;
  SpectralDecomposition out;

  if (with_vectors) {
    ComplexMatrix q;
    tridiagonalize(a, d, e, &q);
    tridiag_ql(d, e, &q);
    // ascending order, stable under ties
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return d[x] < d[y]; });
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
      out.eigenvalues[k] = d[idx[k]];
      for (int i = 0; i < n; ++i) out.eigenvectors.at(i, k) = q.at(i, idx[k]);
    }
    // phase convention: first component of magnitude > 1e-12 made real positive
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        const cplx z = out.eigenvectors.at(i, k);
        if (std::abs(z) > 1e-12) {
          const cplx ph = std::conj(phase_of(z));
          for (int r = 0; r < n; ++r) out.eigenvectors.at(r, k) *= ph;
          break;
        }
      }
    }
  } else {
    tridiagonalize(a, d, e, nullptr);
    tridiag_ql(d, e, nullptr);
    std::sort(d.begin(), d.end());
    out.eigenvalues = std::move(d);
  }
  return out;
}

std::vector<double> eig_hermitian_values(const ComplexMatrix& m, double hermitian_tol) {
  return eig_hermitian(m, false, hermitian_tol).eigenvalues;
}

ComplexMatrix spectral_function(const ComplexMatrix& m, const std::function<double(double)>& phi) {
  const SpectralDecomposition s = eig_hermitian(m);
  const int n = m.dim();
  ComplexMatrix r(n);
  for (int k = 0; k < n; ++k) {
    const double f = phi(s.eigenvalues[k]);
    if (f == 0.0) continue;
    const CVec v = s.column(k);
    add_outer(r, v, v, f);
  }
  return r;
}

namespace {

// Symmetrize and insist on idempotency; returns the repaired projector.
ComplexMatrix checked_projector(const ComplexMatrix& p, double idem_tol, const char* which) {
  ComplexMatrix s = p.symmetrized();
  const double dev = max_abs_diff(matmul(s, s), s);
  if (dev > idem_tol) {
    std::ostringstream os;
    os << which << " is not idempotent: max |P^2 - P| = " << dev << " exceeds " << idem_tol;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  return s;
}

}  // namespace

PrincipalAngleReport principal_angles(const ComplexMatrix& p, const ComplexMatrix& q,
                                      double idem_tol) {
  if (p.dim() != q.dim())
    throw Error(ErrorKind::invalid_argument, "projector dimension mismatch");
  const ComplexMatrix ps = checked_projector(p, idem_tol, "P");
  const ComplexMatrix qs = checked_projector(q, idem_tol, "Q");
  const int n = ps.dim();

  const SpectralDecomposition sp = eig_hermitian(ps);
  std::vector<CVec> ran_p;
  for (int k = 0; k < n; ++k)
    if (sp.eigenvalues[k] > 0.5) ran_p.push_back(sp.column(k));
  const int rp = static_cast<int>(ran_p.size());

  int rq = 0;
  for (double lam : eig_hermitian_values(qs))
    if (lam > 0.5) ++rq;

  // cos^2 of the angles between ran P and ran Q, including the degenerate
  // 1's (joint range) and 0's (ran P inside ker Q)
  PrincipalAngleReport rep;
  const double cls = 1e-8;
  if (rp > 0) {
    const ComplexMatrix g = compress(qs, ran_p).symmetrized();
    for (double c2 : eig_hermitian_values(g)) {
      c2 = std::clamp(c2, 0.0, 1.0);
      if (c2 >= 1.0 - cls) {
        ++rep.n11;
      } else if (c2 <= cls) {
        ++rep.n10;
      } else {
        rep.angles.push_back(std::acos(std::sqrt(c2)));
      }
    }
  }
  std::sort(rep.angles.begin(), rep.angles.end());
  rep.n01 = rq - rep.n11 - rep.angle_blocks();
  rep.n00 = n - rp - rq + rep.n11;
  if (rep.n01 < 0 || rep.n00 < 0)
    throw Error(ErrorKind::internal, "principal-angle block classification is inconsistent");
  return rep;
}

ProjectorBoundReport projector_difference_bound(const ComplexMatrix& p, const ComplexMatrix& q) {
  if (p.dim() != q.dim())
    throw Error(ErrorKind::invalid_argument, "projector dimension mismatch");
  const ComplexMatrix ps = checked_projector(p, 1e-10, "P");
  const ComplexMatrix qs = checked_projector(q, 1e-10, "Q");

  // Q(1-P)Q = Q - QPQ, positive semidefinite
  ComplexMatrix r = qs - matmul(matmul(qs, ps), qs);
  const std::vector<double> lam_r = eig_hermitian_values(r.symmetrized());
  ProjectorBoundReport rep;
  rep.epsilon = std::max(0.0, lam_r.back());
  rep.sqrt_epsilon = std::sqrt(rep.epsilon);
  rep.min_eig = eig_hermitian_values(ps - qs).front();
  rep.holds = rep.min_eig >= -rep.sqrt_epsilon - 1e-9;
  return rep;
}

ComplexMatrix compress(const ComplexMatrix& m, const std::vector<CVec>& basis) {
  const int r = static_cast<int>(basis.size());
  ComplexMatrix out(r);
  for (int j = 0; j < r; ++j) {
    if (basis[j].size() != static_cast<size_t>(m.dim()))
      throw Error(ErrorKind::invalid_argument, "basis column length mismatch");
    const CVec t = matvec(m, basis[j]);
    for (int i = 0; i < r; ++i) out.at(i, j) = inner(basis[i], t);
  }
  return out;
}

double orthonormality_deviation(const std::vector<CVec>& columns) {
  const int r = static_cast<int>(columns.size());
  double dev = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      const cplx g = inner(columns[i], columns[j]);
      dev = std::max(dev, std::abs(g - (i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0))));
    }
  return dev;
}

ComplexMatrix projector_onto(const std::vector<CVec>& columns, int dim) {
  ComplexMatrix p(dim);
  for (const CVec& c : columns) {
    if (c.size() != static_cast<size_t>(dim))
      throw Error(ErrorKind::invalid_argument, "column length mismatch");
    add_outer(p, c, c);
  }
  return p;
}

}  // namespace doslab
