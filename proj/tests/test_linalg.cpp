#include <doctest.h>

#include <cmath>

#include "doslab/linalg.hpp"
#include "doslab/rng.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace doslab;

namespace {

double reconstruction_error(const ComplexMatrix& m, const SpectralDecomposition& s) {
  ComplexMatrix r(m.dim());
  for (int k = 0; k < m.dim(); ++k) {
    const CVec v = s.column(k);
    add_outer(r, v, v, s.eigenvalues[k]);
  }
  return max_abs_diff(r, m);
}

double residual(const ComplexMatrix& m, const SpectralDecomposition& s, int k) {
  const CVec v = s.column(k);
  CVec mv = matvec(m, v);
  for (int i = 0; i < m.dim(); ++i) mv[i] -= s.eigenvalues[k] * v[i];
  return norm2(mv);
}

}  // namespace

TEST_CASE("eig: identity and diagonal cases") {
  const SpectralDecomposition s = eig_hermitian(ComplexMatrix::identity(4));
  REQUIRE(s.eigenvalues.size() == 4);
  for (double l : s.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-12));

  const SpectralDecomposition d = eig_hermitian(ComplexMatrix::diagonal({0.0, 1.0}));
  CHECK(d.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(d.eigenvalues[1] == doctest::Approx(1.0));
  // standard basis vectors with the positive-phase convention
  CHECK(std::abs(d.eigenvectors.at(0, 0) - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(d.eigenvectors.at(1, 1) - cplx(1, 0)) < 1e-12);
}

TEST_CASE("eig: random 3x3 matches characteristic-polynomial bisection") {
  CounterRng rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    const ComplexMatrix m = gen::random_hermitian(3, rng);
    const std::vector<double> lam = eig_hermitian_values(m);
    const std::vector<double> roots = oracle::charpoly_roots_3x3(m);
    REQUIRE(roots.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(lam[k] - roots[k]) < 1e-9);
  }
}

TEST_CASE("eig: agrees with the Jacobi oracle and reconstructs the input") {
  CounterRng rng(7);
  for (int dim : {2, 3, 5, 8, 16, 24}) {
    const ComplexMatrix m = gen::random_hermitian(dim, rng);
    const SpectralDecomposition s = eig_hermitian(m);
    const oracle::JacobiResult j = oracle::jacobi_eig(m);
    for (int k = 0; k < dim; ++k) {
      CHECK(std::abs(s.eigenvalues[k] - j.eigenvalues[k]) < 1e-9);
      CHECK(residual(m, s, k) < 1e-9 * dim);
    }
    CHECK(reconstruction_error(m, s) < 1e-9 * dim);
    // orthonormality
    ComplexMatrix g = matmul(s.eigenvectors.adjoint(), s.eigenvectors);
    CHECK(max_abs_diff(g, ComplexMatrix::identity(dim)) < 1e-10);
    // values-only route agrees with the full one
    const std::vector<double> vals = eig_hermitian_values(m);
    for (int k = 0; k < dim; ++k) CHECK(vals[k] == doctest::Approx(s.eigenvalues[k]).epsilon(1e-12));
  }
}

TEST_CASE("eig: deterministic output and fixed phase convention") {
  CounterRng rng(99);
  const ComplexMatrix m = gen::random_hermitian(6, rng);
  const SpectralDecomposition s1 = eig_hermitian(m);
  const SpectralDecomposition s2 = eig_hermitian(m);
  CHECK(s1.eigenvalues == s2.eigenvalues);
  CHECK(s1.eigenvectors == s2.eigenvectors);
  for (int k = 0; k < 6; ++k) {
    for (int i = 0; i < 6; ++i) {
      const cplx z = s1.eigenvectors.at(i, k);
      if (std::abs(z) > 1e-12) {
        CHECK(z.real() > 0.0);
        CHECK(std::abs(z.imag()) < 1e-12 * std::abs(z.real()) + 1e-15);
        break;
      }
    }
  }
}

TEST_CASE("eig: rejects non-Hermitian and non-square input") {
  ComplexMatrix m(2);
  m.at(0, 1) = cplx(1.0, 0.0);  // strictly upper triangular
  CHECK_THROWS_WITH_AS(eig_hermitian(m), doctest::Contains("not Hermitian"), Error);
  CHECK_THROWS_AS(ComplexMatrix(2, CVec(3)), Error);
}

TEST_CASE("eig: degenerate spectra keep orthonormal eigenvectors") {
  CounterRng rng(12);
  // random projector has eigenvalues {0, 1} with multiplicities
  const ComplexMatrix p = gen::random_projector(8, 3, rng);
  const SpectralDecomposition s = eig_hermitian(p);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(s.eigenvalues[k]) < 1e-10);
  for (int k = 5; k < 8; ++k) CHECK(std::abs(s.eigenvalues[k] - 1.0) < 1e-10);
  CHECK(max_abs_diff(matmul(s.eigenvectors.adjoint(), s.eigenvectors),
                     ComplexMatrix::identity(8)) < 1e-10);
  CHECK(reconstruction_error(p, s) < 1e-9 * 8);
}

TEST_CASE("spectral_function: identity, constant and square maps") {
  CounterRng rng(5);
  const ComplexMatrix m = gen::random_hermitian(5, rng);
  CHECK(max_abs_diff(spectral_function(m, [](double x) { return x; }), m) < 1e-10);
  CHECK(max_abs_diff(spectral_function(m, [](double) { return 1.0; }),
                     ComplexMatrix::identity(5)) < 1e-10);
  CHECK(max_abs_diff(spectral_function(m, [](double x) { return x * x; }), matmul(m, m)) < 1e-9);
}

TEST_CASE("principal_angles: commuting pair has no angle blocks") {
  CounterRng rng(31);
  const ComplexMatrix p = gen::random_projector(5, 2, rng);
  const PrincipalAngleReport r = principal_angles(p, p);
  CHECK(r.angle_blocks() == 0);
  CHECK(r.n11 == 2);
  CHECK(r.n00 == 3);
  CHECK(r.n01 == 0);
  CHECK(r.n10 == 0);
}

TEST_CASE("principal_angles: |0><0| vs |+><+| gives a single pi/4 block") {
  ComplexMatrix p(2), q(2);
  p.at(0, 0) = 1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) q.at(i, j) = 0.5;
  const PrincipalAngleReport r = principal_angles(p, q);
  REQUIRE(r.angle_blocks() == 1);
  CHECK(r.angles[0] == doctest::Approx(3.14159265358979 / 4).epsilon(1e-10));
  CHECK(r.n00 == 0);
  CHECK(r.n11 == 0);
}

TEST_CASE("principal_angles: spectrum of P-Q is +-sin(theta) plus 0, +-1") {
  CounterRng rng(77);
  for (int rep = 0; rep < 25; ++rep) {
    const ComplexMatrix p = gen::random_projector(5, 2, rng);
    const ComplexMatrix q = gen::random_projector(5, 2, rng);
    const PrincipalAngleReport r = principal_angles(p, q);
    std::vector<double> expected;
    for (int i = 0; i < r.n10; ++i) expected.push_back(1.0);
    for (int i = 0; i < r.n01; ++i) expected.push_back(-1.0);
    for (int i = 0; i < r.n00 + r.n11; ++i) expected.push_back(0.0);
    for (double th : r.angles) {
      expected.push_back(std::sin(th));
      expected.push_back(-std::sin(th));
      CHECK(std::sin(th) * std::sin(th) > 0.0);
      CHECK(std::sin(th) * std::sin(th) < 1.0);
    }
    std::sort(expected.begin(), expected.end());
    const std::vector<double> lam = eig_hermitian_values(p - q);
    REQUIRE(lam.size() == expected.size());
    for (size_t i = 0; i < lam.size(); ++i) CHECK(std::abs(lam[i] - expected[i]) < 1e-8);
    // rank accounting
    CHECK(r.n11 + r.n10 + r.angle_blocks() == 2);
  }
}

TEST_CASE("principal_angles: rejects non-idempotent input") {
  ComplexMatrix half = ComplexMatrix::identity(3);
  half *= cplx(0.5, 0.0);
  CHECK_THROWS_WITH_AS(principal_angles(half, half), doctest::Contains("idempotent"), Error);
}

TEST_CASE("projector_difference_bound: identical projectors") {
  CounterRng rng(8);
  const ComplexMatrix p = gen::random_projector(4, 2, rng);
  const ProjectorBoundReport r = projector_difference_bound(p, p);
  CHECK(std::abs(r.epsilon) < 1e-10);
  CHECK(std::abs(r.min_eig) < 1e-10);
  CHECK(r.holds);
}

TEST_CASE("projector_difference_bound: |0><0| vs |+><+| is tight") {
  ComplexMatrix p(2), q(2);
  p.at(0, 0) = 1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) q.at(i, j) = 0.5;
  const ProjectorBoundReport r = projector_difference_bound(p, q);
  CHECK(r.epsilon == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.min_eig == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(r.holds);
  CHECK(std::abs(r.min_eig + r.sqrt_epsilon) < 1e-9);  // equality case
}

TEST_CASE("projector_difference_bound: randomized sweep at dims 2..8") {
  CounterRng rng(123);
  for (int rep = 0; rep < 200; ++rep) {
    const int dim = 2 + static_cast<int>(rng.next_below(7));
    const int rp = 1 + static_cast<int>(rng.next_below(dim));
    const int rq = 1 + static_cast<int>(rng.next_below(dim));
    const ComplexMatrix p = gen::random_projector(dim, rp, rng);
    const ComplexMatrix q = gen::random_projector(dim, rq, rng);
    const ProjectorBoundReport r = projector_difference_bound(p, q);
    CHECK(r.holds);
    // min eig of P-Q is -max|sin theta| (or 0 / -1 from commuting blocks)
    const PrincipalAngleReport pa = principal_angles(p, q);
    double expect = 0.0;
    if (pa.n01 > 0) expect = -1.0;
    for (double th : pa.angles) expect = std::min(expect, -std::sin(th));
    CHECK(std::abs(r.min_eig - expect) < 1e-9);
  }
}

TEST_CASE("compress and projector_onto are consistent") {
  CounterRng rng(55);
  const ComplexMatrix u = gen::random_unitary(6, rng);
  std::vector<CVec> basis;
  for (int k = 0; k < 3; ++k) {
    CVec col(6);
    for (int i = 0; i < 6; ++i) col[i] = u.at(i, k);
    basis.push_back(col);
  }
  CHECK(orthonormality_deviation(basis) < 1e-12);
  const ComplexMatrix p = projector_onto(basis, 6);
  CHECK(max_abs_diff(matmul(p, p), p) < 1e-10);
  // compressing the projector onto its own range gives the identity
  CHECK(max_abs_diff(compress(p, basis), ComplexMatrix::identity(3)) < 1e-10);
}
