#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "doslab/local_ham.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace doslab;

namespace {

LocalHamiltonian sum_z(int qubits) {
  LocalHamiltonian h;
  h.site_dims.assign(qubits, 2);
  for (int q = 0; q < qubits; ++q) {
    ComplexMatrix z(2);
    z.at(0, 0) = 1.0;
    z.at(1, 1) = -1.0;
    h.terms.push_back(LocalTerm{{q}, std::move(z)});
  }
  return h;
}

// Independent embedding with site 0 as the MOST significant bit, then a
// global bit-reversal back to the library's little-endian convention.
// Qubit sites only.
ComplexMatrix assemble_bigendian(const LocalHamiltonian& h) {
  const int sites = h.num_sites();
  const int n = 1 << sites;
  auto rev = [sites](int x) {
    int y = 0;
    for (int b = 0; b < sites; ++b)
      if (x & (1 << b)) y |= 1 << (sites - 1 - b);
    return y;
  };
  ComplexMatrix be(n);
  for (const LocalTerm& t : h.terms) {
    int support_mask = 0;
    std::vector<int> bitpos(t.sites.size());
    for (size_t j = 0; j < t.sites.size(); ++j) {
      bitpos[j] = sites - 1 - t.sites[j];
      support_mask |= 1 << bitpos[j];
    }
    auto local_of = [&](int x) {
      int l = 0;
      for (size_t j = 0; j < bitpos.size(); ++j)
        if (x & (1 << bitpos[j])) l |= 1 << j;
      return l;
    };
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        if ((r & ~support_mask) != (c & ~support_mask)) continue;
        be.at(r, c) += t.matrix.at(local_of(r), local_of(c));
      }
  }
  ComplexMatrix le(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) le.at(r, c) = be.at(rev(r), rev(c));
  return le;
}

// relabel sites by a permutation pi (qubit sites only)
LocalHamiltonian relabeled(const LocalHamiltonian& h, const std::vector<int>& pi) {
  LocalHamiltonian out;
  out.site_dims.assign(h.num_sites(), 2);
  for (const LocalTerm& t : h.terms) {
    std::vector<int> mapped(t.sites.size());
    for (size_t j = 0; j < t.sites.size(); ++j) mapped[j] = pi[t.sites[j]];
    std::vector<int> sorted = mapped;
    std::sort(sorted.begin(), sorted.end());
    // digit j of the old local index moves to the rank of pi(sites[j])
    std::vector<int> newpos(t.sites.size());
    for (size_t j = 0; j < t.sites.size(); ++j)
      newpos[j] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), mapped[j]) -
                                   sorted.begin());
    const int dim = t.matrix.dim();
    auto remap = [&](int l) {
      int r = 0;
      for (size_t j = 0; j < newpos.size(); ++j)
        if (l & (1 << j)) r |= 1 << newpos[j];
      return r;
    };
    ComplexMatrix m(dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m.at(remap(r), remap(c)) = t.matrix.at(r, c);
    out.terms.push_back(LocalTerm{sorted, std::move(m)});
  }
  return out;
}

}  // namespace

TEST_CASE("assemble: Z on site 0 of two qubits") {
  LocalHamiltonian h;
  h.site_dims = {2, 2};
  ComplexMatrix z(2);
  z.at(0, 0) = 1.0;
  z.at(1, 1) = -1.0;
  h.terms.push_back(LocalTerm{{0}, z});
  const ComplexMatrix m = assemble(h);
  const ComplexMatrix expect = ComplexMatrix::diagonal({1.0, -1.0, 1.0, -1.0});
  CHECK(max_abs_diff(m, expect) < 1e-15);
}

TEST_CASE("assemble: sum of Z over three qubits has the binomial spectrum") {
  const std::vector<double> lam = eig_hermitian_values(assemble(sum_z(3)));
  const std::vector<double> expect{-3, -1, -1, -1, 1, 1, 1, 3};
  for (int i = 0; i < 8; ++i) CHECK(lam[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("assemble: random 2-local matches the big-endian cross-check") {
  CounterRng rng(515);
  for (int rep = 0; rep < 10; ++rep) {
    const LocalHamiltonian h = gen::random_two_local(3, 4, rng);
    CHECK(max_abs_diff(assemble(h), assemble_bigendian(h)) < 1e-12);
  }
}

TEST_CASE("assemble: linear in the term list") {
  CounterRng rng(99);
  const LocalHamiltonian h1 = gen::random_two_local(3, 2, rng);
  const LocalHamiltonian h2 = gen::random_two_local(3, 3, rng);
  LocalHamiltonian joined;
  joined.site_dims = h1.site_dims;
  joined.terms = h1.terms;
  joined.terms.insert(joined.terms.end(), h2.terms.begin(), h2.terms.end());
  CHECK(max_abs_diff(assemble(joined), assemble(h1) + assemble(h2)) < 1e-12);
}

TEST_CASE("assemble: mixed site dimensions embed correctly") {
  // qubit (x) qutrit: number operator on the qutrit
  LocalHamiltonian h;
  h.site_dims = {2, 3};
  ComplexMatrix num(3);
  num.at(1, 1) = 1.0;
  num.at(2, 2) = 2.0;
  num *= cplx(0.5, 0.0);
  h.terms.push_back(LocalTerm{{1}, num});
  const ComplexMatrix m = assemble(h);
  // little-endian: index = qubit + 2 * qutrit
  const ComplexMatrix expect = ComplexMatrix::diagonal({0, 0, 0.5, 0.5, 1.0, 1.0});
  CHECK(max_abs_diff(m, expect) < 1e-15);
}

TEST_CASE("validate: norm violations warn, structural problems throw") {
  LocalHamiltonian h;
  h.site_dims = {2, 2};
  ComplexMatrix big = ComplexMatrix::identity(2);
  big *= cplx(3.0, 0.0);
  h.terms.push_back(LocalTerm{{0}, big});
  std::vector<std::string> warnings;
  h.validate(&warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("unit norm") != std::string::npos);

  LocalHamiltonian bad = h;
  bad.terms[0].sites = {5};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("assemble: dimension overflow is fatal") {
  LocalHamiltonian h;
  h.site_dims.assign(13, 2);  // 8192 > 4096 cap
  ComplexMatrix z = ComplexMatrix::identity(2);
  h.terms.push_back(LocalTerm{{0}, z});
  CHECK_THROWS_AS(assemble(h), Error);
}

TEST_CASE("count_dos: sum of Z, window [-2,2], delta 0.5 counts 6") {
  const DosReport r = count_dos(sum_z(3), DosQuery{-2.0, 2.0, 0.5}, false);
  CHECK(r.count == 6);
  CHECK(r.strict_ok);
  CHECK(r.grace_violations.empty());
  CHECK(r.count_min == 6);
  CHECK(r.count_max == 6);
}

TEST_CASE("count_dos: eigenvalue at the window edge violates strict mode") {
  const DosReport r = count_dos(sum_z(3), DosQuery{-1.0, 2.0, 0.5}, false);
  CHECK(!r.strict_ok);
  REQUIRE(!r.grace_violations.empty());
  CHECK(r.grace_violations[0] == doctest::Approx(-1.0));
  // grace mode tolerates it and brackets the answer
  const DosReport g = count_dos(sum_z(3), DosQuery{-1.0, 2.0, 0.5}, true);
  CHECK(g.strict_ok);
  CHECK(g.count_min <= g.count);
  CHECK(g.count <= g.count_max);
}

TEST_CASE("count_dos: random gapped instances match the Jacobi histogram oracle") {
  CounterRng rng(2025);
  for (int rep = 0; rep < 15; ++rep) {
    const LocalHamiltonian h = gen::random_two_local(3, 4, rng);
    const oracle::JacobiResult j = oracle::jacobi_eig(assemble(h));
    const gen::GappedQuery q = gen::gapped_window(j.eigenvalues);
    const DosReport r = count_dos(h, DosQuery{q.e1, q.e2, q.delta}, false);
    CHECK(r.strict_ok);
    int brute = 0;
    for (double lam : j.eigenvalues)
      if (lam >= q.e1 && lam <= q.e2) ++brute;
    CHECK(r.count == brute);
    CHECK(r.count == q.expected_count);
  }
}

TEST_CASE("count_dos: histogram covers every eigenvalue") {
  const DosReport r = count_dos(sum_z(3), DosQuery{-2.0, 2.0, 0.5}, false);
  int64_t total = 0;
  for (int64_t c : r.histogram_counts) total += c;
  CHECK(total == 8);
  REQUIRE(r.histogram_edges.size() == r.histogram_counts.size() + 1);
  CHECK(r.histogram_edges.front() == doctest::Approx(-3.0));
  CHECK(r.histogram_edges.back() == doctest::Approx(3.0));
}

TEST_CASE("count_dos: invariant under site relabeling") {
  CounterRng rng(321);
  for (int rep = 0; rep < 10; ++rep) {
    const LocalHamiltonian h = gen::random_two_local(4, 5, rng);
    const gen::GappedQuery q = gen::gapped_window(eig_hermitian_values(assemble(h)));
    const std::vector<int> pi{2, 0, 3, 1};
    const LocalHamiltonian hp = relabeled(h, pi);
    const DosReport a = count_dos(h, DosQuery{q.e1, q.e2, q.delta}, false);
    const DosReport b = count_dos(hp, DosQuery{q.e1, q.e2, q.delta}, false);
    CHECK(a.count == b.count);
    CHECK(a.strict_ok == b.strict_ok);
  }
}

TEST_CASE("count_ground: projector chain on two qubits has a unique ground state") {
  // sum of (1 - Z_i)/2
  LocalHamiltonian h;
  h.site_dims = {2, 2};
  for (int q = 0; q < 2; ++q) {
    ComplexMatrix p(2);
    p.at(1, 1) = 1.0;
    h.terms.push_back(LocalTerm{{q}, std::move(p)});
  }
  const GroundCountReport r = count_ground(h, 0.0, 0.5, 1.0);
  CHECK(r.count == 1);
  CHECK(r.count_via_dos == 1);
  CHECK(r.agree);
}

TEST_CASE("count_ground: direct and DOS-reduction paths agree on random instances") {
  CounterRng rng(818);
  int done = 0;
  for (int rep = 0; rep < 200 && done < 100; ++rep) {
    const LocalHamiltonian h = gen::random_two_local(3, 4, rng);
    const std::vector<double> lam = eig_hermitian_values(assemble(h));
    // choose the widest gap as the forbidden interval
    int gi = 0;
    for (int i = 0; i + 1 < static_cast<int>(lam.size()); ++i)
      if (lam[i + 1] - lam[i] > lam[gi + 1] - lam[gi]) gi = i;
    const double e1 = lam[gi] + 0.25 * (lam[gi + 1] - lam[gi]);
    const double e2 = lam[gi + 1] - 0.25 * (lam[gi + 1] - lam[gi]);
    const GroundCountReport r = count_ground(h, lam.front(), e1, e2);
    CHECK(r.agree);
    CHECK(r.count == gi + 1);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("count_ground: precondition violations carry witnesses") {
  CHECK_THROWS_WITH_AS(count_ground(sum_z(2), -1.0, -0.5, 0.5),
                       doctest::Contains("below e0"), Error);
  CHECK_THROWS_WITH_AS(count_ground(sum_z(2), -2.0, -1.0, 1.0),
                       doctest::Contains("forbidden interval"), Error);
}

TEST_CASE("quadratic_shift: parabola vertex and roots") {
  // H = Z on one qubit, window centered so an eigenvalue sits at the vertex
  LocalHamiltonian h;
  h.site_dims = {2};
  ComplexMatrix z(2);
  z.at(0, 0) = 1.0;
  z.at(1, 1) = -1.0;
  h.terms.push_back(LocalTerm{{0}, z});

  // eigenvalue -1 at the vertex of (x - e1)(x - e2) with e1 = -2, e2 = 0
  const ShiftResult s = quadratic_shift(h, -2.0, 0.0, 0.5);
  const std::vector<double> lam = eig_hermitian_values(assemble(s.h_prime));
  CHECK(lam.front() == doctest::Approx(-s.nu * 1.0).epsilon(1e-12));  // -nu (e2-e1)^2/4
  // eigenvalue +1 is a distance 1 outside the window: nu (1-e1)(1-e2) = 3nu
  CHECK(lam.back() == doctest::Approx(s.nu * 3.0).epsilon(1e-12));

  // an eigenvalue exactly at e1 maps to zero (the other one, at +1, maps
  // inside the window and lands below it)
  const ShiftResult s2 = quadratic_shift(h, -1.0, 2.0, 0.5);
  const std::vector<double> lam2 = eig_hermitian_values(assemble(s2.h_prime));
  CHECK(std::abs(lam2.back()) < 1e-12);
  CHECK(lam2.front() == doctest::Approx(-2.0 * s2.nu).epsilon(1e-12));
}

TEST_CASE("quadratic_shift: spectrum equals the scalar quadratic of the input spectrum") {
  CounterRng rng(626);
  for (int rep = 0; rep < 10; ++rep) {
    const LocalHamiltonian h = gen::random_two_local(3, 3, rng);
    const ComplexMatrix hm = assemble(h);
    const gen::GappedQuery q = gen::gapped_window(eig_hermitian_values(hm));
    const ShiftResult s = quadratic_shift(h, q.e1, q.e2, q.delta);
    const ComplexMatrix direct = assemble(s.h_prime);
    const ComplexMatrix expected = spectral_function(
        hm, [&](double x) { return s.nu * (x - q.e1) * (x - q.e2); });
    CHECK(max_abs_diff(direct, expected) < 1e-9);
    // in-window eigenvalues land at or below a_neg, the rest at or above b_pos
    for (double lam : eig_hermitian_values(hm)) {
      const double mapped = s.nu * (lam - q.e1) * (lam - q.e2);
      if (lam >= q.e1 + q.delta / 2 && lam <= q.e2 - q.delta / 2) CHECK(mapped <= s.a_neg + 1e-15);
      if (lam <= q.e1 - q.delta / 2 || lam >= q.e2 + q.delta / 2) CHECK(mapped >= s.b_pos - 1e-15);
    }
  }
}

TEST_CASE("quadratic_shift: every emitted term is Hermitian and subnormalized") {
  CounterRng rng(11);
  const LocalHamiltonian h = gen::random_two_local(4, 4, rng);
  const gen::GappedQuery q = gen::gapped_window(eig_hermitian_values(assemble(h)));
  const ShiftResult s = quadratic_shift(h, q.e1, q.e2, q.delta);
  CHECK(s.m_terms == static_cast<int>(s.h_prime.terms.size()));
  std::vector<std::string> warnings;
  s.h_prime.validate(&warnings);
  CHECK(warnings.empty());
  for (const LocalTerm& t : s.h_prime.terms)
    CHECK(static_cast<int>(t.sites.size()) <= 2 * h.locality());
}

TEST_CASE("dos_verifier_omega: analytic sum-of-Z case counts 6") {
  const LocalHamiltonian h = sum_z(3);
  const ShiftResult s = quadratic_shift(h, -2.0, 2.0, 0.5);
  const VerifierInstance v = dos_verifier_omega(s);
  CHECK(v.a > 0.5);
  CHECK(v.b < 0.5);
  const CountReport r = accepting_dimension(v);
  CHECK(r.promise_ok);
  CHECK(r.dim_accept == 6);
  CHECK(r.dim_accept == count_dos(h, DosQuery{-2.0, 2.0, 0.5}, false).count);
}

TEST_CASE("dos_verifier_omega: vanishing H' yields a promise violation, not a crash") {
  // H = Z with window [-1, 1]: H' = nu (H^2 - 1) = 0, so Omega = 1/2 identity
  // and its sole eigenvalue sits strictly between the thresholds
  LocalHamiltonian h;
  h.site_dims = {2};
  ComplexMatrix z(2);
  z.at(0, 0) = 1.0;
  z.at(1, 1) = -1.0;
  h.terms.push_back(LocalTerm{{0}, std::move(z)});
  const ShiftResult s = quadratic_shift(h, -1.0, 1.0, 0.5);
  CHECK(assemble(s.h_prime).max_abs() < 1e-15);
  const VerifierInstance v = dos_verifier_omega(s);
  CHECK(max_abs_diff(v.omega, ComplexMatrix::identity(2) * cplx(0.5, 0.0)) < 1e-15);
  const CountReport r = accepting_dimension(v);
  CHECK(!r.promise_ok);
}

TEST_CASE("dos chain: count_dos equals the accepting dimension on random instances") {
  CounterRng rng(5150);
  for (int rep = 0; rep < 20; ++rep) {
    const LocalHamiltonian h = gen::random_two_local(3, 4, rng);
    const gen::GappedQuery q = gen::gapped_window(eig_hermitian_values(assemble(h)));
    const DosReport dos = count_dos(h, DosQuery{q.e1, q.e2, q.delta}, false);
    REQUIRE(dos.strict_ok);
    const ShiftResult s = quadratic_shift(h, q.e1, q.e2, q.delta);
    const CountReport r = accepting_dimension(dos_verifier_omega(s));
    CHECK(r.promise_ok);
    CHECK(r.dim_accept == dos.count);
  }
}
