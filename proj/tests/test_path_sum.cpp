#include <doctest.h>

#include <cmath>

#include "doslab/circuit.hpp"
#include "doslab/path_sum.hpp"
#include "support/gen.hpp"

using namespace doslab;

namespace {

// all-paths reference: explicit odometer over every index tuple, iterated in
// reverse order, using path_amplitude + integerize per path
BigInt brute_model_count(const Circuit& c, int zeta_bits) {
  const int t_len = c.length();
  const uint64_t inputs = uint64_t{1} << c.n;
  const uint64_t states = uint64_t{1} << c.m;
  const int free_indices = t_len + std::max(0, t_len - 1);
  std::vector<uint64_t> odo(free_indices, 0);
  BigInt n;
  for (uint64_t i0 = inputs; i0-- > 0;) {
    bool done = false;
    std::fill(odo.begin(), odo.end(), 0);
    while (!done) {
      Path p;
      p.fwd.push_back(i0);
      for (int k = 0; k < t_len; ++k) p.fwd.push_back(odo[k]);
      for (int k = t_len; k < free_indices; ++k) p.bwd.push_back(odo[k]);
      n += integerize(path_amplitude(c, p), zeta_bits);
      done = true;
      for (int k = free_indices - 1; k >= 0; --k) {
        if (++odo[k] < states) {
          done = false;
          break;
        }
        odo[k] = 0;
      }
      if (free_indices == 0) break;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("path_amplitude: identity circuit, constant accepting path") {
  const Circuit c = realify(parse_circuit("qubits 1 inputs 1\nG I 0\n"));
  Path p;
  p.fwd = {1, 1};
  CHECK(path_amplitude(c, p) == doctest::Approx(1.0));
  // rejecting endpoint gives zero
  p.fwd = {0, 0};
  CHECK(path_amplitude(c, p) == 0.0);
}

TEST_CASE("path_amplitude: forbidden transition of a permutation gate vanishes") {
  const Circuit c = realify(parse_circuit("qubits 1 inputs 1\nG X 0\n"));
  Path p;
  p.fwd = {0, 0};  // X cannot keep |0> at |0>
  CHECK(path_amplitude(c, p) == 0.0);
  p.fwd = {0, 1};
  CHECK(path_amplitude(c, p) == doctest::Approx(1.0));
}

TEST_CASE("path_amplitude: single Hadamard, all one-step paths by hand") {
  const Circuit c = realify(parse_circuit("qubits 1 inputs 1\nG H 0\n"));
  REQUIRE(c.m == 2);
  const double h = 1.0 / std::sqrt(2.0);
  int nonzero = 0;
  for (uint64_t i0 = 0; i0 < 2; ++i0)
    for (uint64_t i1 = 0; i1 < 4; ++i1) {
      Path p;
      p.fwd = {i0, i1};
      const double f = path_amplitude(c, p);
      // hand enumeration: idle bit must stay 0, endpoint bit must be 1, and
      // then f is the squared Hadamard entry
      double expect = 0.0;
      if (i1 < 2 && (i1 & 1)) {
        const double entry = (i0 == 1) ? -h : h;
        expect = entry * entry;
      }
      CHECK(f == doctest::Approx(expect).epsilon(1e-14));
      if (f != 0.0) ++nonzero;
      CHECK((f == 0.0 || std::abs(f - 0.5) < 1e-14 || std::abs(f + 0.5) < 1e-14));
    }
  CHECK(nonzero == 2);
}

TEST_CASE("path_amplitude: rejects complex circuits and malformed paths") {
  const Circuit c = parse_circuit("qubits 1 inputs 1\nG S 0\n");
  Path p;
  p.fwd = {0, 0};
  CHECK_THROWS_AS(path_amplitude(c, p), Error);
  const Circuit r = realify(c);
  Path bad;
  bad.fwd = {0};
  CHECK_THROWS_AS(path_amplitude(r, bad), Error);
}

TEST_CASE("enumerate_trace: identity on two qubits gives 2") {
  const Circuit c = parse_circuit("qubits 2 inputs 2\nG I 0\n");
  const TraceEnumeration t = enumerate_trace(c);
  CHECK(t.trace == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(t.paths_total == 16);  // 2^{2 + 1*2}
  // the realified circuit gives the same trace
  const TraceEnumeration tr = enumerate_trace(realify(c));
  CHECK(tr.trace == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("enumerate_trace: single X accepts exactly one input") {
  const Circuit c = parse_circuit("qubits 1 inputs 1\nG X 0\n");
  CHECK(enumerate_trace(c).trace == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumerate_trace: random real circuits match tr Omega") {
  CounterRng rng(2101);
  for (int rep = 0; rep < 10; ++rep) {
    const Circuit c = gen::random_real_circuit(3, 2, 3, rng);
    const TraceEnumeration t = enumerate_trace(c);
    CHECK(std::abs(t.trace - omega(c).trace().real()) < 1e-9);
  }
}

TEST_CASE("enumerate_trace: realified complex circuits match their own tr Omega") {
  CounterRng rng(2102);
  for (int rep = 0; rep < 5; ++rep) {
    const Circuit c = realify(gen::random_complex_circuit(2, 2, 3, rng));
    const TraceEnumeration t = enumerate_trace(c);
    CHECK(std::abs(t.trace - omega(c).trace().real()) < 1e-9);
  }
}

TEST_CASE("enumerate_trace: the path cap rejects oversized circuits") {
  // T = 5 after padding, realified m = 4: 2^38 nominal paths
  const Circuit c = plant_verifier(2, 1, 3, 0.0, 3).circuit;
  CHECK_THROWS_WITH_AS(enumerate_trace(realify(c)), doctest::Contains("DOSLAB_PATH_CAP"), Error);
  CHECK_THROWS_AS(enumerate_trace(realify(c), 1, 1000), Error);
  // far beyond 2^62 nominal paths is rejected outright
  const Circuit big = plant_verifier(2, 1, 6, 0.0, 3).circuit;
  CHECK_THROWS_WITH_AS(enumerate_trace(realify(big)), doctest::Contains("2^62"), Error);
}

TEST_CASE("integerize: worked examples") {
  CHECK(integerize(0.5, 2).to_string() == "24");    // round(16 * 1.5)
  CHECK(integerize(-1.0, 2).to_string() == "0");
  CHECK(integerize(1.0 / 3.0, 4).to_string() == "85");  // round(64 * 4/3)
  CHECK(integerize(0.0, 3).to_string() == "32");    // 2^{3+2}
  CHECK(integerize(1.0, 3).to_string() == "64");    // 2^{3+3}
  CHECK_THROWS_AS(integerize(1.5, 2), Error);
}

TEST_CASE("integerize: ties round half away from zero on the shifted value") {
  // f = -2.5 / 2^4: 2^4 (f+1) = 13.5 rounds up to 14
  CHECK(integerize(-2.5 / 16.0, 2).to_string() == "14");
  // f = 2.5 / 2^4: 16 + 2.5 = 18.5 rounds up to 19
  CHECK(integerize(2.5 / 16.0, 2).to_string() == "19");
}

TEST_CASE("integerize: fast and general routes agree") {
  CounterRng rng(883);
  for (int rep = 0; rep < 2000; ++rep) {
    const double f = 2.0 * rng.next_double() - 1.0;
    for (int zeta : {2, 7, 19, 33}) {
      const BigInt a = integerize(f, zeta);
      // recompute through the exact rational definition
      int e = 0;
      const double mant = std::frexp(f, &e);
      const int64_t m53 = static_cast<int64_t>(std::ldexp(mant, 53));
      BigInt num(m53);
      const int denom = 53 - e;
      BigInt total = num;
      if (denom <= zeta + 2) {
        total.shift_left(static_cast<unsigned>(zeta + 2 - denom));
        total += BigInt::pow2(static_cast<unsigned>(zeta + 2));
        CHECK(a == total);
      } else {
        total += BigInt::pow2(static_cast<unsigned>(denom));
        CHECK(a == total.round_shift_right_half_up(static_cast<unsigned>(denom - zeta - 2)));
      }
    }
  }
}

TEST_CASE("path_indicator: h(zeta, xi) = 1 exactly when 0 <= xi < g") {
  const BigInt g = integerize(0.25, 5);
  CHECK(path_indicator(g, BigInt(0)));
  CHECK(path_indicator(g, g - BigInt(1)));
  CHECK(!path_indicator(g, g));
  CHECK(!path_indicator(g, g + BigInt(5)));
  CHECK(!path_indicator(g, BigInt(-1)));
  // sampled (zeta, xi) pairs against the inequality definition
  CounterRng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const double f = 2.0 * rng.next_double() - 1.0;
    const BigInt gz = integerize(f, 6);
    const BigInt xi(static_cast<long>(rng.next_below(1 << 10)));
    CHECK(path_indicator(gz, xi) == (xi < gz));
  }
}

TEST_CASE("count_oracle: a circuit with no accepting path gives N = paths * 2^{zeta+2}") {
  const Circuit c = parse_circuit("qubits 1 inputs 0\nG I 0\n");
  const ModelCount mc = count_oracle(c);
  CHECK(mc.zeta_bits == 2);
  CHECK(mc.paths_total == 2);
  BigInt expect = BigInt(2) * BigInt::pow2(4);
  CHECK(mc.model_count == expect);
}

TEST_CASE("count_oracle: matches the all-paths brute force, any order") {
  const Circuit x = realify(parse_circuit("qubits 1 inputs 1\nG X 0\n"));
  const ModelCount mc = count_oracle(x);
  CHECK(mc.model_count == brute_model_count(x, mc.zeta_bits));

  CounterRng rng(31337);
  const Circuit r = gen::random_real_circuit(2, 1, 2, rng);
  const ModelCount mr = count_oracle(r);
  CHECK(mr.model_count == brute_model_count(r, mr.zeta_bits));
}

TEST_CASE("reconstruct: identity on two qubits") {
  const Circuit c = realify(parse_circuit("qubits 2 inputs 2\nG I 0\n"));
  const TraceCountReport rep = reconstruct(c, 1.0, 0.0, 4);
  CHECK(rep.trace_direct == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(rep.estimate - rep.trace_direct) <= 0.25);
  CHECK(rep.within_quarter);
  CHECK(rep.promise_ok);
  REQUIRE(rep.dim_estimate.has_value());
  CHECK(*rep.dim_estimate == 2);
}

TEST_CASE("reconstruct: planted instances recover d") {
  for (int d = 0; d <= 4; ++d) {
    const Circuit c = realify(plant_verifier(2, d, 0, 0.0, 1234 + d).circuit);
    const TraceCountReport rep = reconstruct(c, 1.0, 0.0, 4);
    CHECK(rep.within_quarter);
    REQUIRE(rep.dim_estimate.has_value());
    CHECK(*rep.dim_estimate == d);
    CHECK(std::abs(rep.trace_pathsum - rep.trace_direct) < 1e-9);
  }
}

TEST_CASE("reconstruct: random real circuits stay within a quarter") {
  CounterRng rng(7777);
  for (int rep = 0; rep < 10; ++rep) {
    const Circuit c = gen::random_real_circuit(3, 2, 2, rng);
    const TraceCountReport r = reconstruct(c, 0.9, 0.1, 3);
    CHECK(std::abs(r.trace_pathsum - r.trace_direct) < 1e-9);
    CHECK(std::abs(r.estimate - r.trace_direct) <= 0.25 + 1e-9);
  }
}

TEST_CASE("reconstruct: exact-rational shadow is exact when no rounding occurs") {
  CounterRng rng(808);
  for (int rep = 0; rep < 10; ++rep) {
    const Circuit c = gen::random_dyadic_circuit(3, 2, 3, rng);
    REQUIRE(c.all_gates_real());
    const TraceCountReport r = reconstruct(c, 0.9, 0.1, 3, true);
    CHECK(r.exact_rational);
    CHECK(r.rounding_exact);  // dyadic entries, zeta+2 exceeds every exponent
    CHECK(std::abs(r.estimate - r.trace_pathsum) < 1e-12);
    CHECK(std::abs(r.estimate - r.trace_direct) < 1e-6);
  }
}

TEST_CASE("reconstruct: shadow mode rejects non-dyadic gates") {
  const Circuit c = realify(parse_circuit("qubits 1 inputs 1\nG H 0\n"));
  CHECK_THROWS_WITH_AS(reconstruct(c, 0.9, 0.1, 3, true), doctest::Contains("dyadic"), Error);
}

TEST_CASE("reconstruct: plain and shadow model counts agree on dyadic circuits") {
  CounterRng rng(4242);
  const Circuit c = gen::random_dyadic_circuit(2, 2, 3, rng);
  const ModelCount plain = count_oracle(c, 1, false);
  const ModelCount shadow = count_oracle(c, 1, true);
  CHECK(plain.model_count == shadow.model_count);
  CHECK(plain.paths_visited == shadow.paths_visited);
}
