#include "doslab/path_sum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doslab/verifier.hpp"

namespace doslab {

namespace {

struct GateView {
  uint64_t mask = 0;
  std::vector<uint64_t> spread;  // local index -> target-bit pattern
  std::vector<int> targets;
  const ComplexMatrix* mat = nullptr;

  int local_of(uint64_t s) const {
    int l = 0;
    for (size_t j = 0; j < targets.size(); ++j)
      if (s & (uint64_t{1} << targets[j])) l |= 1 << j;
    return l;
  }
  // entry <to|U|from>, zero when the states differ outside the support
  double entry(uint64_t to, uint64_t from) const {
    if ((to & ~mask) != (from & ~mask)) return 0.0;
    return mat->at(local_of(to), local_of(from)).real();
  }
};

std::vector<GateView> make_views(const Circuit& c) {
  std::vector<GateView> v;
  v.reserve(c.gates.size());
  for (const Gate& g : c.gates) {
    GateView gv;
    gv.targets = g.targets;
    gv.mat = &g.matrix;
    for (int t : g.targets) gv.mask |= uint64_t{1} << t;
    const int ld = 1 << g.arity();
    gv.spread.resize(ld, 0);
    for (int l = 0; l < ld; ++l)
      for (int j = 0; j < g.arity(); ++j)
        if (l & (1 << j)) gv.spread[l] |= uint64_t{1} << g.targets[j];
    v.push_back(std::move(gv));
  }
  return v;
}

void require_real(const Circuit& c) {
  if (!c.all_gates_real())
    throw Error(ErrorKind::invalid_argument,
                "path sums require an all-real circuit; realify it first");
}

// Enumerates every path with no vanishing transition factor and no accept
// mismatch; calls per_path(forward*backward product) for each. All other
// paths have f identically zero.
template <class F>
uint64_t walk_paths(const Circuit& c, int accept_bit, F&& per_path) {
  const std::vector<GateView> views = make_views(c);
  const int t_len = c.length();
  uint64_t visited = 0;

  // backward chain j_1..j_{T-1} with fixed endpoints
  auto backward = [&](auto&& self, int t, uint64_t state, uint64_t i_last, double amp,
                      double famp) -> void {
    const GateView& gv = views[t - 1];
    if (t == t_len) {
      const double e = gv.entry(i_last, state);
      if (e != 0.0) {
        ++visited;
        per_path(famp * amp * e);
      }
      return;
    }
    const uint64_t base = state & ~gv.mask;
    const int lfrom = gv.local_of(state);
    for (size_t l = 0; l < gv.spread.size(); ++l) {
      const double e = gv.mat->at(static_cast<int>(l), lfrom).real();
      if (e == 0.0) continue;
      self(self, t + 1, base | gv.spread[l], i_last, amp * e, famp);
    }
  };

  // forward chain i_1..i_T
  auto forward = [&](auto&& self, int t, uint64_t state, uint64_t i0, double amp) -> void {
    if (t > t_len) {
      if (static_cast<int>(state & 1) != accept_bit) return;  // P(i_T) = 0
      backward(backward, 1, i0, state, 1.0, amp);
      return;
    }
    const GateView& gv = views[t - 1];
    const uint64_t base = state & ~gv.mask;
    const int lfrom = gv.local_of(state);
    for (size_t l = 0; l < gv.spread.size(); ++l) {
      const double e = gv.mat->at(static_cast<int>(l), lfrom).real();
      if (e == 0.0) continue;
      self(self, t + 1, base | gv.spread[l], i0, amp * e);
    }
  };

  const uint64_t inputs = uint64_t{1} << c.n;
  for (uint64_t i0 = 0; i0 < inputs; ++i0) forward(forward, 1, i0, i0, 1.0);
  return visited;
}

}  // namespace

int zeta_bits_of(const Circuit& c) { return 2 * c.length() * c.m + c.n; }

uint64_t nominal_path_count(const Circuit& c, uint64_t path_cap) {
  const int bits = c.n + (2 * c.length() - 1) * c.m;
  if (bits >= 62)
    throw Error(ErrorKind::capacity, "path space exceeds 2^62");
  const uint64_t total = uint64_t{1} << bits;
  if (total > path_cap) {
    std::ostringstream os;
    os << "path count 2^" << bits << " = " << total << " exceeds the cap " << path_cap
       << "; raise DOSLAB_PATH_CAP to allow it";
    throw Error(ErrorKind::capacity, os.str());
  }
  return total;
}

double path_amplitude(const Circuit& c, const Path& p, int accept_bit) {
  c.validate();
  require_real(c);
  const int t_len = c.length();
  if (static_cast<int>(p.fwd.size()) != t_len + 1 ||
      static_cast<int>(p.bwd.size()) != std::max(0, t_len - 1))
    throw Error(ErrorKind::invalid_argument, "path index counts do not match the circuit length");
  const uint64_t size = uint64_t{1} << c.m;
  for (uint64_t s : p.fwd)
    if (s >= size) throw Error(ErrorKind::invalid_argument, "path index out of range");
  for (uint64_t s : p.bwd)
    if (s >= size) throw Error(ErrorKind::invalid_argument, "path index out of range");
  if (p.fwd[0] >> c.n)
    throw Error(ErrorKind::invalid_argument, "i_0 must have all ancilla bits zero");

  const std::vector<GateView> views = make_views(c);
  if (static_cast<int>(p.fwd.back() & 1) != accept_bit) return 0.0;
  double f = 1.0;
  for (int t = 1; t <= t_len; ++t) f *= views[t - 1].entry(p.fwd[t], p.fwd[t - 1]);
  uint64_t prev = p.fwd[0];
  for (int t = 1; t < t_len; ++t) {
    f *= views[t - 1].entry(p.bwd[t - 1], prev);
    prev = p.bwd[t - 1];
  }
  if (t_len >= 1) f *= views[t_len - 1].entry(p.fwd.back(), prev);
  return f;
}

TraceEnumeration enumerate_trace(const Circuit& c, int accept_bit, uint64_t path_cap) {
  c.validate();
  require_real(c);
  TraceEnumeration out;
  out.paths_total = nominal_path_count(c, path_cap);
  double acc = 0.0;
  out.paths_visited = walk_paths(c, accept_bit, [&](double f) { acc += f; });
  out.trace = acc;
  return out;
}

namespace {

// exact g for zeta_bits small enough that 2^{zeta+3} fits in int64
int64_t integerize_fast(double f, int zeta_bits) {
  int e = 0;
  const double mant = std::frexp(f, &e);
  const int64_t m53 = static_cast<int64_t>(std::ldexp(mant, 53));  // exact
  const int shift = e - 53 + zeta_bits + 2;
  const int64_t one = int64_t{1} << (zeta_bits + 2);
  if (m53 == 0) return one;
  if (shift >= 0) return one + (m53 << shift);
  const int s = -shift;
  if (s > 62) {
    // |f| 2^{zeta+2} < 1/2 unless it is exactly 1/2, which needs s <= 54
    return one;
  }
  const int64_t q = m53 >> s;  // floor
  const int64_t r = m53 - (q << s);
  return one + q + ((2 * r >= (int64_t{1} << s)) ? 1 : 0);
}

}  // namespace

BigInt integerize(double f_value, int zeta_bits) {
  if (!(f_value >= -1.0 - 1e-9 && f_value <= 1.0 + 1e-9))
    throw Error(ErrorKind::invalid_argument, "f outside [-1, 1]");
  f_value = std::clamp(f_value, -1.0, 1.0);
  if (zeta_bits < 0) throw Error(ErrorKind::invalid_argument, "negative bit count");
  if (zeta_bits + 3 < 62) return BigInt(integerize_fast(f_value, zeta_bits));

  // general route: exact rational (m53 + 2^{53-e}) / 2^{53-e} scaled by 2^{zeta+2}
  int e = 0;
  const double mant = std::frexp(f_value, &e);
  const int64_t m53 = static_cast<int64_t>(std::ldexp(mant, 53));
  const int denom_bits = 53 - e;  // f = m53 / 2^{denom_bits}
  BigInt num(m53);
  if (denom_bits <= zeta_bits + 2) {
    num.shift_left(static_cast<unsigned>(zeta_bits + 2 - denom_bits));
    return num + BigInt::pow2(static_cast<unsigned>(zeta_bits + 2));
  }
  num += BigInt::pow2(static_cast<unsigned>(denom_bits));
  return num.round_shift_right_half_up(static_cast<unsigned>(denom_bits - zeta_bits - 2));
}

bool path_indicator(const BigInt& g, const BigInt& xi) {
  return xi.sign() >= 0 && xi < g;
}

namespace {

// dyadic value k / 2^s with k odd or zero
struct DyadicEntry {
  int64_t num = 0;
  int exp = 0;
};

// every double is formally dyadic, so the cap on the denominator exponent is
// what separates genuinely dyadic gate entries (signed halves, quarters, ...)
// from irrational values rounded to 53 bits, such as Hadamard's 1/sqrt(2)
constexpr int kMaxDyadicDenomBits = 24;

DyadicEntry to_dyadic(double x) {
  DyadicEntry d;
  if (x == 0.0) return d;
  int e = 0;
  const double mant = std::frexp(x, &e);
  int64_t m53 = static_cast<int64_t>(std::ldexp(mant, 53));
  int s = 53 - e;
  while ((m53 & 1) == 0 && s > 0) {
    m53 >>= 1;
    --s;
  }
  if (s < 0) {  // |x| is a large even integer; fold the excess into num
    m53 <<= -s;
    s = 0;
  }
  if (s > kMaxDyadicDenomBits) {
    std::ostringstream os;
    os << "gate entry " << x << " is not a dyadic rational with denominator up to 2^"
       << kMaxDyadicDenomBits << "; exact-rational mode cannot run";
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  d.num = m53;
  d.exp = s;
  return d;
}

struct DyadicGateView {
  uint64_t mask = 0;
  std::vector<uint64_t> spread;
  std::vector<int> targets;
  std::vector<DyadicEntry> entries;  // row-major
  int dim = 0;

  int local_of(uint64_t s) const {
    int l = 0;
    for (size_t j = 0; j < targets.size(); ++j)
      if (s & (uint64_t{1} << targets[j])) l |= 1 << j;
    return l;
  }
};

struct ExactAccumulator {
  BigInt num;  // sum = num / 2^exp
  int exp = 0;

  void add(const BigInt& n2, int e2) {
    if (e2 > exp) {
      num.shift_left(static_cast<unsigned>(e2 - exp));
      exp = e2;
      num += n2;
    } else {
      BigInt t = n2;
      t.shift_left(static_cast<unsigned>(exp - e2));
      num += t;
    }
  }
};

// exact-rational walker; mirrors walk_paths but carries dyadic products
struct ShadowResult {
  uint64_t visited = 0;
  BigInt g_sum;            // over visited paths
  ExactAccumulator f_sum;  // exact sum of f
  bool rounding_exact = true;
};

ShadowResult walk_paths_exact(const Circuit& c, int accept_bit, int zeta_bits) {
  std::vector<DyadicGateView> views;
  for (const Gate& g : c.gates) {
    DyadicGateView gv;
    gv.targets = g.targets;
    gv.dim = g.matrix.dim();
    for (int t : g.targets) gv.mask |= uint64_t{1} << t;
    const int ld = gv.dim;
    gv.spread.resize(ld, 0);
    for (int l = 0; l < ld; ++l)
      for (size_t j = 0; j < g.targets.size(); ++j)
        if (l & (1 << j)) gv.spread[l] |= uint64_t{1} << g.targets[j];
    gv.entries.resize(static_cast<size_t>(ld) * ld);
    for (int r = 0; r < ld; ++r)
      for (int col = 0; col < ld; ++col)
        gv.entries[static_cast<size_t>(r) * ld + col] = to_dyadic(g.matrix.at(r, col).real());
    views.push_back(std::move(gv));
  }

  const int t_len = c.length();
  ShadowResult res;

  auto record = [&](const BigInt& num, int exp) {
    ++res.visited;
    res.f_sum.add(num, exp);
    // g = (num / 2^exp + 1) 2^{zeta+2}
    if (exp <= zeta_bits + 2) {
      BigInt g = num;
      g.shift_left(static_cast<unsigned>(zeta_bits + 2 - exp));
      g += BigInt::pow2(static_cast<unsigned>(zeta_bits + 2));
      res.g_sum += g;
    } else {
      BigInt total = num + BigInt::pow2(static_cast<unsigned>(exp));
      const unsigned s = static_cast<unsigned>(exp - zeta_bits - 2);
      BigInt g = total.round_shift_right_half_up(s);
      BigInt back = g;
      back.shift_left(s);
      if (!(back == total)) res.rounding_exact = false;
      res.g_sum += g;
    }
  };

  auto backward = [&](auto&& self, int t, uint64_t state, uint64_t i_last, BigInt num, int exp,
                      const BigInt& fnum, int fexp) -> void {
    const DyadicGateView& gv = views[t - 1];
    if (t == t_len) {
      if ((i_last & ~gv.mask) != (state & ~gv.mask)) return;
      const DyadicEntry& e =
          gv.entries[static_cast<size_t>(gv.local_of(i_last)) * gv.dim + gv.local_of(state)];
      if (e.num == 0) return;
      record(fnum * num * BigInt(e.num), fexp + exp + e.exp);
      return;
    }
    const uint64_t base = state & ~gv.mask;
    const int lfrom = gv.local_of(state);
    for (size_t l = 0; l < gv.spread.size(); ++l) {
      const DyadicEntry& e = gv.entries[l * gv.dim + lfrom];
      if (e.num == 0) continue;
      self(self, t + 1, base | gv.spread[l], i_last, num * BigInt(e.num), exp + e.exp, fnum, fexp);
    }
  };

  auto forward = [&](auto&& self, int t, uint64_t state, uint64_t i0, BigInt num, int exp) -> void {
    if (t > t_len) {
      if (static_cast<int>(state & 1) != accept_bit) return;
      backward(backward, 1, i0, state, BigInt(1), 0, num, exp);
      return;
    }
    const DyadicGateView& gv = views[t - 1];
    const uint64_t base = state & ~gv.mask;
    const int lfrom = gv.local_of(state);
    for (size_t l = 0; l < gv.spread.size(); ++l) {
      const DyadicEntry& e = gv.entries[l * gv.dim + lfrom];
      if (e.num == 0) continue;
      self(self, t + 1, base | gv.spread[l], i0, num * BigInt(e.num), exp + e.exp);
    }
  };

  const uint64_t inputs = uint64_t{1} << c.n;
  for (uint64_t i0 = 0; i0 < inputs; ++i0) forward(forward, 1, i0, i0, BigInt(1), 0);
  return res;
}

}  // namespace

ModelCount count_oracle(const Circuit& c, int accept_bit, bool exact_rational,
                        uint64_t path_cap) {
  c.validate();
  require_real(c);
  ModelCount out;
  out.zeta_bits = zeta_bits_of(c);
  out.paths_total = nominal_path_count(c, path_cap);

  if (exact_rational) {
    const ShadowResult res = walk_paths_exact(c, accept_bit, out.zeta_bits);
    out.paths_visited = res.visited;
    out.model_count = res.g_sum;
    out.rounding_exact = res.rounding_exact;
  } else if (out.zeta_bits + 3 < 62) {
    unsigned __int128 acc = 0;
    out.paths_visited = walk_paths(c, accept_bit, [&](double f) {
      acc += static_cast<unsigned __int128>(integerize_fast(std::clamp(f, -1.0, 1.0),
                                                            out.zeta_bits));
    });
    // fold the 128-bit accumulator into the big integer
    const uint64_t lo = static_cast<uint64_t>(acc);
    const uint64_t hi = static_cast<uint64_t>(acc >> 64);
    out.model_count = BigInt::from_u64(hi);
    out.model_count.shift_left(64);
    out.model_count += BigInt::from_u64(lo);
    out.rounding_exact = false;
  } else {
    BigInt acc;
    out.paths_visited = walk_paths(c, accept_bit, [&](double f) {
      acc += integerize(std::clamp(f, -1.0, 1.0), out.zeta_bits);
    });
    out.model_count = acc;
    out.rounding_exact = false;
  }

  // pruned paths have f = 0 exactly, each contributing g = 2^{zeta+2}
  BigInt skipped = BigInt::from_u64(out.paths_total - out.paths_visited);
  skipped = skipped * BigInt::pow2(static_cast<unsigned>(out.zeta_bits + 2));
  out.model_count += skipped;
  return out;
}

TraceCountReport reconstruct(const Circuit& c, double a, double b, int r, bool exact_rational,
                             int accept_bit, uint64_t path_cap) {
  if (r < 2) throw Error(ErrorKind::invalid_argument, "reconstruction requires r >= 2");
  c.validate();
  require_real(c);

  TraceCountReport rep;
  rep.a = a;
  rep.b = b;
  rep.r = r;
  rep.exact_rational = exact_rational;

  const ComplexMatrix om = omega(c);
  rep.trace_direct = om.trace().real();

  const TraceEnumeration te = enumerate_trace(c, accept_bit, path_cap);
  rep.trace_pathsum = te.trace;
  rep.num_paths = te.paths_total;

  const ModelCount mc = count_oracle(c, accept_bit, exact_rational, path_cap);
  rep.zeta_bits = mc.zeta_bits;
  rep.model_count = mc.model_count;
  rep.rounding_exact = mc.rounding_exact;

  BigInt shifted = BigInt::from_u64(rep.num_paths);
  shifted = shifted * BigInt::pow2(static_cast<unsigned>(rep.zeta_bits + 2));
  const BigInt m = rep.model_count - shifted;
  rep.estimate = std::ldexp(m.to_double(), -(rep.zeta_bits + 2));
  rep.within_quarter = std::abs(rep.estimate - rep.trace_direct) <= 0.25 + 1e-9;

  try {
    const VerifierInstance vi = VerifierInstance::make(om, a, b);
    const CountReport cr = accepting_dimension(vi);
    rep.promise_ok = cr.promise_ok;
    if (cr.promise_ok) {
      const VerifierInstance amp = amplify_spectrum(vi, r);
      rep.dim_estimate = static_cast<int>(std::llround(amp.omega.trace().real()));
    }
  } catch (const Error&) {
    rep.promise_ok = false;
  }
  return rep;
}

}  // namespace doslab
