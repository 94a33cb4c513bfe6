#include "doslab/doslab.h"

#include <algorithm>
#include <cstring>
#include <string>

#include <json.hpp>

#include "doslab/circuit.hpp"
#include "doslab/clock.hpp"
#include "doslab/json_io.hpp"
#include "doslab/linalg.hpp"
#include "doslab/local_ham.hpp"
#include "doslab/path_sum.hpp"
#include "doslab/verifier.hpp"

using namespace doslab;
using nlohmann::json;

struct doslab_circuit {
  Circuit c;
};
struct doslab_matrix {
  ComplexMatrix m;
};
struct doslab_hamiltonian {
  LocalHamiltonian h;
};

namespace {

thread_local std::string g_last_error;

doslab_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse:
      return DOSLAB_ERR_PARSE;
    case ErrorKind::invalid_argument:
      return DOSLAB_ERR_INVALID_ARGUMENT;
    case ErrorKind::promise_violation:
      return DOSLAB_ERR_PROMISE_VIOLATION;
    case ErrorKind::capacity:
      return DOSLAB_ERR_CAPACITY;
    case ErrorKind::assertion:
      return DOSLAB_ERR_ASSERTION;
    case ErrorKind::internal:
      return DOSLAB_ERR_INTERNAL;
  }
  return DOSLAB_ERR_INTERNAL;
}

template <class F>
doslab_status guarded(F&& f) {
  try {
    f();
    return DOSLAB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DOSLAB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DOSLAB_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

doslab_status require(bool cond, const char* msg) {
  if (cond) return DOSLAB_OK;
  g_last_error = msg;
  return DOSLAB_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* doslab_version(void) { return "doslab 1.0.0"; }

const char* doslab_last_error(void) { return g_last_error.c_str(); }

void doslab_string_free(char* s) { delete[] s; }

doslab_status doslab_circuit_parse(const char* text, doslab_circuit** out) {
  if (require(text && out, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new doslab_circuit{parse_circuit(text)}; });
}

doslab_status doslab_circuit_serialize(const doslab_circuit* c, char** out_text) {
  if (require(c && out_text, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out_text = dup_string(serialize_circuit(c->c)); });
}

doslab_status doslab_circuit_info(const doslab_circuit* c, char** out_json) {
  if (require(c && out_json, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    json j{{"m", c->c.m}, {"n", c->c.n}, {"t", c->c.length()}, {"real", c->c.all_gates_real()}};
    *out_json = dup_string(j.dump(2) + "\n");
  });
}

doslab_status doslab_circuit_plant(int n, int d, int t_pad, double eps, uint64_t seed,
                                   doslab_circuit** out) {
  if (require(out != nullptr, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new doslab_circuit{plant_verifier(n, d, t_pad, eps, seed).circuit};
  });
}

doslab_status doslab_circuit_realify(const doslab_circuit* c, doslab_circuit** out) {
  if (require(c && out, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new doslab_circuit{realify(c->c)}; });
}

void doslab_circuit_free(doslab_circuit* c) { delete c; }

doslab_status doslab_matrix_from_json(const char* text, doslab_matrix** out) {
  if (require(text && out, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new doslab_matrix{matrix_from_json(text)}; });
}

doslab_status doslab_matrix_to_json(const doslab_matrix* m, char** out_text) {
  if (require(m && out_text, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out_text = dup_string(matrix_to_json(m->m)); });
}

void doslab_matrix_free(doslab_matrix* m) { delete m; }

doslab_status doslab_omega(const doslab_circuit* c, doslab_matrix** out) {
  if (require(c && out, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new doslab_matrix{omega(c->c)}; });
}

doslab_status doslab_omega_report(const doslab_circuit* c, double a, double b, int grace,
                                  char** out_json) {
  if (require(c && out_json, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const ComplexMatrix om = omega(c->c);
    const VerifierInstance vi = VerifierInstance::make(om, a, b);
    const CountReport rep = accepting_dimension(vi);
    if (!rep.promise_ok && !grace)
      throw Error(ErrorKind::promise_violation,
                  "gap promise violated at eigenvalue " +
                      std::to_string(*rep.offending_eigenvalue) +
                      "; rerun with --grace for the count range");
    bool certified = false;
    if (rep.promise_ok) certified = minimax_certify(vi);
    json j{{"n", c->c.n},
           {"m", c->c.m},
           {"t", c->c.length()},
           {"a", a},
           {"b", b},
           {"eigenvalues", eig_hermitian_values(om)},
           {"count", json::parse(count_report_to_json(rep, -1))},
           {"minimax_certified", certified}};
    *out_json = dup_string(j.dump(2) + "\n");
  });
}

doslab_status doslab_verify_bound_report(const doslab_matrix* p, const doslab_matrix* q,
                                         char** out_json) {
  if (require(p && q && out_json, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const PrincipalAngleReport rep = principal_angles(p->m, q->m);
    const ProjectorBoundReport bound = projector_difference_bound(p->m, q->m);
    *out_json = dup_string(principal_angle_report_to_json(rep, bound));
  });
}

doslab_status doslab_hamiltonian_from_json(const char* text, doslab_hamiltonian** out) {
  if (require(text && out, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new doslab_hamiltonian{hamiltonian_from_json(text)}; });
}

doslab_status doslab_hamiltonian_to_json(const doslab_hamiltonian* h, char** out_text) {
  if (require(h && out_text, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out_text = dup_string(hamiltonian_to_json(h->h)); });
}

void doslab_hamiltonian_free(doslab_hamiltonian* h) { delete h; }

doslab_status doslab_compile_clock(const doslab_circuit* c, const char* variant, double a,
                                   double b, doslab_hamiltonian** out_ham,
                                   char** out_report_json) {
  if (require(c && variant && out_ham, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const std::string v = variant;
    FinalVariant fv;
    if (v == "projector") {
      fv = FinalVariant::projector;
    } else if (v == "standard") {
      fv = FinalVariant::standard;
    } else {
      throw Error(ErrorKind::invalid_argument, "variant must be 'projector' or 'standard'");
    }
    const ClockHamiltonian h = compile_clock(c->c, fv, a, b);
    *out_ham = new doslab_hamiltonian{to_local_hamiltonian(h)};
    if (out_report_json) {
      json j{{"m", h.m},
             {"n", h.n},
             {"t", h.t_len},
             {"variant", v},
             {"eps", h.eps},
             {"a", h.a_thresh},
             {"dim", h.dim()},
             {"gap_bound", clock_gap_bound(h.t_len)}};
      *out_report_json = dup_string(j.dump(2) + "\n");
    }
  });
}

doslab_status doslab_degeneracy_report(const doslab_hamiltonian* h, double e0, double e1,
                                       double e2, char** out_json) {
  if (require(h && out_json, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const GroundCountReport rep = count_ground(h->h, e0, e1, e2);
    *out_json = dup_string(ground_count_report_to_json(rep));
  });
}

doslab_status doslab_dos_report(const doslab_hamiltonian* h, double e1, double e2, double delta,
                                int grace, char** out_json, char** out_csv) {
  if (require(h && out_json, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const DosReport rep = count_dos(h->h, DosQuery{e1, e2, delta}, grace != 0);
    *out_json = dup_string(dos_report_to_json(rep));
    if (out_csv) *out_csv = dup_string(histogram_to_csv(rep));
    if (!rep.strict_ok)
      throw Error(ErrorKind::promise_violation,
                  "eigenvalues inside the grace intervals; rerun with --grace for a count range");
  });
}

doslab_status doslab_shift(const doslab_hamiltonian* h, double e1, double e2, double delta,
                           char** out_hprime_json, char** out_report_json) {
  if (require(h && out_hprime_json, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const ShiftResult s = quadratic_shift(h->h, e1, e2, delta);
    const VerifierInstance vi = dos_verifier_omega(s);
    *out_hprime_json = dup_string(hamiltonian_to_json(s.h_prime));
    if (out_report_json) *out_report_json = dup_string(shift_result_to_json(s, vi.a, vi.b));
  });
}

doslab_status doslab_trace_count_report(const doslab_circuit* c, double a, double b, int r,
                                        int exact_rational, uint64_t path_cap, char** out_json) {
  if (require(c && out_json, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const uint64_t cap = path_cap ? path_cap : kDefaultPathCap;
    Circuit run = c->c.all_gates_real() ? c->c : Circuit();
    bool realified = false;
    if (run.m == 0) {
      run = realify(c->c);
      realified = true;
    }
    const TraceCountReport rep = reconstruct(run, a, b, r, exact_rational != 0, 1, cap);
    json j = json::parse(trace_count_report_to_json(rep, -1));
    j["realified"] = realified;
    *out_json = dup_string(j.dump(2) + "\n");
  });
}

doslab_status doslab_end_to_end_report(int n, int d, int t_pad, double eps, uint64_t seed,
                                       uint64_t path_cap, char** out_json) {
  if (require(out_json != nullptr, "null argument")) return DOSLAB_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const uint64_t cap = path_cap ? path_cap : kDefaultPathCap;
    const double a = 1.0 - eps;
    const double b = eps;
    const PlantedInstance planted = plant_verifier(n, d, t_pad, eps, seed);

    const VerifierInstance vi = VerifierInstance::make(omega(planted.circuit), a, b);
    const CountReport count = accepting_dimension(vi);

    const ClockHamiltonian clock = compile_clock(planted.circuit, FinalVariant::projector, a, b);
    const GroundSpaceReport ground = analyze_ground_space(clock, d);

    // the trace reduction runs on the unpadded instance: identity padding
    // leaves Omega unchanged but blows up the path space
    const Circuit base = plant_verifier(n, d, 0, eps, seed).circuit;
    const int r = std::max(2, n + 2);
    const TraceCountReport trace = reconstruct(realify(base), a, b, r, false, 1, cap);

    const bool agree = count.dim_accept == d && ground.degeneracy == d &&
                       trace.dim_estimate && *trace.dim_estimate == d && trace.within_quarter;
    json j{{"n", n},
           {"d", d},
           {"t_pad", t_pad},
           {"eps", eps},
           {"seed", seed},
           {"dim_from_omega", count.dim_accept},
           {"dim_from_clock", ground.degeneracy},
           {"dim_from_trace", trace.dim_estimate ? json(*trace.dim_estimate) : json(nullptr)},
           {"clock", json::parse(ground_space_report_to_json(ground, -1))},
           {"trace", json::parse(trace_count_report_to_json(trace, -1))},
           {"agree", agree}};
    *out_json = dup_string(j.dump(2) + "\n");
    if (!agree) throw Error(ErrorKind::assertion, "counting chain disagrees");
  });
}

}  // extern "C"
