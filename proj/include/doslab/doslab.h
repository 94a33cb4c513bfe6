/* C API for the doslab core: opaque handles, status codes, JSON reports.
 * All functions returning doslab_status set the thread-local message
 * retrievable through doslab_last_error() on failure. Strings returned
 * through char** are heap-allocated; release them with doslab_string_free.
 * Handles are released with the matching *_free function. */

#ifndef DOSLAB_DOSLAB_H
#define DOSLAB_DOSLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum doslab_status {
  DOSLAB_OK = 0,
  DOSLAB_ERR_PARSE = 1,
  DOSLAB_ERR_INVALID_ARGUMENT = 2,
  DOSLAB_ERR_PROMISE_VIOLATION = 3,
  DOSLAB_ERR_CAPACITY = 4,
  DOSLAB_ERR_ASSERTION = 5,
  DOSLAB_ERR_INTERNAL = 6,
} doslab_status;

typedef struct doslab_circuit doslab_circuit;
typedef struct doslab_matrix doslab_matrix;
typedef struct doslab_hamiltonian doslab_hamiltonian;

const char* doslab_version(void);
const char* doslab_last_error(void);
void doslab_string_free(char* s);

/* circuits (text format documented in the README) */
doslab_status doslab_circuit_parse(const char* text, doslab_circuit** out);
doslab_status doslab_circuit_serialize(const doslab_circuit* c, char** out_text);
doslab_status doslab_circuit_info(const doslab_circuit* c, char** out_json); /* {m,n,t,real} */
doslab_status doslab_circuit_plant(int n, int d, int t_pad, double eps, uint64_t seed,
                                   doslab_circuit** out);
doslab_status doslab_circuit_realify(const doslab_circuit* c, doslab_circuit** out);
void doslab_circuit_free(doslab_circuit* c);

/* dense matrices, JSON {"dim":..., "entries":[[re,im],...]} */
doslab_status doslab_matrix_from_json(const char* text, doslab_matrix** out);
doslab_status doslab_matrix_to_json(const doslab_matrix* m, char** out_text);
void doslab_matrix_free(doslab_matrix* m);

/* verifier operator of a circuit */
doslab_status doslab_omega(const doslab_circuit* c, doslab_matrix** out);
/* spectrum, accepting dimension and promise diagnostics at thresholds (a,b);
 * grace != 0 tolerates promise violations and reports the count range */
doslab_status doslab_omega_report(const doslab_circuit* c, double a, double b, int grace,
                                  char** out_json);

/* principal angles and the projector-pair difference bound */
doslab_status doslab_verify_bound_report(const doslab_matrix* p, const doslab_matrix* q,
                                         char** out_json);

/* local Hamiltonians, JSON {"site_dims":[...], "terms":[...]} */
doslab_status doslab_hamiltonian_from_json(const char* text, doslab_hamiltonian** out);
doslab_status doslab_hamiltonian_to_json(const doslab_hamiltonian* h, char** out_text);
void doslab_hamiltonian_free(doslab_hamiltonian* h);

/* clock compilation; variant is "projector" or "standard" */
doslab_status doslab_compile_clock(const doslab_circuit* c, const char* variant, double a,
                                   double b, doslab_hamiltonian** out_ham, char** out_report_json);

/* ground-degeneracy count with the DOS-reduction cross-check */
doslab_status doslab_degeneracy_report(const doslab_hamiltonian* h, double e0, double e1,
                                       double e2, char** out_json);

/* DOS count; histogram CSV is returned separately when out_csv is non-null */
doslab_status doslab_dos_report(const doslab_hamiltonian* h, double e1, double e2, double delta,
                                int grace, char** out_json, char** out_csv);

/* quadratic shift H' = nu (H^2 - (e1+e2) H + e1 e2) plus thresholds */
doslab_status doslab_shift(const doslab_hamiltonian* h, double e1, double e2, double delta,
                           char** out_hprime_json, char** out_report_json);

/* path-integral trace reduction; path_cap = 0 uses the built-in default */
doslab_status doslab_trace_count_report(const doslab_circuit* c, double a, double b, int r,
                                        int exact_rational, uint64_t path_cap, char** out_json);

/* plant -> omega count -> clock degeneracy -> trace reduction, asserting the
 * counts agree; DOSLAB_ERR_ASSERTION when they do not */
doslab_status doslab_end_to_end_report(int n, int d, int t_pad, double eps, uint64_t seed,
                                       uint64_t path_cap, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DOSLAB_DOSLAB_H */
