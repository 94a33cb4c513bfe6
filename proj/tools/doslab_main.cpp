// doslab command line: reproducible counting experiments with JSON/CSV reports.
// Links only the extern-C shared library. Exit codes: 0 success, 1 assertion
// or promise failure, 2 input error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "doslab/doslab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitInput = 2;

int exit_code_for(doslab_status s) {
  switch (s) {
    case DOSLAB_OK:
      return kExitOk;
    case DOSLAB_ERR_PROMISE_VIOLATION:
    case DOSLAB_ERR_ASSERTION:
      return kExitAssert;
    default:
      return kExitInput;
  }
}

int fail(doslab_status s) {
  std::cerr << "error: " << doslab_last_error() << "\n";
  return exit_code_for(s);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << content;
  return true;
}

// report goes to the --out file when given, stdout otherwise
int emit(const std::string& out_path, char* text) {
  std::string s(text);
  doslab_string_free(text);
  if (out_path.empty()) {
    std::cout << s;
    return kExitOk;
  }
  return write_file(out_path, s) ? kExitOk : kExitInput;
}

uint64_t path_cap_from_env() {
  const char* env = std::getenv("DOSLAB_PATH_CAP");
  if (!env || !*env) return 0;  // library default
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) {
    std::cerr << "warning: ignoring malformed DOSLAB_PATH_CAP='" << env << "'\n";
    return 0;
  }
  return v;
}

struct CircuitHandle {
  doslab_circuit* c = nullptr;
  ~CircuitHandle() { doslab_circuit_free(c); }
};
struct MatrixHandle {
  doslab_matrix* m = nullptr;
  ~MatrixHandle() { doslab_matrix_free(m); }
};
struct HamHandle {
  doslab_hamiltonian* h = nullptr;
  ~HamHandle() { doslab_hamiltonian_free(h); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doslab: verifier counting, clock compilation, density of states, path sums"};
  app.require_subcommand(1);

  // omega <circuit> --a --b [--grace] [--out]
  std::string omega_circuit, omega_out;
  double omega_a = 2.0 / 3.0, omega_b = 1.0 / 3.0;
  bool omega_grace = false;
  auto* cmd_omega = app.add_subcommand("omega", "spectrum and accepting dimension of a circuit");
  cmd_omega->add_option("circuit", omega_circuit, "circuit file")->required();
  cmd_omega->add_option("--a", omega_a, "acceptance threshold");
  cmd_omega->add_option("--b", omega_b, "rejection threshold");
  cmd_omega->add_flag("--grace", omega_grace, "report a count range instead of failing on promise violations");
  cmd_omega->add_option("--out", omega_out, "report file (stdout otherwise)");

  // plant --n --d [--t] [--eps] [--seed] --out
  int plant_n = 1, plant_d = 0, plant_t = 0;
  double plant_eps = 0.0;
  uint64_t plant_seed = 1;
  std::string plant_out;
  auto* cmd_plant = app.add_subcommand("plant", "generate a planted verifier circuit");
  cmd_plant->add_option("--n", plant_n, "input qubits")->required();
  cmd_plant->add_option("--d", plant_d, "accepting dimension")->required();
  cmd_plant->add_option("--t", plant_t, "identity padding gates");
  cmd_plant->add_option("--eps", plant_eps, "planted rejection probability, in [0, 1/4)");
  cmd_plant->add_option("--seed", plant_seed, "generator seed");
  cmd_plant->add_option("--out", plant_out, "circuit file")->required();

  // compile <circuit> --final projector|standard --a --b --out [--report]
  std::string compile_circuit, compile_final = "standard", compile_out, compile_report;
  double compile_a = 1.0, compile_b = 0.0;
  auto* cmd_compile = app.add_subcommand("compile", "compile a circuit into a clock Hamiltonian");
  cmd_compile->add_option("circuit", compile_circuit, "circuit file")->required();
  cmd_compile->add_option("--final", compile_final, "final-term variant: projector|standard");
  cmd_compile->add_option("--a", compile_a, "acceptance threshold");
  cmd_compile->add_option("--b", compile_b, "rejection threshold");
  cmd_compile->add_option("--out", compile_out, "Hamiltonian JSON file")->required();
  cmd_compile->add_option("--report", compile_report, "compilation report file");

  // degeneracy --ham --e0 --e1 --e2 [--out]
  std::string deg_ham, deg_out;
  double deg_e0 = 0.0, deg_e1 = 0.0, deg_e2 = 0.0;
  auto* cmd_deg = app.add_subcommand("degeneracy", "low-energy eigenspace dimension");
  cmd_deg->add_option("--ham", deg_ham, "Hamiltonian JSON file")->required();
  cmd_deg->add_option("--e0", deg_e0, "spectral floor")->required();
  cmd_deg->add_option("--e1", deg_e1, "top of the low-energy window")->required();
  cmd_deg->add_option("--e2", deg_e2, "bottom of the gap")->required();
  cmd_deg->add_option("--out", deg_out, "report file");

  // dos --ham --e1 --e2 --delta [--grace] [--out] [--hist]
  std::string dos_ham, dos_out, dos_hist;
  double dos_e1 = 0.0, dos_e2 = 0.0, dos_delta = 0.0;
  bool dos_grace = false;
  auto* cmd_dos = app.add_subcommand("dos", "count eigenstates in an energy window");
  cmd_dos->add_option("--ham", dos_ham, "Hamiltonian JSON file")->required();
  cmd_dos->add_option("--e1", dos_e1, "window lower edge")->required();
  cmd_dos->add_option("--e2", dos_e2, "window upper edge")->required();
  cmd_dos->add_option("--delta", dos_delta, "grace width")->required();
  cmd_dos->add_flag("--grace", dos_grace, "tolerate eigenvalues in the grace intervals");
  cmd_dos->add_option("--out", dos_out, "report file");
  cmd_dos->add_option("--hist", dos_hist, "histogram CSV file");

  // shift --ham --e1 --e2 --delta --out [--report]
  std::string shift_ham, shift_out, shift_report;
  double shift_e1 = 0.0, shift_e2 = 0.0, shift_delta = 0.0;
  auto* cmd_shift = app.add_subcommand("shift", "quadratic spectral shift H'");
  cmd_shift->add_option("--ham", shift_ham, "Hamiltonian JSON file")->required();
  cmd_shift->add_option("--e1", shift_e1, "window lower edge")->required();
  cmd_shift->add_option("--e2", shift_e2, "window upper edge")->required();
  cmd_shift->add_option("--delta", shift_delta, "grace width")->required();
  cmd_shift->add_option("--out", shift_out, "H' JSON file")->required();
  cmd_shift->add_option("--report", shift_report, "thresholds report file");

  // trace-count <circuit> [--a --b --r] [--exact-rational] [--out]
  std::string tc_circuit, tc_out;
  double tc_a = 1.0, tc_b = 0.0;
  int tc_r = 4;
  bool tc_exact = false;
  auto* cmd_tc = app.add_subcommand("trace-count", "path-integral trace and model count");
  cmd_tc->add_option("circuit", tc_circuit, "circuit file")->required();
  cmd_tc->add_option("--a", tc_a, "acceptance threshold");
  cmd_tc->add_option("--b", tc_b, "rejection threshold");
  cmd_tc->add_option("--r", tc_r, "amplification exponent for the dimension estimate");
  cmd_tc->add_flag("--exact-rational", tc_exact,
                   "exact dyadic-rational shadow computation (dyadic gates only)");
  cmd_tc->add_option("--out", tc_out, "report file");

  // verify-bound --p --q [--out]
  std::string vb_p, vb_q, vb_out;
  auto* cmd_vb = app.add_subcommand("verify-bound", "principal angles and projector-pair bound");
  cmd_vb->add_option("--p", vb_p, "projector P matrix JSON")->required();
  cmd_vb->add_option("--q", vb_q, "projector Q matrix JSON")->required();
  cmd_vb->add_option("--out", vb_out, "report file");

  // end-to-end --n --d [--t] [--eps] [--seed] [--out]
  int e2e_n = 1, e2e_d = 0, e2e_t = 0;
  double e2e_eps = 0.0;
  uint64_t e2e_seed = 1;
  std::string e2e_out;
  auto* cmd_e2e = app.add_subcommand("end-to-end",
                                     "plant, compile, count and trace-count; assert agreement");
  cmd_e2e->add_option("--n", e2e_n, "input qubits")->required();
  cmd_e2e->add_option("--d", e2e_d, "accepting dimension")->required();
  cmd_e2e->add_option("--t", e2e_t, "identity padding gates");
  cmd_e2e->add_option("--eps", e2e_eps, "planted rejection probability");
  cmd_e2e->add_option("--seed", e2e_seed, "generator seed");
  cmd_e2e->add_option("--out", e2e_out, "report file");

  CLI11_PARSE(app, argc, argv);
  const uint64_t cap = path_cap_from_env();

  try {
    if (cmd_omega->parsed()) {
      CircuitHandle c;
      doslab_status s = doslab_circuit_parse(read_file(omega_circuit).c_str(), &c.c);
      if (s) return fail(s);
      char* rep = nullptr;
      s = doslab_omega_report(c.c, omega_a, omega_b, omega_grace ? 1 : 0, &rep);
      if (s) return fail(s);
      return emit(omega_out, rep);
    }

    if (cmd_plant->parsed()) {
      CircuitHandle c;
      doslab_status s = doslab_circuit_plant(plant_n, plant_d, plant_t, plant_eps, plant_seed, &c.c);
      if (s) return fail(s);
      char* text = nullptr;
      s = doslab_circuit_serialize(c.c, &text);
      if (s) return fail(s);
      return emit(plant_out, text);
    }

    if (cmd_compile->parsed()) {
      CircuitHandle c;
      doslab_status s = doslab_circuit_parse(read_file(compile_circuit).c_str(), &c.c);
      if (s) return fail(s);
      HamHandle h;
      char* rep = nullptr;
      s = doslab_compile_clock(c.c, compile_final.c_str(), compile_a, compile_b, &h.h,
                               compile_report.empty() ? nullptr : &rep);
      if (s) return fail(s);
      char* ham_json = nullptr;
      s = doslab_hamiltonian_to_json(h.h, &ham_json);
      if (s) return fail(s);
      const int rc = emit(compile_out, ham_json);
      if (rc) return rc;
      if (rep) return emit(compile_report, rep);
      return kExitOk;
    }

    if (cmd_deg->parsed()) {
      HamHandle h;
      doslab_status s = doslab_hamiltonian_from_json(read_file(deg_ham).c_str(), &h.h);
      if (s) return fail(s);
      char* rep = nullptr;
      s = doslab_degeneracy_report(h.h, deg_e0, deg_e1, deg_e2, &rep);
      if (s) return fail(s);
      return emit(deg_out, rep);
    }

    if (cmd_dos->parsed()) {
      HamHandle h;
      doslab_status s = doslab_hamiltonian_from_json(read_file(dos_ham).c_str(), &h.h);
      if (s) return fail(s);
      char* rep = nullptr;
      char* csv = nullptr;
      s = doslab_dos_report(h.h, dos_e1, dos_e2, dos_delta, dos_grace ? 1 : 0, &rep,
                            dos_hist.empty() ? nullptr : &csv);
      // the report is produced even when strict mode flags violations
      int rc = kExitOk;
      if (rep) rc = emit(dos_out, rep);
      if (!rc && csv) rc = emit(dos_hist, csv);
      if (s) {
        std::cerr << "error: " << doslab_last_error() << "\n";
        return exit_code_for(s);
      }
      return rc;
    }

    if (cmd_shift->parsed()) {
      HamHandle h;
      doslab_status s = doslab_hamiltonian_from_json(read_file(shift_ham).c_str(), &h.h);
      if (s) return fail(s);
      char* hp = nullptr;
      char* rep = nullptr;
      s = doslab_shift(h.h, shift_e1, shift_e2, shift_delta, &hp,
                       shift_report.empty() ? nullptr : &rep);
      if (s) return fail(s);
      const int rc = emit(shift_out, hp);
      if (rc) return rc;
      if (rep) return emit(shift_report, rep);
      return kExitOk;
    }

    if (cmd_tc->parsed()) {
      CircuitHandle c;
      doslab_status s = doslab_circuit_parse(read_file(tc_circuit).c_str(), &c.c);
      if (s) return fail(s);
      char* rep = nullptr;
      s = doslab_trace_count_report(c.c, tc_a, tc_b, tc_r, tc_exact ? 1 : 0, cap, &rep);
      if (s) return fail(s);
      return emit(tc_out, rep);
    }

    if (cmd_vb->parsed()) {
      MatrixHandle p, q;
      doslab_status s = doslab_matrix_from_json(read_file(vb_p).c_str(), &p.m);
      if (s) return fail(s);
      s = doslab_matrix_from_json(read_file(vb_q).c_str(), &q.m);
      if (s) return fail(s);
      char* rep = nullptr;
      s = doslab_verify_bound_report(p.m, q.m, &rep);
      if (s) return fail(s);
      return emit(vb_out, rep);
    }

    if (cmd_e2e->parsed()) {
      char* rep = nullptr;
      const doslab_status s =
          doslab_end_to_end_report(e2e_n, e2e_d, e2e_t, e2e_eps, e2e_seed, cap, &rep);
      int rc = kExitOk;
      if (rep) rc = emit(e2e_out, rep);
      if (s) {
        std::cerr << "error: " << doslab_last_error() << "\n";
        return exit_code_for(s);
      }
      return rc;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
