#pragma once

#include <string>

#include "doslab/clock.hpp"
#include "doslab/linalg.hpp"
#include "doslab/local_ham.hpp"
#include "doslab/path_sum.hpp"
#include "doslab/verifier.hpp"

namespace doslab {

// Matrix JSON: {"dim": d, "entries": [[re, im], ...]} row-major.
std::string matrix_to_json(const ComplexMatrix& m, int indent = 2);
ComplexMatrix matrix_from_json(const std::string& text);

// Hamiltonian JSON: {"site_dims": [...], "terms": [{"sites": [...], "matrix": ...}]}.
std::string hamiltonian_to_json(const LocalHamiltonian& h, int indent = 2);
LocalHamiltonian hamiltonian_from_json(const std::string& text);

// VerifierInstance JSON: {"n": ..., "a": ..., "b": ..., "omega": ...}.
std::string verifier_to_json(const VerifierInstance& v, int indent = 2);
VerifierInstance verifier_from_json(const std::string& text);

std::string count_report_to_json(const CountReport& r, int indent = 2);
std::string dos_report_to_json(const DosReport& r, int indent = 2);
std::string ground_count_report_to_json(const GroundCountReport& r, int indent = 2);
std::string ground_space_report_to_json(const GroundSpaceReport& r, int indent = 2);
std::string swap_bound_report_to_json(const SwapBoundReport& r, int indent = 2);
std::string principal_angle_report_to_json(const PrincipalAngleReport& r,
                                           const ProjectorBoundReport& b, int indent = 2);
std::string trace_count_report_to_json(const TraceCountReport& r, int indent = 2);
std::string shift_result_to_json(const ShiftResult& s, double a, double b, int indent = 2);

// histogram CSV: header then one "bin_left,bin_right,count" row per bin
std::string histogram_to_csv(const DosReport& r);

}  // namespace doslab
