#include "doslab/json_io.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace doslab {

using nlohmann::json;

namespace {

json matrix_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      entries.push_back({m.at(i, j).real(), m.at(i, j).imag()});
  return json{{"dim", m.dim()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw Error(ErrorKind::parse, "matrix JSON requires 'dim' and 'entries'");
  const int dim = j.at("dim").get<int>();
  const json& entries = j.at("entries");
  if (dim < 1 || !entries.is_array() || entries.size() != static_cast<size_t>(dim) * dim)
    throw Error(ErrorKind::parse, "matrix entries do not match dim^2");
  CVec a(entries.size());
  for (size_t i = 0; i < a.size(); ++i) {
    const json& e = entries[i];
    if (!e.is_array() || e.size() != 2)
      throw Error(ErrorKind::parse, "matrix entry must be an [re, im] pair");
    a[i] = cplx(e[0].get<double>(), e[1].get<double>());
  }
  return ComplexMatrix(dim, std::move(a));
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::parse, "malformed JSON");
  return j;
}

std::string dump(const json& j, int indent) { return j.dump(indent) + "\n"; }

json optional_double(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m, int indent) {
  return dump(matrix_json(m), indent);
}

ComplexMatrix matrix_from_json(const std::string& text) { return matrix_from(parse_text(text)); }

std::string hamiltonian_to_json(const LocalHamiltonian& h, int indent) {
  json terms = json::array();
  for (const LocalTerm& t : h.terms)
    terms.push_back(json{{"sites", t.sites}, {"matrix", matrix_json(t.matrix)}});
  return dump(json{{"site_dims", h.site_dims}, {"terms", std::move(terms)}}, indent);
}

LocalHamiltonian hamiltonian_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object() || !j.contains("site_dims") || !j.contains("terms"))
    throw Error(ErrorKind::parse, "Hamiltonian JSON requires 'site_dims' and 'terms'");
  LocalHamiltonian h;
  h.site_dims = j.at("site_dims").get<std::vector<int>>();
  for (const json& t : j.at("terms")) {
    if (!t.is_object() || !t.contains("sites") || !t.contains("matrix"))
      throw Error(ErrorKind::parse, "term JSON requires 'sites' and 'matrix'");
    h.terms.push_back(LocalTerm{t.at("sites").get<std::vector<int>>(),
                                matrix_from(t.at("matrix"))});
  }
  h.validate();
  return h;
}

std::string verifier_to_json(const VerifierInstance& v, int indent) {
  return dump(json{{"n", v.n >= 0 ? json(v.n) : json(nullptr)},
                   {"a", v.a},
                   {"b", v.b},
                   {"omega", matrix_json(v.omega)}},
              indent);
}

VerifierInstance verifier_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object() || !j.contains("a") || !j.contains("b") || !j.contains("omega"))
    throw Error(ErrorKind::parse, "verifier JSON requires 'a', 'b' and 'omega'");
  return VerifierInstance::make(matrix_from(j.at("omega")), j.at("a").get<double>(),
                                j.at("b").get<double>());
}

std::string count_report_to_json(const CountReport& r, int indent) {
  return dump(json{{"dim_accept", r.dim_accept},
                   {"lambda_at", optional_double(r.lambda_at)},
                   {"lambda_after", optional_double(r.lambda_after)},
                   {"promise_ok", r.promise_ok},
                   {"offending_eigenvalue", optional_double(r.offending_eigenvalue)},
                   {"count_min", r.count_min},
                   {"count_max", r.count_max}},
              indent);
}

std::string dos_report_to_json(const DosReport& r, int indent) {
  return dump(json{{"count", r.count},
                   {"count_range", {r.count_min, r.count_max}},
                   {"grace_violations", r.grace_violations},
                   {"strict_ok", r.strict_ok},
                   {"histogram", json{{"bin_edges", r.histogram_edges},
                                      {"counts", r.histogram_counts}}}},
              indent);
}

std::string ground_count_report_to_json(const GroundCountReport& r, int indent) {
  return dump(json{{"count", r.count}, {"count_via_dos", r.count_via_dos}, {"agree", r.agree}},
              indent);
}

std::string ground_space_report_to_json(const GroundSpaceReport& r, int indent) {
  return dump(json{{"degeneracy", r.degeneracy},
                   {"splitting", r.splitting},
                   {"gap", optional_double(r.gap)},
                   {"gap_bound", r.gap_bound},
                   {"cutoff", r.cutoff},
                   {"gap_ok", r.gap_ok},
                   {"expected_dim", r.expected_dim},
                   {"matches_expected", r.matches_expected}},
              indent);
}

std::string swap_bound_report_to_json(const SwapBoundReport& r, int indent) {
  return dump(json{{"min_eig_diff", r.min_eig_diff},
                   {"sqrt_eps", r.sqrt_eps},
                   {"holds", r.holds},
                   {"chi_max", r.chi_max},
                   {"chi_ok", r.chi_ok}},
              indent);
}

std::string principal_angle_report_to_json(const PrincipalAngleReport& r,
                                           const ProjectorBoundReport& b, int indent) {
  return dump(json{{"blocks", json{{"n00", r.n00}, {"n01", r.n01}, {"n10", r.n10}, {"n11", r.n11}}},
                   {"angles", r.angles},
                   {"epsilon", b.epsilon},
                   {"sqrt_epsilon", b.sqrt_epsilon},
                   {"min_eig", b.min_eig},
                   {"bound_holds", b.holds}},
              indent);
}

std::string trace_count_report_to_json(const TraceCountReport& r, int indent) {
  json dim = r.dim_estimate ? json(*r.dim_estimate) : json(nullptr);
  return dump(json{{"trace_direct", r.trace_direct},
                   {"trace_pathsum", r.trace_pathsum},
                   {"zeta_bits", r.zeta_bits},
                   {"model_count", r.model_count.to_string()},
                   {"num_paths", r.num_paths},
                   {"estimate", r.estimate},
                   {"within_quarter", r.within_quarter},
                   {"promise_ok", r.promise_ok},
                   {"dim_estimate", std::move(dim)},
                   {"a", r.a},
                   {"b", r.b},
                   {"r", r.r},
                   {"exact_rational", r.exact_rational},
                   {"rounding_exact", r.rounding_exact}},
              indent);
}

std::string shift_result_to_json(const ShiftResult& s, double a, double b, int indent) {
  return dump(json{{"nu", s.nu},
                   {"a_neg", s.a_neg},
                   {"b_pos", s.b_pos},
                   {"m_terms", s.m_terms},
                   {"e1", s.e1},
                   {"e2", s.e2},
                   {"delta", s.delta},
                   {"a", a},
                   {"b", b}},
              indent);
}

std::string histogram_to_csv(const DosReport& r) {
  std::ostringstream os;
  os << "bin_left,bin_right,count\n";
  char buf[80];
  for (size_t i = 0; i < r.histogram_counts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%lld\n", r.histogram_edges[i],
                  r.histogram_edges[i + 1], static_cast<long long>(r.histogram_counts[i]));
    os << buf;
  }
  return os.str();
}

}  // namespace doslab
