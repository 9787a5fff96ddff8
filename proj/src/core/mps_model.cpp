#include "mpscap/mps_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mpscap/errors.hpp"

namespace mpscap {

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::aklt: return "aklt";
    case ModelKind::mg: return "mg";
    case ModelKind::custom: return "custom";
  }
  return "custom";
}

double aklt_ground_theta() { return std::acos(std::sqrt(2.0 / 3.0)); }

bool ValidationReport::passed() const {
  return std::all_of(residuals.begin(), residuals.end(),
                     [&](const Residual& r) { return r.value < tolerance; });
}

double ValidationReport::value(std::string_view name) const {
  for (const auto& r : residuals)
    if (r.name == name) return r.value;
  throw DomainError("no residual named " + std::string(name));
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  os.precision(3);
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (i) os << ", ";
    os << residuals[i].name << '=' << residuals[i].value;
  }
  return os.str();
}

namespace {

void check_shapes(std::span<const ComplexMatrix> kraus, const ComplexMatrix& rho) {
  if (kraus.empty()) throw StructuralError("model needs at least one Kraus operator");
  const std::size_t dim = kraus.front().rows();
  if (dim == 0) throw StructuralError("Kraus operators must be non-empty");
  for (std::size_t i = 0; i < kraus.size(); ++i) {
    if (kraus[i].rows() != dim || kraus[i].cols() != dim) {
      throw StructuralError("Kraus operator " + std::to_string(i + 1) + " is " +
                            std::to_string(kraus[i].rows()) + "x" +
                            std::to_string(kraus[i].cols()) + ", expected " +
                            std::to_string(dim) + "x" + std::to_string(dim));
    }
  }
  if (rho.rows() != dim || rho.cols() != dim) {
    throw StructuralError("invariant state is " + std::to_string(rho.rows()) + "x" +
                          std::to_string(rho.cols()) + ", expected " + std::to_string(dim) +
                          "x" + std::to_string(dim));
  }
}

ComplexMatrix transfer(std::span<const ComplexMatrix> kraus, const ComplexMatrix& rho) {
  ComplexMatrix out(rho.rows(), rho.cols());
  for (const auto& a : kraus) out += congruence(a, rho);
  return out;
}

}  // namespace

ValidationReport validate_model(std::span<const ComplexMatrix> kraus, const ComplexMatrix& rho) {
  check_shapes(kraus, rho);
  const std::size_t dim = rho.rows();

  ComplexMatrix completeness(dim, dim);
  for (const auto& a : kraus) completeness += conjugate_by(a, ComplexMatrix::identity(dim));

  ValidationReport report;
  report.residuals.push_back(
      {"completeness", max_abs_diff(completeness, ComplexMatrix::identity(dim))});
  report.residuals.push_back({"invariance", max_abs_diff(transfer(kraus, rho), rho)});
  report.residuals.push_back({"hermiticity", hermiticity_residual(rho)});
  report.residuals.push_back({"trace", std::abs(rho.trace() - Complex(1.0))});
  const auto ev = hermitian_eigenvalues(rho);
  report.residuals.push_back({"positivity", std::max(0.0, -ev.front())});
  return report;
}

ValidationReport validate_model(const MpsModel& model) {
  return validate_model(model.kraus(), model.invariant_state());
}

MpsModel MpsModel::create(ModelKind kind, std::string label, std::map<std::string, double> params,
                          std::vector<ComplexMatrix> kraus, ComplexMatrix invariant_state) {
  const auto report = validate_model(kraus, invariant_state);
  if (!report.passed()) {
    throw ValidationError("model '" + label + "' fails validation: " + report.describe());
  }
  MpsModel m;
  m.kind_ = kind;
  m.label_ = std::move(label);
  m.params_ = std::move(params);
  m.kraus_ = std::move(kraus);
  m.rho_ = std::move(invariant_state);
  return m;
}

std::optional<double> MpsModel::param(const std::string& name) const {
  const auto it = params_.find(name);
  if (it == params_.end()) return std::nullopt;
  return it->second;
}

const ComplexMatrix& MpsModel::kraus_for_symbol(int symbol) const {
  if (symbol < 1 || symbol > local_dim()) {
    throw DomainError("symbol " + std::to_string(symbol) + " outside 1.." +
                      std::to_string(local_dim()));
  }
  return kraus_[static_cast<std::size_t>(symbol - 1)];
}

MpsModel aklt_model(double theta) {
  if (!std::isfinite(theta)) throw DomainError("aklt_model: theta must be finite");
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  std::vector<ComplexMatrix> kraus;
  kraus.push_back(ComplexMatrix::from_rows({{-s, 0.0}, {0.0, s}}));
  kraus.push_back(ComplexMatrix::from_rows({{0.0, c}, {0.0, 0.0}}));
  kraus.push_back(ComplexMatrix::from_rows({{0.0, 0.0}, {-c, 0.0}}));
  return MpsModel::create(ModelKind::aklt, "aklt", {{"theta", theta}}, std::move(kraus),
                          ComplexMatrix::diagonal({0.5, 0.5}));
}

MpsModel mg_model(double g) {
  if (!(g >= 0.0 && g < 1.0)) {
    throw DomainError("mg_model: g must lie in [0, 1), got " + std::to_string(g));
  }
  const double sg = std::sqrt(g);
  const double sh = std::sqrt(1.0 - g);
  std::vector<ComplexMatrix> kraus;
  kraus.push_back(ComplexMatrix::from_rows({{0.0, 1.0, 0.0}, {0.0, 0.0, -sg}, {0.0, 0.0, 0.0}}));
  kraus.push_back(ComplexMatrix::from_rows({{0.0, 0.0, 0.0}, {sh, 0.0, 0.0}, {0.0, 1.0, 0.0}}));
  return MpsModel::create(ModelKind::mg, "mg", {{"g", g}}, std::move(kraus),
                          ComplexMatrix::diagonal({(1.0 - g) / 2.0, 0.5, g / 2.0}));
}

ComplexMatrix solve_invariant_state(std::span<const ComplexMatrix> kraus, double tol,
                                    int max_iter) {
  if (kraus.empty()) throw StructuralError("solve_invariant_state: empty Kraus list");
  const std::size_t dim = kraus.front().rows();
  ComplexMatrix rho = ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim));
  check_shapes(kraus, rho);

  ComplexMatrix completeness(dim, dim);
  for (const auto& a : kraus) completeness += conjugate_by(a, ComplexMatrix::identity(dim));
  const double completeness_residual = max_abs_diff(completeness, ComplexMatrix::identity(dim));
  if (completeness_residual > 1e-10) {
    throw DomainError("solve_invariant_state: sum A A^dagger deviates from identity by " +
                      std::to_string(completeness_residual));
  }

  double residual = max_abs_diff(transfer(kraus, rho), rho);
  for (int it = 0; it < max_iter && residual >= tol; ++it) {
    ComplexMatrix next = transfer(kraus, rho);
    next += rho;
    const Complex tr = next.trace();
    if (std::abs(tr) == 0.0) throw ConvergenceError("solve_invariant_state: trace vanished", residual);
    next *= Complex(1.0) / tr;
    // Symmetrise so roundoff cannot accumulate an anti-Hermitian part.
    rho = (next + next.adjoint()) * Complex(0.5);
    residual = max_abs_diff(transfer(kraus, rho), rho);
  }
  if (residual >= tol) {
    throw ConvergenceError("solve_invariant_state: no convergence after " +
                               std::to_string(max_iter) + " iterations",
                           residual);
  }
  return rho;
}

MpsModel custom_model(std::vector<ComplexMatrix> kraus, std::optional<ComplexMatrix> rho,
                      std::string label) {
  ComplexMatrix state = rho ? std::move(*rho) : solve_invariant_state(kraus);
  return MpsModel::create(ModelKind::custom, std::move(label), {}, std::move(kraus),
                          std::move(state));
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& z : m.entries()) out.push_back({z.real(), z.imag()});
  return out;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array()) throw ParseError("matrix must be an array of [re, im] pairs");
  if (j.size() != rows * cols) {
    throw StructuralError("matrix has " + std::to_string(j.size()) + " entries, expected " +
                          std::to_string(rows * cols));
  }
  std::vector<Complex> entries;
  entries.reserve(j.size());
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ParseError("matrix entry must be a [re, im] pair of numbers");
    }
    entries.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

MpsModel model_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model JSON must be an object");
  for (const char* key : {"d", "D", "kraus"}) {
    if (!doc.contains(key)) throw ParseError(std::string("model JSON missing \"") + key + "\"");
  }
  if (!doc["d"].is_number_integer() || !doc["D"].is_number_integer()) {
    throw ParseError("model JSON: \"d\" and \"D\" must be integers");
  }
  const auto d = doc["d"].get<long long>();
  const auto bond = doc["D"].get<long long>();
  if (d < 1 || bond < 1) throw DomainError("model JSON: d and D must be positive");
  if (d > 255) throw DomainError("model JSON: local dimension above 255 is not supported");
  const auto& kraus_json = doc["kraus"];
  if (!kraus_json.is_array() || kraus_json.size() != static_cast<std::size_t>(d)) {
    throw StructuralError("model JSON: \"kraus\" must list exactly d matrices");
  }
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : kraus_json) {
    kraus.push_back(matrix_from_json(k, static_cast<std::size_t>(bond),
                                     static_cast<std::size_t>(bond)));
  }
  std::optional<ComplexMatrix> rho;
  if (doc.contains("rho") && !doc["rho"].is_null()) {
    rho = matrix_from_json(doc["rho"], static_cast<std::size_t>(bond),
                           static_cast<std::size_t>(bond));
  }
  std::string label = doc.value("label", std::string("custom"));
  return custom_model(std::move(kraus), std::move(rho), std::move(label));
}

MpsModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace mpscap
