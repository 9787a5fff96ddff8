#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mpscap/complex_matrix.hpp"

namespace mpscap {

inline constexpr double kModelTolerance = 1e-12;

enum class ModelKind { aklt, mg, custom };

const char* to_string(ModelKind kind) noexcept;

/// Ground-state angle of the AKLT parametrisation, arccos(sqrt(2/3)).
double aklt_ground_theta();

/// Ground-state parameter of the Majumdar-Ghosh parametrisation.
inline constexpr double kMgGroundG = 0.5;

struct Residual {
  std::string name;
  double value = 0.0;
};

/// Named max-abs residuals of the purity conditions (completeness and
/// invariance) and of the invariant state's Hermiticity, trace and positivity.
struct ValidationReport {
  std::vector<Residual> residuals;
  double tolerance = kModelTolerance;

  bool passed() const;
  double value(std::string_view name) const;
  std::string describe() const;
};

ValidationReport validate_model(std::span<const ComplexMatrix> kraus, const ComplexMatrix& rho);

/// A finitely correlated (matrix product) state: d Kraus matrices of size
/// D x D and an invariant state. Immutable once built; every instance has
/// passed validate_model.
class MpsModel {
 public:
  /// Validates and builds. Throws StructuralError on shape problems and
  /// ValidationError when any residual is >= kModelTolerance.
  static MpsModel create(ModelKind kind, std::string label, std::map<std::string, double> params,
                         std::vector<ComplexMatrix> kraus, ComplexMatrix invariant_state);

  ModelKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }
  std::optional<double> param(const std::string& name) const;

  int local_dim() const noexcept { return static_cast<int>(kraus_.size()); }
  int bond_dim() const noexcept { return static_cast<int>(rho_.rows()); }
  /// Kraus operator for 1-based symbol `symbol`.
  const ComplexMatrix& kraus_for_symbol(int symbol) const;
  std::span<const ComplexMatrix> kraus() const noexcept { return kraus_; }
  const ComplexMatrix& invariant_state() const noexcept { return rho_; }

 private:
  MpsModel() = default;

  ModelKind kind_ = ModelKind::custom;
  std::string label_;
  std::map<std::string, double> params_;
  std::vector<ComplexMatrix> kraus_;
  ComplexMatrix rho_;
};

ValidationReport validate_model(const MpsModel& model);

/// d = 3, D = 2. A1 = -sin(theta) sigma_z, A2 = cos(theta)|e1><e2|,
/// A3 = -cos(theta)|e2><e1|, rho = I/2.
MpsModel aklt_model(double theta);

/// d = 2, D = 3 Majumdar-Ghosh operators with rho = diag((1-g)/2, 1/2, g/2).
/// Throws DomainError unless 0 <= g < 1.
MpsModel mg_model(double g);

/// Fixed point of rho -> sum_i A_i^dagger rho A_i, normalised to trace 1.
/// Runs the damped map rho <- (rho + T(rho)) / 2 from I/D; the plain map is
/// periodic for Majumdar-Ghosh. Uniqueness of the fixed point is not checked.
ComplexMatrix solve_invariant_state(std::span<const ComplexMatrix> kraus, double tol = 1e-12,
                                    int max_iter = 10000);

/// Builds a validated custom model; solves for rho when it is not given.
MpsModel custom_model(std::vector<ComplexMatrix> kraus, std::optional<ComplexMatrix> rho,
                      std::string label = "custom");

/// {"d": int, "D": int, "kraus": [[[re, im], ...], ...], "rho": optional}
/// Each matrix is a flat row-major list of D*D [re, im] pairs.
MpsModel model_from_json(std::string_view text);
MpsModel load_model(const std::string& path);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols);

}  // namespace mpscap
