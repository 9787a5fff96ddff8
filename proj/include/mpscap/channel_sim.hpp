#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpscap/complex_matrix.hpp"
#include "mpscap/diag_process.hpp"
#include "mpscap/mps_model.hpp"

namespace mpscap {

/// Largest system dimension the finite-n channel code will build.
inline constexpr std::size_t kMaxChannelDim = 1024;
/// Budget for the dense Kraus operators of one channel.
inline constexpr double kMaxChannelBytes = 512.0 * 1024 * 1024;

struct KrausChannel {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<ComplexMatrix> kraus;
  /// Environment string behind each Kraus operator (dephasing channels only).
  std::vector<Word> labels;

  /// max-abs of sum_k V_k^dagger V_k - I.
  double trace_preservation_residual() const;
};

/// Hermitian, unit-trace, PSD (eigenvalue floor -1e-10) matrix.
class DensityMatrix {
 public:
  /// Throws DomainError if the invariants do not hold.
  static DensityMatrix create(ComplexMatrix m, double trace_tol = 1e-12);
  static DensityMatrix maximally_mixed(std::size_t dim);
  /// |psi><psi| for a (not necessarily normalised) vector.
  static DensityMatrix pure(std::span<const Complex> psi);

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Z(k) = sum_j exp(i 2 pi k j / d) |j><j|, k in 0..d-1.
ComplexMatrix phase_gate(int d, int k);

/// sum_k |k><k| (x) Z(k) on environment (x) system, d^2 x d^2.
ComplexMatrix controlled_phase_unitary(int d);

/// One Kraus operator sqrt(p(x)) Z(x_1 - 1) (x) ... (x) Z(x_N - 1) per
/// string x of the environment distribution. Symbol s maps to phase index s-1.
KrausChannel dephasing_channel(const DiagDistribution& env, std::size_t max_dim = kMaxChannelDim);

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho);

/// K x K matrix [Tr(V_j^dagger rho V_k)] (environment output).
DensityMatrix complementary_output(const KrausChannel& ch, const DensityMatrix& rho);

/// Entropy in bits; eigenvalues below 1e-14 count as zero.
double von_neumann_entropy(const ComplexMatrix& rho);
double von_neumann_entropy(const DensityMatrix& rho);

/// Local density matrix of n sites, entries Tr(A_s^dagger rho A_t) with
/// A_t = A_t1 ... A_tn. Dimension d^n.
ComplexMatrix local_density(const MpsModel& model, int n);

/// Output of the n-use memory channel built literally: the environment in
/// its full local density matrix, one controlled-phase gate per
/// (environment site, system site) pair, environment traced out.
DensityMatrix stinespring_output(const MpsModel& model, int n, const DensityMatrix& sigma);

struct CapacityEstimate {
  std::string model;
  std::optional<double> param;
  int n = 0;
  int local_dim = 0;
  double entropy = 0.0;           // H_n of the environment diagonal
  double estimate_avg = 0.0;      // log2 d - H_n / n
  double estimate_cond = 0.0;     // log2 d - (H_n - H_{n-1})
  std::optional<double> closed_form;
  // Coherent-information route, only for small n.
  bool channel_checked = false;
  std::size_t kraus_count = 0;
  double tp_residual = 0.0;
  double output_entropy = 0.0;         // S(Phi(I/d^n))
  double complementary_entropy = 0.0;  // S(Phi~(I/d^n))
  double channel_estimate = 0.0;       // coherent information / n
  double path_gap = 0.0;               // |channel_estimate - estimate_avg|
};

/// Capacity estimate from the environment entropy at length n; for
/// n <= channel_check_max_n also evaluates the coherent information of the
/// explicit channel at the maximally mixed input.
CapacityEstimate capacity_estimate(const MpsModel& model, int n,
                                   double prune_tol = kDefaultPruneTol,
                                   int channel_check_max_n = 4, int workers = 1);

/// {"dim": k, "data": [[re, im], ...]} row-major.
nlohmann::json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

}  // namespace mpscap
