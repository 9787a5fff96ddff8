#include "mpscap/channel_sim.hpp"

#include <cmath>
#include <numbers>

#include "mpscap/closed_form.hpp"
#include "mpscap/errors.hpp"

namespace mpscap {

namespace {

std::size_t checked_power(int base, int exponent, std::size_t limit, const char* what) {
  std::size_t v = 1;
  for (int i = 0; i < exponent; ++i) {
    v *= static_cast<std::size_t>(base);
    if (v > limit) {
      throw ResourceError(std::string(what) + ": dimension " + std::to_string(base) + "^" +
                          std::to_string(exponent) + " exceeds " + std::to_string(limit));
    }
  }
  return v;
}

// u m u^dagger for a sparse (here diagonal) u without a dense m * u^dagger.
ComplexMatrix conjugate_sparse(const ComplexMatrix& u, const ComplexMatrix& m) {
  return (u * (u * m).adjoint()).adjoint();
}

}  // namespace

double KrausChannel::trace_preservation_residual() const {
  ComplexMatrix sum(in_dim, in_dim);
  for (const auto& v : kraus) sum += v.adjoint() * v;
  return max_abs_diff(sum, ComplexMatrix::identity(in_dim));
}

DensityMatrix DensityMatrix::create(ComplexMatrix m, double trace_tol) {
  if (!m.is_square() || m.rows() == 0) {
    throw StructuralError("density matrix must be square and non-empty");
  }
  const double herm = hermiticity_residual(m);
  if (herm > 1e-12) {
    throw DomainError("density matrix not Hermitian (residual " + std::to_string(herm) + ")");
  }
  const double tr = std::abs(m.trace() - Complex(1.0));
  if (tr > trace_tol) {
    throw DomainError("density matrix trace deviates from 1 by " + std::to_string(tr));
  }
  const auto ev = hermitian_eigenvalues(m);
  if (ev.front() < -1e-10) {
    throw DomainError("density matrix has eigenvalue " + std::to_string(ev.front()));
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw DomainError("dimension must be positive");
  return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  double norm2 = 0.0;
  for (const auto& a : psi) norm2 += std::norm(a);
  if (norm2 == 0.0) throw DomainError("zero state vector");
  ComplexMatrix m(psi.size(), psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) m(i, j) = psi[i] * std::conj(psi[j]) / norm2;
  return DensityMatrix(std::move(m));
}

ComplexMatrix phase_gate(int d, int k) {
  if (d < 1) throw DomainError("phase_gate: d must be positive");
  if (k < 0 || k >= d) {
    throw DomainError("phase_gate: k = " + std::to_string(k) + " outside 0.." + std::to_string(d - 1));
  }
  ComplexMatrix z(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    // Reduce k*j mod d first so the exact roots 1 and -1 come out exactly.
    const int r = (k * j) % d;
    const double angle = 2.0 * std::numbers::pi * r / d;
    Complex w = std::polar(1.0, angle);
    if (2 * r == d) w = -1.0;
    if (r == 0) w = 1.0;
    z(static_cast<std::size_t>(j), static_cast<std::size_t>(j)) = w;
  }
  return z;
}

ComplexMatrix controlled_phase_unitary(int d) {
  if (d < 2) throw DomainError("controlled_phase_unitary: d must be >= 2");
  const auto dd = static_cast<std::size_t>(d);
  ComplexMatrix u(dd * dd, dd * dd);
  for (int k = 0; k < d; ++k) {
    const auto z = phase_gate(d, k);
    for (std::size_t j = 0; j < dd; ++j)
      u(static_cast<std::size_t>(k) * dd + j, static_cast<std::size_t>(k) * dd + j) = z(j, j);
  }
  return u;
}

KrausChannel dephasing_channel(const DiagDistribution& env, std::size_t max_dim) {
  const std::size_t dim = checked_power(env.local_dim, env.n, max_dim, "dephasing_channel");
  const double bytes = static_cast<double>(env.items.size()) * static_cast<double>(dim) *
                       static_cast<double>(dim) * sizeof(Complex);
  if (bytes > kMaxChannelBytes) {
    throw ResourceError("dephasing_channel: " + std::to_string(env.items.size()) + " dense Kraus operators of dimension " +
                        std::to_string(dim) + " exceed the memory budget");
  }
  KrausChannel ch;
  ch.in_dim = ch.out_dim = dim;
  std::vector<ComplexMatrix> gates;
  for (int k = 0; k < env.local_dim; ++k) gates.push_back(phase_gate(env.local_dim, k));
  for (const auto& item : env.items) {
    ComplexMatrix v = ComplexMatrix::identity(1);
    for (char c : item.word) v = kron(v, gates[static_cast<std::size_t>(static_cast<unsigned char>(c) - 1)]);
    v *= Complex(std::sqrt(item.probability));
    ch.kraus.push_back(std::move(v));
    ch.labels.push_back(item.word);
  }
  return ch;
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.in_dim) {
    throw StructuralError("apply_channel: state dimension " + std::to_string(rho.dim()) +
                          " vs channel input " + std::to_string(ch.in_dim));
  }
  ComplexMatrix out(ch.out_dim, ch.out_dim);
  for (const auto& v : ch.kraus) out += conjugate_by(v, rho.matrix());
  return DensityMatrix::create(std::move(out));
}

DensityMatrix complementary_output(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.in_dim) {
    throw StructuralError("complementary_output: state dimension " + std::to_string(rho.dim()) +
                          " vs channel input " + std::to_string(ch.in_dim));
  }
  const std::size_t k = ch.kraus.size();
  std::vector<ComplexMatrix> rv;
  rv.reserve(k);
  for (const auto& v : ch.kraus) rv.push_back(rho.matrix() * v);
  ComplexMatrix out(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    const auto va = ch.kraus[a].entries();
    for (std::size_t b = 0; b < k; ++b) {
      const auto wb = rv[b].entries();
      Complex s = 0.0;
      for (std::size_t i = 0; i < va.size(); ++i) s += std::conj(va[i]) * wb[i];
      out(a, b) = s;
    }
  }
  return DensityMatrix::create(std::move(out), 1e-10);
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues(rho))
    if (lambda > 1e-14) s -= lambda * std::log2(lambda);
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

ComplexMatrix local_density(const MpsModel& model, int n) {
  if (n < 1) throw DomainError("local_density: n must be >= 1");
  const int d = model.local_dim();
  const std::size_t dim = checked_power(d, n, kMaxChannelDim, "local_density");
  // products[s] = A_s1 A_s2 ... A_sn, s read as base-d digits, site 1 most significant
  std::vector<ComplexMatrix> products{ComplexMatrix::identity(static_cast<std::size_t>(model.bond_dim()))};
  for (int site = 0; site < n; ++site) {
    std::vector<ComplexMatrix> next;
    next.reserve(products.size() * static_cast<std::size_t>(d));
    for (const auto& p : products)
      for (const auto& a : model.kraus()) next.push_back(p * a);
    products = std::move(next);
  }
  std::vector<ComplexMatrix> left;
  left.reserve(dim);
  for (const auto& p : products) left.push_back(p.adjoint() * model.invariant_state());
  ComplexMatrix out(dim, dim);
  for (std::size_t s = 0; s < dim; ++s)
    for (std::size_t t = 0; t < dim; ++t) out(s, t) = (left[s] * products[t]).trace();
  return out;
}

DensityMatrix stinespring_output(const MpsModel& model, int n, const DensityMatrix& sigma) {
  const int d = model.local_dim();
  if (d < 2) throw DomainError("stinespring_output: local dimension must be >= 2");
  const std::size_t site_dim = checked_power(d, n, kMaxChannelDim, "stinespring_output");
  const std::size_t total = checked_power(d, 2 * n, kMaxChannelDim, "stinespring_output");
  if (sigma.dim() != site_dim) {
    throw StructuralError("stinespring_output: input dimension " + std::to_string(sigma.dim()) +
                          " vs " + std::to_string(site_dim));
  }
  // Register layout: env_1 .. env_n sys_1 .. sys_n, first factor most significant.
  ComplexMatrix state = kron(local_density(model, n), sigma.matrix());
  const auto gate = controlled_phase_unitary(d);
  const auto dd = static_cast<std::size_t>(d);
  std::vector<std::size_t> place(static_cast<std::size_t>(2 * n));
  for (std::size_t i = 0; i < place.size(); ++i) place[i] = 1;
  for (int i = 2 * n - 2; i >= 0; --i)
    place[static_cast<std::size_t>(i)] = place[static_cast<std::size_t>(i) + 1] * dd;

  for (int site = 0; site < n; ++site) {
    const std::size_t pe = place[static_cast<std::size_t>(site)];
    const std::size_t ps = place[static_cast<std::size_t>(n + site)];
    ComplexMatrix u(total, total);
    for (std::size_t col = 0; col < total; ++col) {
      const std::size_t e = (col / pe) % dd;
      const std::size_t x = (col / ps) % dd;
      const std::size_t base = col - e * pe - x * ps;
      for (std::size_t a = 0; a < dd; ++a)
        for (std::size_t b = 0; b < dd; ++b) {
          const Complex amp = gate(a * dd + b, e * dd + x);
          if (amp != Complex{}) u(base + a * pe + b * ps, col) = amp;
        }
    }
    state = conjugate_sparse(u, state);
  }

  ComplexMatrix out(site_dim, site_dim);
  for (std::size_t e = 0; e < site_dim; ++e)
    for (std::size_t i = 0; i < site_dim; ++i)
      for (std::size_t j = 0; j < site_dim; ++j) out(i, j) += state(e * site_dim + i, e * site_dim + j);
  return DensityMatrix::create(std::move(out), 1e-10);
}

CapacityEstimate capacity_estimate(const MpsModel& model, int n, double prune_tol,
                                   int channel_check_max_n, int workers) {
  if (n < 1) throw DomainError("capacity_estimate: n must be >= 1");
  const auto trace = entropy_trace(model, n, prune_tol, workers);
  const auto& row = trace.at(n);
  const double log_d = std::log2(static_cast<double>(model.local_dim()));

  CapacityEstimate est;
  est.model = model.label();
  if (model.kind() == ModelKind::aklt) est.param = model.param("theta");
  if (model.kind() == ModelKind::mg) est.param = model.param("g");
  est.n = n;
  est.local_dim = model.local_dim();
  est.entropy = row.entropy;
  est.estimate_avg = log_d - row.rate_avg;
  est.estimate_cond = log_d - row.rate_cond;
  est.closed_form = closed_form_capacity(model);

  if (n <= channel_check_max_n) {
    const auto dist = enumerate_distribution(model, n, prune_tol, workers);
    const auto ch = dephasing_channel(dist);
    const auto input = DensityMatrix::maximally_mixed(ch.in_dim);
    est.channel_checked = true;
    est.kraus_count = ch.kraus.size();
    est.tp_residual = ch.trace_preservation_residual();
    est.output_entropy = von_neumann_entropy(apply_channel(ch, input));
    est.complementary_entropy = von_neumann_entropy(complementary_output(ch, input));
    est.channel_estimate = (est.output_entropy - est.complementary_entropy) / n;
    est.path_gap = std::abs(est.channel_estimate - est.estimate_avg);
  }
  return est;
}

nlohmann::json density_to_json(const DensityMatrix& rho) {
  return {{"dim", rho.dim()}, {"data", matrix_to_json(rho.matrix())}};
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("data")) {
    throw ParseError("density matrix JSON needs \"dim\" and \"data\"");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw ParseError("density matrix \"dim\" must be a positive integer");
  }
  const auto dim = static_cast<std::size_t>(j["dim"].get<long long>());
  return DensityMatrix::create(matrix_from_json(j["data"], dim, dim));
}

}  // namespace mpscap
