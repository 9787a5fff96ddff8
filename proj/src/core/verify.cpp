#include "mpscap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mpscap/channel_sim.hpp"
#include "mpscap/closed_form.hpp"
#include "mpscap/errors.hpp"

namespace mpscap {

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

std::vector<double> verify_theta_grid() {
  return {0.0, 0.3, 0.7, aklt_ground_theta(), 1.2, std::numbers::pi / 2};
}

std::vector<double> verify_g_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 9; ++i) g.push_back(0.1 * i);
  return g;
}

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Tracks the worst case of one check across a parameter sweep.
struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& at) {
    if (!(v <= value)) {  // also catches NaN
      value = v;
      where = at;
    }
  }
  std::string describe() const { return "worst " + sci(value) + (where.empty() ? "" : " at " + where); }
};

struct Subject {
  std::string tag;
  MpsModel model;
};

class Suite {
 public:
  Suite(const VerifyOptions& opts, const std::function<void(const CheckResult&)>& cb)
      : opts_(opts), cb_(cb) {}

  template <class Fn>
  void run(const std::string& module, const std::string& name, Fn&& fn) {
    CheckResult r{module, name, false, {}};
    try {
      auto [ok, detail] = fn();
      r.passed = ok;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (cb_) cb_(r);
    report_.checks.push_back(std::move(r));
  }

  VerificationReport take() { return std::move(report_); }
  const VerifyOptions& opts() const { return opts_; }

 private:
  const VerifyOptions& opts_;
  const std::function<void(const CheckResult&)>& cb_;
  VerificationReport report_;
};

using Outcome = std::pair<bool, std::string>;

std::string tag_for(const MpsModel& m) {
  std::ostringstream os;
  os << m.label();
  for (const auto& [k, v] : m.params()) os << ' ' << k << '=' << v;
  return os.str();
}

void mps_core_checks(Suite& s) {
  const auto& o = s.opts();
  if (o.aklt) {
    s.run("mps_core", "aklt residuals over theta grid", [&]() -> Outcome {
      Worst w;
      for (int i = 0; i <= 15; ++i) {
        const auto rep = validate_model(aklt_model(0.1 * i));
        for (const auto& r : rep.residuals) w.update(r.value, "theta=" + std::to_string(0.1 * i));
      }
      for (double t : verify_theta_grid())
        for (const auto& r : validate_model(aklt_model(t)).residuals) w.update(r.value, "theta=" + std::to_string(t));
      return {w.value < kModelTolerance, w.describe()};
    });
    s.run("mps_core", "aklt nilpotency and A1 A1^dag = sin^2 I", [&]() -> Outcome {
      Worst w;
      bool exact = true;
      for (double t : verify_theta_grid()) {
        const auto m = aklt_model(t);
        const auto& a1 = m.kraus_for_symbol(1);
        const auto& a2 = m.kraus_for_symbol(2);
        const auto& a3 = m.kraus_for_symbol(3);
        exact = exact && (a2 * a2).max_abs() == 0.0 && (a3 * a3).max_abs() == 0.0;
        const double s2 = std::sin(t) * std::sin(t);
        w.update(max_abs_diff(a1 * a1.adjoint(), ComplexMatrix::identity(2) * Complex(s2)),
                 "theta=" + std::to_string(t));
      }
      return {exact && w.value < 1e-15, std::string(exact ? "A2^2 = A3^2 = 0 exactly; " : "nilpotency broken; ") + w.describe()};
    });
  }
  if (o.mg) {
    s.run("mps_core", "mg residuals over g grid", [&]() -> Outcome {
      Worst w;
      for (int i = 0; i <= 19; ++i) {
        const double g = 0.05 * i;
        for (const auto& r : validate_model(mg_model(g)).residuals) w.update(r.value, "g=" + std::to_string(g));
      }
      return {w.value < kModelTolerance, w.describe()};
    });
    s.run("mps_core", "mg operators nilpotent of index 3", [&]() -> Outcome {
      bool ok = true;
      for (double g : verify_g_grid()) {
        const auto m = mg_model(g);
        for (const auto& a : m.kraus()) ok = ok && (a * a * a).max_abs() == 0.0;
      }
      return {ok, ok ? "A^3 = 0 exactly on the grid" : "A^3 != 0"};
    });
  }
  if (o.aklt || o.mg) {
    s.run("mps_core", "invariant-state solver reproduces analytic states", [&]() -> Outcome {
      Worst w;
      if (o.aklt)
        for (double t : {0.3, 1.0, aklt_ground_theta()}) {
          const auto m = aklt_model(t);
          w.update(max_abs_diff(solve_invariant_state(m.kraus()), m.invariant_state()), "aklt theta=" + std::to_string(t));
        }
      if (o.mg)
        for (double g : verify_g_grid()) {
          const auto m = mg_model(g);
          w.update(max_abs_diff(solve_invariant_state(m.kraus()), m.invariant_state()), "mg g=" + std::to_string(g));
        }
      return {w.value < 1e-10, w.describe()};
    });
  }
  if (o.custom) {
    s.run("mps_core", "custom model residuals", [&]() -> Outcome {
      const auto rep = validate_model(*o.custom);
      return {rep.passed(), rep.describe()};
    });
  }
}

void diag_process_checks(Suite& s, const std::vector<Subject>& subjects) {
  const auto& o = s.opts();
  const int n_norm = std::min(o.n_max, 12);
  const int n_small = std::min(o.n_max, 8);

  s.run("diag_process", "normalisation for n <= " + std::to_string(n_norm), [&]() -> Outcome {
    Worst w;
    for (const auto& sub : subjects)
      for (int n = 1; n <= n_norm; ++n) {
        const auto dist = enumerate_distribution(sub.model, n, o.prune_tol, o.workers);
        w.update(std::abs(dist.total_probability() - 1.0), sub.tag + " n=" + std::to_string(n));
      }
    return {w.value <= 1e-10, w.describe()};
  });

  s.run("diag_process", "pruned walk equals exhaustive scan for n <= " + std::to_string(n_small), [&]() -> Outcome {
    Worst w;
    for (const auto& sub : subjects)
      for (int n = 1; n <= n_small; ++n) {
        const auto pruned = enumerate_distribution(sub.model, n, o.prune_tol, o.workers);
        const auto full = enumerate_exhaustive(sub.model, n);
        w.update(max_abs_difference(as_map(pruned), as_map(full)), sub.tag + " n=" + std::to_string(n));
      }
    return {w.value <= 1e-12, w.describe()};
  });

  s.run("diag_process", "stationarity of marginals for n <= " + std::to_string(n_small), [&]() -> Outcome {
    Worst w;
    for (const auto& sub : subjects) {
      auto prev = enumerate_distribution(sub.model, 1, o.prune_tol, o.workers);
      for (int n = 1; n <= n_small; ++n) {
        const auto next = enumerate_distribution(sub.model, n + 1, o.prune_tol, o.workers);
        const auto base = as_map(prev);
        const std::string at = sub.tag + " n=" + std::to_string(n);
        w.update(max_abs_difference(marginal_drop_first(next), base), at + " (first)");
        w.update(max_abs_difference(marginal_drop_last(next), base), at + " (last)");
        prev = next;
      }
    }
    return {w.value <= 1e-10, w.describe()};
  });

  s.run("diag_process", "chain rule: H_n nondecreasing, H_n - H_{n-1} nonincreasing", [&]() -> Outcome {
    Worst w;
    for (const auto& sub : subjects) {
      const auto trace = entropy_trace(sub.model, o.n_max, o.prune_tol, o.workers);
      for (std::size_t i = 1; i < trace.rows.size(); ++i) {
        const auto& a = trace.rows[i - 1];
        const auto& b = trace.rows[i];
        const std::string at = sub.tag + " n=" + std::to_string(b.n);
        w.update(a.entropy - b.entropy - 1e-12, at + " (monotone)");
        w.update(b.rate_cond - a.rate_cond - 1e-9, at + " (conditional)");
      }
    }
    return {w.value <= 0.0, "max violation " + w.describe()};
  });

  if (o.aklt) {
    s.run("diag_process", "aklt {2,3} symbols alternate on the support", [&]() -> Outcome {
      std::size_t bad = 0, seen = 0;
      for (double t : verify_theta_grid()) {
        const auto m = aklt_model(t);
        for (int n = 2; n <= n_small; ++n)
          for (const auto& it : enumerate_distribution(m, n, o.prune_tol, o.workers).items) {
            ++seen;
            char last = 0;
            for (char c : it.word) {
              if (c == 1) continue;
              if (c == last) {
                ++bad;
                break;
              }
              last = c;
            }
          }
      }
      return {bad == 0, std::to_string(seen) + " strings, " + std::to_string(bad) + " violations"};
    });
  }
}

void closed_form_checks(Suite& s) {
  const auto& o = s.opts();
  const int n_small = std::min(o.n_max, 8);
  if (o.aklt) {
    s.run("closed_form", "aklt spectrum equals enumeration for n <= " + std::to_string(n_small), [&]() -> Outcome {
      Worst w;
      for (double t : verify_theta_grid())
        for (int n = 1; n <= n_small; ++n) {
          const auto dist = enumerate_distribution(aklt_model(t), n, o.prune_tol, o.workers);
          w.update(multiset_distance(aklt_spectrum(n, t).expanded(), dist.probabilities(), o.prune_tol),
                   "theta=" + std::to_string(t) + " n=" + std::to_string(n));
        }
      return {w.value <= 1e-12, w.describe()};
    });
    s.run("closed_form", "aklt entropy within 1 bit of n h2 (sin^2 <= 1/2, n <= 20)", [&]() -> Outcome {
      Worst w;
      for (double t : verify_theta_grid()) {
        if (std::sin(t) * std::sin(t) > 0.5) continue;
        for (int n = 1; n <= 20; ++n) {
          const double sn = shannon_entropy(aklt_spectrum(n, t).expanded());
          w.update(std::abs(sn - n * h2(t)), "theta=" + std::to_string(t) + " n=" + std::to_string(n));
        }
      }
      return {w.value <= 1.0 + 1e-9, w.describe()};
    });
  }
  if (o.mg) {
    s.run("closed_form", "mg spectrum equals enumeration for 2 <= n <= " + std::to_string(std::max(n_small, 2)), [&]() -> Outcome {
      Worst w;
      for (double g : verify_g_grid())
        for (int n = 2; n <= std::max(n_small, 2); ++n) {
          const auto dist = enumerate_distribution(mg_model(g), n, o.prune_tol, o.workers);
          w.update(multiset_distance(mg_spectrum(n, g).expanded(), dist.probabilities(), o.prune_tol),
                   "g=" + std::to_string(g) + " n=" + std::to_string(n));
        }
      return {w.value <= 1e-12, w.describe()};
    });
  }
  if (o.aklt || o.mg) {
    s.run("closed_form", "spectra sum to 1 for n <= 20", [&]() -> Outcome {
      Worst w;
      if (o.aklt)
        for (double t : verify_theta_grid())
          for (int n = 1; n <= 20; ++n)
            w.update(std::abs(aklt_spectrum(n, t).total_mass() - 1.0), "aklt theta=" + std::to_string(t) + " n=" + std::to_string(n));
      if (o.mg)
        for (double g : verify_g_grid())
          for (int n = 2; n <= 20; ++n)
            w.update(std::abs(mg_spectrum(n, g).total_mass() - 1.0), "mg g=" + std::to_string(g) + " n=" + std::to_string(n));
      return {w.value <= 1e-12, w.describe()};
    });
  }
  if (o.mg) {
    s.run("closed_form", "n = 4 class counts by enumeration", [&]() -> Outcome {
      const auto cl = classify_mg_products(4);
      const auto reference = reference_initial_table();
      const auto diffs = table_differences(reference, cl.table);
      std::string detail = "enumerated total " + std::to_string(cl.table.total()) + ", reference total " +
                           std::to_string(reference.total());
      for (const auto& d : diffs) detail += "; reference vs enumerated " + d;
      const bool ok = cl.unclassified == 0 && cl.table.total() == 16 && cl.table == mg_multiplicity_closed_form(4);
      return {ok, detail};
    });
    s.run("closed_form", "recurrence equals closed form for 5 <= n <= 20", [&]() -> Outcome {
      const auto tables = mg_multiplicity_recurrence(20, classify_mg_products(4).table);
      std::size_t mismatches = 0;
      std::string first;
      for (const auto& t : tables) {
        if (t.n < 5) continue;
        const auto diffs = table_differences(t, mg_multiplicity_closed_form(t.n));
        if (!diffs.empty() && first.empty()) first = diffs.front();
        mismatches += diffs.size();
      }
      return {mismatches == 0, mismatches == 0 ? "from the enumerated n = 4 table" : std::to_string(mismatches) + " mismatches, first " + first};
    });
    s.run("closed_form", "live strings = 2^n - z_n for n <= " + std::to_string(std::min(o.n_max, 12)), [&]() -> Outcome {
      std::string bad;
      for (double g : verify_g_grid()) {
        if (g == 0.0) continue;
        for (int n = 4; n <= std::min(o.n_max, 12); ++n) {
          const auto live = enumerate_distribution(mg_model(g), n, o.prune_tol, o.workers).items.size();
          const auto expected = (std::uint64_t{1} << n) - mg_multiplicity_closed_form(n).z;
          if (live != expected && bad.empty())
            bad = "g=" + std::to_string(g) + " n=" + std::to_string(n) + ": " + std::to_string(live) + " vs " + std::to_string(expected);
        }
      }
      return {bad.empty(), bad.empty() ? "all match" : bad};
    });
  }
}

void capacity_checks(Suite& s, const std::vector<Subject>& subjects) {
  const auto& o = s.opts();
  s.run("closed_form", "capacity estimates bracket the closed form at n = " + std::to_string(o.n_max), [&]() -> Outcome {
    Worst avg_gap;
    Worst cond_excess;
    bool any = false;
    for (const auto& sub : subjects) {
      const auto cf = closed_form_capacity(sub.model);
      if (!cf) continue;
      any = true;
      const auto trace = entropy_trace(sub.model, o.n_max, o.prune_tol, o.workers);
      const double log_d = std::log2(static_cast<double>(sub.model.local_dim()));
      for (const auto& r : trace.rows) {
        const std::string at = sub.tag + " n=" + std::to_string(r.n);
        avg_gap.update(std::abs(log_d - r.rate_avg - *cf) * r.n, at);
        cond_excess.update(log_d - r.rate_cond - *cf, at);
      }
    }
    if (!any) return {true, "no closed form for this model"};
    return {avg_gap.value <= 1.5 && cond_excess.value <= 1e-9,
            "n*|avg gap| " + avg_gap.describe() + "; conditional excess " + cond_excess.describe()};
  });
}

void channel_checks(Suite& s, const std::vector<Subject>& subjects) {
  const auto& o = s.opts();
  const int n_ch = std::min(o.n_max, 4);
  s.run("channel_sim", "dephasing channels are trace preserving for n <= " + std::to_string(n_ch), [&]() -> Outcome {
    Worst w;
    for (const auto& sub : subjects)
      for (int n = 1; n <= n_ch; ++n) {
        const auto ch = dephasing_channel(enumerate_distribution(sub.model, n, o.prune_tol, o.workers));
        w.update(ch.trace_preservation_residual(), sub.tag + " n=" + std::to_string(n));
      }
    return {w.value <= 1e-10, w.describe()};
  });
  s.run("channel_sim", "environment entropy equals complementary entropy for n <= " + std::to_string(n_ch), [&]() -> Outcome {
    Worst gap;
    Worst offdiag;
    for (const auto& sub : subjects)
      for (int n = 1; n <= n_ch; ++n) {
        const auto dist = enumerate_distribution(sub.model, n, o.prune_tol, o.workers);
        const auto ch = dephasing_channel(dist);
        const auto comp = complementary_output(ch, DensityMatrix::maximally_mixed(ch.in_dim));
        const std::string at = sub.tag + " n=" + std::to_string(n);
        gap.update(std::abs(von_neumann_entropy(comp) - shannon_entropy(dist)), at);
        double off = 0.0;
        for (std::size_t i = 0; i < comp.dim(); ++i)
          for (std::size_t j = 0; j < comp.dim(); ++j)
            if (i != j) off = std::max(off, std::abs(comp.matrix()(i, j)));
        offdiag.update(off, at);
      }
    return {gap.value <= 1e-9 && offdiag.value <= 1e-10,
            "entropy " + gap.describe() + "; off-diagonal " + offdiag.describe()};
  });
  s.run("channel_sim", "coherent information matches entropy route for n <= " + std::to_string(n_ch), [&]() -> Outcome {
    Worst w;
    for (const auto& sub : subjects)
      for (int n = 1; n <= n_ch; ++n) {
        const auto est = capacity_estimate(sub.model, n, o.prune_tol, 4, o.workers);
        w.update(est.path_gap, sub.tag + " n=" + std::to_string(n));
      }
    return {w.value <= 1e-9, w.describe()};
  });
  s.run("channel_sim", "von Neumann entropy helper", [&]() -> Outcome {
    Worst w;
    for (std::size_t d : {2u, 3u, 4u, 9u})
      w.update(std::abs(von_neumann_entropy(DensityMatrix::maximally_mixed(d)) - std::log2(static_cast<double>(d))),
               "I/" + std::to_string(d));
    for (const auto& sub : subjects) {
      const auto dist = enumerate_distribution(sub.model, std::min(2, o.n_max), o.prune_tol, o.workers);
      const auto ch = dephasing_channel(dist);
      std::vector<Complex> diag;
      const double norm = static_cast<double>(ch.in_dim * (ch.in_dim + 1) / 2);
      for (std::size_t i = 0; i < ch.in_dim; ++i) diag.emplace_back(static_cast<double>(i + 1) / norm);
      const auto m = ComplexMatrix::diagonal(diag);
      const auto in = DensityMatrix::create(m);
      const auto out = apply_channel(ch, in);
      w.update(max_abs_diff(out.matrix(), in.matrix()), sub.tag + " diagonal input");
      w.update(std::abs(von_neumann_entropy(out) - von_neumann_entropy(in)), sub.tag + " entropy");
    }
    return {w.value <= 1e-12, w.describe()};
  });
  s.run("channel_sim", "controlled-phase dilation equals dephasing Kraus form", [&]() -> Outcome {
    Worst w;
    std::mt19937_64 rng(20240607);
    std::normal_distribution<double> normal;
    for (const auto& sub : subjects) {
      const int d = sub.model.local_dim();
      if (d < 2) continue;
      for (int n = 1; n <= std::min(o.n_max, 3); ++n) {
        std::size_t dim2 = 1;
        for (int i = 0; i < 2 * n; ++i) dim2 *= static_cast<std::size_t>(d);
        if (dim2 > kMaxChannelDim) break;
        const std::size_t dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(dim2))));
        std::vector<Complex> psi(dim);
        for (auto& a : psi) a = {normal(rng), normal(rng)};
        const auto sigma = DensityMatrix::pure(psi);
        const auto literal = stinespring_output(sub.model, n, sigma);
        const auto kraus = apply_channel(dephasing_channel(enumerate_distribution(sub.model, n, o.prune_tol, o.workers)), sigma);
        w.update(max_abs_diff(literal.matrix(), kraus.matrix()), sub.tag + " n=" + std::to_string(n));
      }
    }
    return {w.value <= 1e-10, w.describe()};
  });
}

}  // namespace

VerificationReport run_verification(const VerifyOptions& options,
                                    const std::function<void(const CheckResult&)>& on_check) {
  if (options.n_max < 2) throw DomainError("verification needs n_max >= 2");
  Suite suite(options, on_check);

  std::vector<Subject> subjects;
  if (options.aklt)
    for (double t : verify_theta_grid()) {
      auto m = aklt_model(t);
      subjects.push_back({tag_for(m), std::move(m)});
    }
  if (options.mg)
    for (double g : verify_g_grid()) {
      auto m = mg_model(g);
      subjects.push_back({tag_for(m), std::move(m)});
    }
  if (options.custom) subjects.push_back({tag_for(*options.custom), *options.custom});

  mps_core_checks(suite);
  diag_process_checks(suite, subjects);
  closed_form_checks(suite);
  capacity_checks(suite, subjects);
  channel_checks(suite, subjects);
  return suite.take();
}

}  // namespace mpscap
