#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpscap/diag_process.hpp"
#include "mpscap/mps_model.hpp"

namespace mpscap {

/// Exact binomial coefficient; throws DomainError for n > 64.
std::uint64_t binomial(int n, int k);

/// Binary entropy of sin^2(theta), bits.
double h2(double theta);

/// Non-zero diagonal values of the AKLT local density for n sites:
/// lambda[p] = sin^2p cos^2(n-p) / 2 with multiplicity 2 C(n,p), p < n, and
/// lambda[n] = sin^2n with multiplicity 1. Exactly-zero families are dropped.
Spectrum aklt_spectrum(int n, double theta);

/// Majumdar-Ghosh diagonal values for n >= 2, split by parity of n
/// (families mu[i] for odd n; gamma[0], gamma1[i], gamma2[i], gamma[n/2]
/// for even n).
Spectrum mg_spectrum(int n, double g);

/// Odd-n multiplicity in the literal form 2 C(k, k - i), k = ceil(n/2).
std::uint64_t mg_odd_multiplicity_literal(int n, int i);

/// log2(3) - h2(theta), qubits per use.
double aklt_capacity(double theta);

/// 1 + (g/2) log2 g + ((1-g)/2) log2(1-g). Throws DomainError outside [0,1).
double mg_capacity(double g);

/// Closed-form capacity for built-in models; nullopt for custom ones.
std::optional<double> closed_form_capacity(const MpsModel& model);

/// Closed-form spectrum for built-in models; nullopt for custom ones or MG n < 2.
std::optional<Spectrum> closed_form_spectrum(const MpsModel& model, int n);

/// Counts of the Majumdar-Ghosh product classes Z, B, C(i), D, E(i), F, G(i),
/// H at string length n. Indexed families store index i at position i - 1.
struct MultiplicityTable {
  int n = 0;
  std::uint64_t z = 0, b = 0, d = 0, f = 0, h = 0;
  std::vector<std::uint64_t> c, e, g;

  std::uint64_t total() const;
  std::uint64_t c_at(int i) const;
  std::uint64_t e_at(int i) const;
  std::uint64_t g_at(int i) const;

  bool operator==(const MultiplicityTable&) const = default;
};

struct TableEntry {
  std::string family;
  int index = 0;  // 0 for the scalar families
  std::uint64_t count = 0;
};

std::vector<TableEntry> table_entries(const MultiplicityTable& t);
/// Human-readable list of entries where a and b differ (empty when equal).
std::vector<std::string> table_differences(const MultiplicityTable& a, const MultiplicityTable& b);

/// Reference n = 4 initial conditions for the recurrence:
/// z=6, b=1, c(1)=2, d=1, e(1)=1, f=1, g(1)=2, h=1. These sum to 15, not 16;
/// classify_mg_products(4) gives e(1) = 2.
MultiplicityTable reference_initial_table();

/// Iterates the class recurrences from `initial` (n = initial.n) up to n_max.
/// Element k of the result is the table for n = initial.n + k.
std::vector<MultiplicityTable> mg_multiplicity_recurrence(int n_max,
                                                          const MultiplicityTable& initial);
std::vector<MultiplicityTable> mg_multiplicity_recurrence(int n_max);

MultiplicityTable mg_multiplicity_closed_form(int n);

struct ProductClassification {
  MultiplicityTable table;
  std::uint64_t unclassified = 0;
};

/// Ground truth for the class counts: forms all 2^n products
/// O_1..O_n O_n^dag..O_1^dag and sorts each into its class by its diagonal
/// pattern. `g` must be generic (distinct class values); 0.3 by default.
ProductClassification classify_mg_products(int n, double g = 0.3);

void write_table_csv(std::ostream& os, const MultiplicityTable& t, bool header = true);
nlohmann::json table_to_json(const MultiplicityTable& t);

}  // namespace mpscap
