#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpscap/mps_model.hpp"

namespace mpscap {

inline constexpr double kDefaultPruneTol = 1e-14;
inline constexpr double kDefaultGroupTol = 1e-9;

/// Symbol string x_1..x_n. Each char holds one symbol value in 1..d (not a
/// printable digit); use format_word for display.
using Word = std::string;

Word make_word(std::span<const int> symbols);
std::vector<int> word_symbols(const Word& w);
/// "1213" for d <= 9, dot-separated ("10.2.7") otherwise.
std::string format_word(const Word& w, int local_dim);

struct DiagItem {
  Word word;
  double probability = 0.0;
};

/// Classical distribution p(x_1..x_n) = Tr(A_xn^dag..A_x1^dag rho A_x1..A_xn)
/// over the strings whose probability exceeds prune_tol, sorted by string.
struct DiagDistribution {
  int n = 0;
  int local_dim = 0;
  double prune_tol = kDefaultPruneTol;
  std::vector<DiagItem> items;
  /// Mass of cut subtrees plus dropped sub-threshold leaves. Exactly zero for
  /// AKLT and MG at the default tolerance.
  double pruned_mass = 0.0;

  double total_probability() const;
  std::vector<double> probabilities() const;
};

double string_probability(const MpsModel& model, std::span<const int> symbols);

/// Depth-first enumeration carrying the partial matrix. A subtree is cut as
/// soon as its partial matrix has max-abs entry <= prune_tol. `workers`
/// threads explore disjoint prefix subtrees; the result does not depend on
/// the worker count.
DiagDistribution enumerate_distribution(const MpsModel& model, int n,
                                        double prune_tol = kDefaultPruneTol, int workers = 1);

/// Every one of the d^n strings (zeros included), each evaluated from
/// scratch with string_probability. Reference for the pruned walk.
DiagDistribution enumerate_exhaustive(const MpsModel& model, int n);

/// Shannon entropy in bits, 0 log 0 = 0.
double shannon_entropy(std::span<const double> probabilities);
double shannon_entropy(const DiagDistribution& dist);

struct EntropyRow {
  int n = 0;
  double entropy = 0.0;    // H_n, bits
  double rate_avg = 0.0;   // H_n / n
  double rate_cond = 0.0;  // H_n - H_{n-1}
  double pruned_mass = 0.0;
};

struct EntropyTrace {
  std::vector<EntropyRow> rows;  // n = 1..n_max
  const EntropyRow& at(int n) const;
};

/// H_1..H_n_max from a single walk to depth n_max.
EntropyTrace entropy_trace(const MpsModel& model, int n_max, double prune_tol = kDefaultPruneTol,
                           int workers = 1);

struct SpectrumEntry {
  std::string family;
  double value = 0.0;
  std::uint64_t multiplicity = 0;
};

/// (value, multiplicity) pairs. Closed-form spectra keep each analytic family
/// as its own entry, so equal values may repeat; spectrum_of groups them.
struct Spectrum {
  std::vector<SpectrumEntry> entries;

  std::uint64_t total_multiplicity() const;
  double total_mass() const;
  /// Every value repeated by its multiplicity, descending.
  std::vector<double> expanded() const;
};

/// Groups probabilities equal within relative `group_tol`, values descending.
Spectrum spectrum_of(const DiagDistribution& dist, double group_tol = kDefaultGroupTol);
Spectrum group_values(std::vector<double> values, double group_tol = kDefaultGroupTol,
                      const std::string& family = "enumerated");

/// Marginal over the first / last symbol of an (n+1)-distribution.
std::map<Word, double> marginal_drop_first(const DiagDistribution& dist);
std::map<Word, double> marginal_drop_last(const DiagDistribution& dist);
std::map<Word, double> as_map(const DiagDistribution& dist);

/// Max |a(w) - b(w)| over the union of words, missing entries read as 0.
double max_abs_difference(const std::map<Word, double>& a, const std::map<Word, double>& b);

/// Element-wise distance between two multisets of probabilities after
/// dropping values <= floor from both. Returns +inf when the counts differ.
double multiset_distance(std::vector<double> a, std::vector<double> b, double floor = 0.0);

void write_distribution_csv(std::ostream& os, const DiagDistribution& dist);
nlohmann::json distribution_to_json(const DiagDistribution& dist);
void write_entropy_trace_csv(std::ostream& os, const EntropyTrace& trace);
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum, const std::string& source,
                        bool header = true);
nlohmann::json spectrum_to_json(const Spectrum& spectrum);

/// Shortest round-trip-safe decimal form used in all CSV output.
std::string format_number(double v);

}  // namespace mpscap
