#include "mpscap/diag_process.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "mpscap/errors.hpp"

namespace mpscap {

namespace {

// Prefix depth at which the walk is split into independent subtrees. Fixed,
// so the summation order (and therefore every output bit) is the same for
// any worker count.
constexpr int kSplitDepth = 3;

double clamp_probability(double p) { return (p < 0.0 && p >= -1e-14) ? 0.0 : p; }

double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

struct Workspace {
  Workspace(std::size_t dim, int n) : levels(static_cast<std::size_t>(n) + 1, ComplexMatrix(dim, dim)), scratch(dim, dim) {}
  std::vector<ComplexMatrix> levels;
  ComplexMatrix scratch;
};

struct Tally {
  explicit Tally(int n)
      : entropy(static_cast<std::size_t>(n) + 1, 0.0),
        cut_from(static_cast<std::size_t>(n) + 2, 0.0) {}
  std::vector<double> entropy;   // by depth
  std::vector<double> cut_from;  // mass missing from this depth on
  std::vector<DiagItem> items;   // leaves at depth n
};

struct Prefix {
  Word word;
  ComplexMatrix partial;
};

struct WalkParams {
  std::span<const ComplexMatrix> kraus;
  int n = 0;
  int stop = 0;
  double tol = 0.0;
  bool collect = false;
};

// Explores the children of the node `word` whose partial matrix is `node`.
template <class Frontier>
void walk(const WalkParams& p, const ComplexMatrix& node, Word& word, int depth, Tally& tally,
          Workspace& ws, Frontier&& frontier) {
  const int k = depth + 1;
  ComplexMatrix& child = ws.levels[static_cast<std::size_t>(k)];
  for (std::size_t s = 0; s < p.kraus.size(); ++s) {
    congruence_into(p.kraus[s], node, ws.scratch, child);
    const double prob = clamp_probability(child.trace().real());
    if (prob <= p.tol) {
      tally.cut_from[static_cast<std::size_t>(k)] += std::max(prob, 0.0);
      continue;
    }
    tally.entropy[static_cast<std::size_t>(k)] += entropy_term(prob);
    word.push_back(static_cast<char>(s + 1));
    if (k == p.n) {
      if (p.collect) tally.items.push_back({word, prob});
    } else if (child.max_abs() <= p.tol) {
      tally.cut_from[static_cast<std::size_t>(k) + 1] += prob;
    } else if (k == p.stop) {
      frontier(word, child);
    } else {
      walk(p, child, word, k, tally, ws, frontier);
    }
    word.pop_back();
  }
}

struct WalkResult {
  std::vector<double> entropy;       // by depth, [0] unused
  std::vector<double> dropped_mass;  // by depth
  std::vector<DiagItem> items;
};

WalkResult run_walk(const MpsModel& model, int n, double tol, int workers, bool collect) {
  if (n < 1) throw DomainError("string length must be >= 1, got " + std::to_string(n));
  if (n > 4096) throw ResourceError("string length " + std::to_string(n) + " is not supported");
  if (!(tol >= 0.0)) throw DomainError("prune tolerance must be >= 0");
  const auto dim = static_cast<std::size_t>(model.bond_dim());

  WalkParams params{model.kraus(), n, std::min(n, kSplitDepth), tol, collect};
  Tally head(n);
  std::vector<Prefix> frontier;
  {
    Workspace ws(dim, n);
    Word word;
    walk(params, model.invariant_state(), word, 0, head, ws,
         [&](const Word& w, const ComplexMatrix& m) { frontier.push_back({w, m}); });
  }

  std::vector<Tally> tails(frontier.size(), Tally(n));
  params.stop = n;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    Workspace ws(dim, n);
    for (std::size_t i = next++; i < frontier.size(); i = next++) {
      Word word = frontier[i].word;
      walk(params, frontier[i].partial, word, static_cast<int>(word.size()), tails[i], ws,
           [](const Word&, const ComplexMatrix&) {});
    }
  };
  const int threads = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(frontier.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  WalkResult out;
  out.entropy = head.entropy;
  std::vector<double> cut = head.cut_from;
  for (const auto& t : tails) {
    for (std::size_t k = 0; k < out.entropy.size(); ++k) out.entropy[k] += t.entropy[k];
    for (std::size_t k = 0; k < cut.size(); ++k) cut[k] += t.cut_from[k];
  }
  out.dropped_mass.assign(static_cast<std::size_t>(n) + 1, 0.0);
  double running = 0.0;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
    running += cut[k];
    out.dropped_mass[k] = running;
  }
  if (collect) {
    out.items = std::move(head.items);
    for (auto& t : tails)
      out.items.insert(out.items.end(), std::make_move_iterator(t.items.begin()),
                       std::make_move_iterator(t.items.end()));
  }
  return out;
}

}  // namespace

Word make_word(std::span<const int> symbols) {
  Word w;
  w.reserve(symbols.size());
  for (int s : symbols) {
    if (s < 1 || s > 255) throw DomainError("symbol " + std::to_string(s) + " out of range");
    w.push_back(static_cast<char>(s));
  }
  return w;
}

std::vector<int> word_symbols(const Word& w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (char c : w) out.push_back(static_cast<unsigned char>(c));
  return out;
}

std::string format_word(const Word& w, int local_dim) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int s = static_cast<unsigned char>(w[i]);
    if (local_dim <= 9) {
      out.push_back(static_cast<char>('0' + s));
    } else {
      if (i) out.push_back('.');
      out += std::to_string(s);
    }
  }
  return out;
}

double DiagDistribution::total_probability() const {
  double t = 0.0;
  for (const auto& it : items) t += it.probability;
  return t;
}

std::vector<double> DiagDistribution::probabilities() const {
  std::vector<double> p;
  p.reserve(items.size());
  for (const auto& it : items) p.push_back(it.probability);
  return p;
}

double string_probability(const MpsModel& model, std::span<const int> symbols) {
  ComplexMatrix m = model.invariant_state();
  for (int s : symbols) m = congruence(model.kraus_for_symbol(s), m);
  return clamp_probability(m.trace().real());
}

DiagDistribution enumerate_distribution(const MpsModel& model, int n, double prune_tol,
                                        int workers) {
  auto walk = run_walk(model, n, prune_tol, workers, true);
  DiagDistribution dist;
  dist.n = n;
  dist.local_dim = model.local_dim();
  dist.prune_tol = prune_tol;
  dist.items = std::move(walk.items);
  dist.pruned_mass = walk.dropped_mass.back();
  return dist;
}

DiagDistribution enumerate_exhaustive(const MpsModel& model, int n) {
  if (n < 1) throw DomainError("string length must be >= 1");
  const int d = model.local_dim();
  const double count = std::pow(static_cast<double>(d), n);
  if (count > static_cast<double>(1 << 26)) {
    throw ResourceError("exhaustive enumeration of " + std::to_string(d) + "^" +
                        std::to_string(n) + " strings refused");
  }
  DiagDistribution dist;
  dist.n = n;
  dist.local_dim = d;
  dist.prune_tol = 0.0;
  std::vector<int> symbols(static_cast<std::size_t>(n), 1);
  while (true) {
    dist.items.push_back({make_word(symbols), string_probability(model, symbols)});
    int pos = n - 1;
    while (pos >= 0 && symbols[static_cast<std::size_t>(pos)] == d) {
      symbols[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++symbols[static_cast<std::size_t>(pos)];
  }
  return dist;
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) h += entropy_term(p);
  return h;
}

double shannon_entropy(const DiagDistribution& dist) {
  double h = 0.0;
  for (const auto& it : dist.items) h += entropy_term(it.probability);
  return h;
}

const EntropyRow& EntropyTrace::at(int n) const {
  if (n < 1 || n > static_cast<int>(rows.size())) {
    throw DomainError("entropy trace has no row for n = " + std::to_string(n));
  }
  return rows[static_cast<std::size_t>(n - 1)];
}

EntropyTrace entropy_trace(const MpsModel& model, int n_max, double prune_tol, int workers) {
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  const auto walk = run_walk(model, n_max, prune_tol, workers, false);
  EntropyTrace trace;
  double previous = 0.0;
  for (int k = 1; k <= n_max; ++k) {
    const double h = walk.entropy[static_cast<std::size_t>(k)];
    trace.rows.push_back({k, h, h / k, h - previous, walk.dropped_mass[static_cast<std::size_t>(k)]});
    previous = h;
  }
  return trace;
}

std::uint64_t Spectrum::total_multiplicity() const {
  std::uint64_t t = 0;
  for (const auto& e : entries) t += e.multiplicity;
  return t;
}

double Spectrum::total_mass() const {
  double t = 0.0;
  for (const auto& e : entries) t += e.value * static_cast<double>(e.multiplicity);
  return t;
}

std::vector<double> Spectrum::expanded() const {
  std::vector<double> v;
  v.reserve(total_multiplicity());
  for (const auto& e : entries) v.insert(v.end(), e.multiplicity, e.value);
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

Spectrum group_values(std::vector<double> values, double group_tol, const std::string& family) {
  std::sort(values.begin(), values.end(), std::greater<>());
  Spectrum s;
  std::size_t i = 0;
  while (i < values.size()) {
    const double anchor = values[i];
    double sum = 0.0;
    std::size_t j = i;
    while (j < values.size() && std::abs(values[j] - anchor) <= group_tol * std::abs(anchor)) {
      sum += values[j];
      ++j;
    }
    s.entries.push_back({family, sum / static_cast<double>(j - i), j - i});
    i = j;
  }
  return s;
}

Spectrum spectrum_of(const DiagDistribution& dist, double group_tol) {
  return group_values(dist.probabilities(), group_tol);
}

std::map<Word, double> as_map(const DiagDistribution& dist) {
  std::map<Word, double> m;
  for (const auto& it : dist.items) m[it.word] += it.probability;
  return m;
}

std::map<Word, double> marginal_drop_first(const DiagDistribution& dist) {
  std::map<Word, double> m;
  for (const auto& it : dist.items) m[it.word.substr(1)] += it.probability;
  return m;
}

std::map<Word, double> marginal_drop_last(const DiagDistribution& dist) {
  std::map<Word, double> m;
  for (const auto& it : dist.items) m[it.word.substr(0, it.word.size() - 1)] += it.probability;
  return m;
}

double max_abs_difference(const std::map<Word, double>& a, const std::map<Word, double>& b) {
  double worst = 0.0;
  for (const auto& [w, p] : a) {
    const auto it = b.find(w);
    worst = std::max(worst, std::abs(p - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [w, p] : b)
    if (!a.contains(w)) worst = std::max(worst, std::abs(p));
  return worst;
}

double multiset_distance(std::vector<double> a, std::vector<double> b, double floor) {
  auto prune = [floor](std::vector<double>& v) {
    std::erase_if(v, [floor](double x) { return x <= floor; });
    std::sort(v.begin(), v.end(), std::greater<>());
  };
  prune(a);
  prune(b);
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_distribution_csv(std::ostream& os, const DiagDistribution& dist) {
  os << "string,probability\n";
  for (const auto& it : dist.items)
    os << format_word(it.word, dist.local_dim) << ',' << format_number(it.probability) << '\n';
}

nlohmann::json distribution_to_json(const DiagDistribution& dist) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : dist.items)
    items.push_back({{"string", format_word(it.word, dist.local_dim)},
                     {"symbols", word_symbols(it.word)},
                     {"probability", it.probability}});
  return {{"n", dist.n},
          {"local_dim", dist.local_dim},
          {"prune_tol", dist.prune_tol},
          {"pruned_mass", dist.pruned_mass},
          {"items", std::move(items)}};
}

void write_entropy_trace_csv(std::ostream& os, const EntropyTrace& trace) {
  os << "n,H_n,rate_avg,rate_cond\n";
  for (const auto& r : trace.rows)
    os << r.n << ',' << format_number(r.entropy) << ',' << format_number(r.rate_avg) << ','
       << format_number(r.rate_cond) << '\n';
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum, const std::string& source,
                        bool header) {
  if (header) os << "family,value,multiplicity,source\n";
  for (const auto& e : spectrum.entries)
    os << e.family << ',' << format_number(e.value) << ',' << e.multiplicity << ',' << source
       << '\n';
}

nlohmann::json spectrum_to_json(const Spectrum& spectrum) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : spectrum.entries)
    out.push_back({{"family", e.family}, {"value", e.value}, {"multiplicity", e.multiplicity}});
  return out;
}

}  // namespace mpscap
