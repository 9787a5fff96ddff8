#include "mpscap/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "mpscap/errors.hpp"

namespace mpscap {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

void check_g(double g, const char* who) {
  if (!(g >= 0.0 && g < 1.0)) {
    throw DomainError(std::string(who) + ": g must lie in [0, 1), got " + std::to_string(g));
  }
}

std::string indexed(const char* family, int i) {
  return std::string(family) + "[" + std::to_string(i) + "]";
}

void add_family(Spectrum& s, std::string family, double value, std::uint64_t multiplicity) {
  if (value == 0.0 || multiplicity == 0) return;
  s.entries.push_back({std::move(family), value, multiplicity});
}

void sort_descending(Spectrum& s) {
  std::stable_sort(s.entries.begin(), s.entries.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value > b.value; });
}

int floor_half(int n) { return n / 2; }
int ceil_half(int n) { return (n + 1) / 2; }

std::uint64_t at_index(const std::vector<std::uint64_t>& v, int i, const char* family, int n) {
  if (i < 1 || i > static_cast<int>(v.size())) {
    throw StructuralError(std::string("multiplicity table n=") + std::to_string(n) + ": " +
                          family + "(" + std::to_string(i) + ") outside 1.." +
                          std::to_string(v.size()));
  }
  return v[static_cast<std::size_t>(i - 1)];
}

void check_table_shape(const MultiplicityTable& t) {
  const auto fl = static_cast<std::size_t>(floor_half(t.n) - 1);
  const auto ce = static_cast<std::size_t>(ceil_half(t.n) - 1);
  if (t.c.size() != fl || t.g.size() != fl || t.e.size() != ce) {
    throw StructuralError("multiplicity table n=" + std::to_string(t.n) +
                          " has index ranges c:" + std::to_string(t.c.size()) +
                          " e:" + std::to_string(t.e.size()) + " g:" + std::to_string(t.g.size()) +
                          ", expected " + std::to_string(fl) + "/" + std::to_string(ce) + "/" +
                          std::to_string(fl));
  }
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0) throw DomainError("binomial: negative n");
  if (n > 64) throw DomainError("binomial: n > 64 would overflow the exact range");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // r * (n - k + i) is divisible by i; split i between r and the new factor to stay in 64 bits.
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const auto ui = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(r, ui);
    r = (r / g) * (static_cast<std::uint64_t>(n - k + i) / (ui / g));
  }
  return r;
}

double h2(double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return -xlog2x(s * s) - xlog2x(c * c);
}

Spectrum aklt_spectrum(int n, double theta) {
  if (n < 1) throw DomainError("aklt_spectrum: n must be >= 1");
  if (n > 64) throw DomainError("aklt_spectrum: n must be <= 64");
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double s2 = s * s;
  const double c2 = c * c;
  Spectrum out;
  for (int p = 0; p < n; ++p) {
    add_family(out, indexed("lambda", p), std::pow(s2, p) * std::pow(c2, n - p) / 2.0,
               2 * binomial(n, p));
  }
  add_family(out, indexed("lambda", n), std::pow(s2, n), 1);
  sort_descending(out);
  return out;
}

std::uint64_t mg_odd_multiplicity_literal(int n, int i) {
  const int k = ceil_half(n);
  return 2 * binomial(k, k - i);
}

Spectrum mg_spectrum(int n, double g) {
  if (n < 2) throw DomainError("mg_spectrum: n must be >= 2 (use enumeration for n = 1)");
  if (n > 120) throw DomainError("mg_spectrum: n must be <= 120");
  check_g(g, "mg_spectrum");
  const double q = 1.0 - g;
  Spectrum out;
  if (n % 2 == 1) {
    const int k = ceil_half(n);
    add_family(out, indexed("mu", 0), (std::pow(q, k) + std::pow(g, k)) / 2.0, 2);
    for (int i = 1; i <= k - 1; ++i) {
      // 2 C(k, k - i) == 2 C(k, i)
      add_family(out, indexed("mu", i), std::pow(q, i) * std::pow(g, k - i) / 2.0,
                 2 * binomial(k, i));
    }
  } else {
    const int h = n / 2;
    add_family(out, indexed("gamma", 0), (std::pow(q, h) + std::pow(g, h + 1)) / 2.0, 1);
    for (int i = 1; i <= h - 1; ++i) {
      add_family(out, indexed("gamma1", i), std::pow(g, i) * std::pow(q, h - i) / 2.0,
                 binomial(h, i));
    }
    for (int i = 1; i <= h; ++i) {
      add_family(out, indexed("gamma2", i), std::pow(g, h - i + 1) * std::pow(q, i) / 2.0,
                 binomial(h + 1, i));
    }
    add_family(out, indexed("gamma", h), (std::pow(q, h + 1) + std::pow(g, h)) / 2.0, 1);
  }
  sort_descending(out);
  return out;
}

double aklt_capacity(double theta) { return std::log2(3.0) - h2(theta); }

double mg_capacity(double g) {
  check_g(g, "mg_capacity");
  return 1.0 + 0.5 * xlog2x(g) + 0.5 * xlog2x(1.0 - g);
}

std::optional<double> closed_form_capacity(const MpsModel& model) {
  switch (model.kind()) {
    case ModelKind::aklt: return aklt_capacity(*model.param("theta"));
    case ModelKind::mg: return mg_capacity(*model.param("g"));
    case ModelKind::custom: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Spectrum> closed_form_spectrum(const MpsModel& model, int n) {
  switch (model.kind()) {
    case ModelKind::aklt: return aklt_spectrum(n, *model.param("theta"));
    case ModelKind::mg:
      if (n < 2) return std::nullopt;
      return mg_spectrum(n, *model.param("g"));
    case ModelKind::custom: return std::nullopt;
  }
  return std::nullopt;
}

std::uint64_t MultiplicityTable::total() const {
  std::uint64_t t = z + b + d + f + h;
  for (auto v : c) t += v;
  for (auto v : e) t += v;
  for (auto v : g) t += v;
  return t;
}

std::uint64_t MultiplicityTable::c_at(int i) const { return at_index(c, i, "c", n); }
std::uint64_t MultiplicityTable::e_at(int i) const { return at_index(e, i, "e", n); }
std::uint64_t MultiplicityTable::g_at(int i) const { return at_index(g, i, "g", n); }

std::vector<TableEntry> table_entries(const MultiplicityTable& t) {
  std::vector<TableEntry> out;
  out.push_back({"z", 0, t.z});
  out.push_back({"b", 0, t.b});
  for (std::size_t i = 0; i < t.c.size(); ++i) out.push_back({"c", static_cast<int>(i + 1), t.c[i]});
  out.push_back({"d", 0, t.d});
  for (std::size_t i = 0; i < t.e.size(); ++i) out.push_back({"e", static_cast<int>(i + 1), t.e[i]});
  out.push_back({"f", 0, t.f});
  for (std::size_t i = 0; i < t.g.size(); ++i) out.push_back({"g", static_cast<int>(i + 1), t.g[i]});
  out.push_back({"h", 0, t.h});
  return out;
}

std::vector<std::string> table_differences(const MultiplicityTable& a,
                                           const MultiplicityTable& b) {
  std::vector<std::string> diffs;
  if (a.n != b.n) {
    diffs.push_back("n: " + std::to_string(a.n) + " vs " + std::to_string(b.n));
    return diffs;
  }
  auto label = [&](const TableEntry& e) {
    return e.family + (e.index ? "_" + std::to_string(a.n) + "(" + std::to_string(e.index) + ")"
                               : "_" + std::to_string(a.n));
  };
  const auto ea = table_entries(a);
  const auto eb = table_entries(b);
  std::map<std::pair<std::string, int>, std::uint64_t> mb;
  for (const auto& e : eb) mb[{e.family, e.index}] = e.count;
  for (const auto& e : ea) {
    const auto it = mb.find({e.family, e.index});
    if (it == mb.end()) {
      diffs.push_back(label(e) + ": " + std::to_string(e.count) + " vs (absent)");
    } else {
      if (it->second != e.count)
        diffs.push_back(label(e) + ": " + std::to_string(e.count) + " vs " +
                        std::to_string(it->second));
      mb.erase(it);
    }
  }
  for (const auto& [key, count] : mb) {
    diffs.push_back(label({key.first, key.second, count}) + ": (absent) vs " +
                    std::to_string(count));
  }
  return diffs;
}

MultiplicityTable reference_initial_table() {
  MultiplicityTable t;
  t.n = 4;
  t.z = 6;
  t.b = 1;
  t.c = {2};
  t.d = 1;
  t.e = {1};
  t.f = 1;
  t.g = {2};
  t.h = 1;
  return t;
}

std::vector<MultiplicityTable> mg_multiplicity_recurrence(int n_max,
                                                          const MultiplicityTable& initial) {
  if (initial.n < 4) throw DomainError("recurrence needs an initial table with n >= 4");
  if (n_max < initial.n) throw DomainError("n_max below the initial table's n");
  if (n_max > 62) throw DomainError("n_max > 62 overflows 64-bit counts");
  check_table_shape(initial);

  std::vector<MultiplicityTable> out{initial};
  for (int n = initial.n; n < n_max; ++n) {
    const MultiplicityTable& t = out.back();
    const int fl = floor_half(n);
    const int ce = ceil_half(n);
    const int fl1 = floor_half(n + 1);
    const int ce1 = ceil_half(n + 1);

    MultiplicityTable next;
    next.n = n + 1;
    next.z = 2 * t.z + t.b + t.h;
    for (int i = 1; i <= fl - 1; ++i) next.z += t.c_at(i) + t.g_at(i);
    next.b = t.d;
    for (int i = 1; i <= fl1 - 1; ++i) next.c.push_back(t.e_at(i));
    next.d = t.f;
    next.e.assign(static_cast<std::size_t>(ce1 - 1), 0);
    next.e.front() = t.h + t.c_at(1);
    for (int i = 2; i <= ce1 - 2; ++i)
      next.e[static_cast<std::size_t>(i - 1)] = t.g_at(fl - i + 1) + t.c_at(i);
    next.e.back() = t.g_at(1) + t.b;
    next.f = t.d;
    for (int i = 1; i <= fl1 - 1; ++i) next.g.push_back(t.e_at(ce - i));
    next.h = t.f;
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<MultiplicityTable> mg_multiplicity_recurrence(int n_max) {
  return mg_multiplicity_recurrence(n_max, reference_initial_table());
}

MultiplicityTable mg_multiplicity_closed_form(int n) {
  if (n < 4) throw DomainError("closed-form multiplicities hold for n >= 4");
  if (n > 62) throw DomainError("n > 62 overflows 64-bit counts");
  const int fl = floor_half(n);
  const int ce = ceil_half(n);
  MultiplicityTable t;
  t.n = n;
  t.z = (std::uint64_t{1} << n) - (std::uint64_t{1} << (fl + 1)) - (std::uint64_t{1} << ce) + 2;
  t.b = t.d = t.f = t.h = 1;
  for (int i = 1; i <= fl - 1; ++i) t.c.push_back(binomial(fl, i));
  for (int i = 1; i <= ce - 1; ++i) t.e.push_back(binomial(ce, i));
  for (int i = 1; i <= fl - 1; ++i) t.g.push_back(binomial(fl, i));
  return t;
}

namespace {

// Solves value = base^(total - i) * other^i for integer i; -1 if no match.
int match_exponent(double value, double base, double other, int total) {
  const double ratio = std::log(value / std::pow(base, total)) / std::log(other / base);
  const double r = std::round(ratio);
  if (!std::isfinite(r) || r < 0 || r > total) return -1;
  const int i = static_cast<int>(r);
  const double expected = std::pow(base, total - i) * std::pow(other, i);
  return std::abs(value - expected) <= 1e-9 * expected ? i : -1;
}

bool close_to(double value, double expected) {
  return std::abs(value - expected) <= 1e-9 * std::abs(expected);
}

struct Classifier {
  int n;
  double g;
  int fl, ce;
  ProductClassification result;

  void classify(const ComplexMatrix& x) {
    auto& t = result.table;
    double off = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) off = std::max(off, std::abs(x(i, j)));
    const double v0 = x(0, 0).real(), v1 = x(1, 1).real(), v2 = x(2, 2).real();
    const bool n0 = v0 != 0.0, n1 = v1 != 0.0, n2 = v2 != 0.0;
    const double q = 1.0 - g;
    if (off > 1e-12) {
      ++result.unclassified;
    } else if (!n0 && !n1 && !n2) {
      ++t.z;
    } else if (n0 && !n1 && !n2) {
      // g^i (1-g)^(fl-i): B at i = fl, C(i) for 1 <= i < fl
      const int i = match_exponent(v0, q, g, fl);
      if (i == fl) ++t.b;
      else if (i >= 1) ++t.c[static_cast<std::size_t>(i - 1)];
      else ++result.unclassified;
    } else if (n0 && n1 && !n2) {
      if (close_to(v0, std::pow(q, fl)) && close_to(v1, std::pow(g, ce))) ++t.d;
      else ++result.unclassified;
    } else if (!n0 && n1 && !n2) {
      const int i = match_exponent(v1, q, g, ce);
      if (i >= 1 && i <= ce - 1) ++t.e[static_cast<std::size_t>(i - 1)];
      else ++result.unclassified;
    } else if (!n0 && n1 && n2) {
      if (close_to(v1, std::pow(q, ce)) && close_to(v2, std::pow(g, fl))) ++t.f;
      else ++result.unclassified;
    } else if (!n0 && !n1 && n2) {
      // g^(fl-i) (1-g)^i: H at i = fl, G(i) for 1 <= i < fl
      const int i = match_exponent(v2, g, q, fl);
      if (i == fl) ++t.h;
      else if (i >= 1) ++t.g[static_cast<std::size_t>(i - 1)];
      else ++result.unclassified;
    } else {
      ++result.unclassified;
    }
  }

  void walk(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& x, int depth) {
    if (depth == n) {
      classify(x);
      return;
    }
    for (const auto& a : kraus) walk(kraus, conjugate_by(a, x), depth + 1);
  }
};

}  // namespace

ProductClassification classify_mg_products(int n, double g) {
  if (n < 4 || n > 24) throw DomainError("classify_mg_products: n must lie in 4..24");
  if (!(g > 0.0 && g < 1.0) || g == 0.5) {
    throw DomainError("classify_mg_products: g must be generic, in (0,1) and != 1/2");
  }
  const auto model = mg_model(g);
  std::vector<ComplexMatrix> kraus(model.kraus().begin(), model.kraus().end());
  Classifier cl{n, g, floor_half(n), ceil_half(n), {}};
  cl.result.table.n = n;
  cl.result.table.c.assign(static_cast<std::size_t>(cl.fl - 1), 0);
  cl.result.table.e.assign(static_cast<std::size_t>(cl.ce - 1), 0);
  cl.result.table.g.assign(static_cast<std::size_t>(cl.fl - 1), 0);
  cl.walk(kraus, ComplexMatrix::identity(3), 0);
  return cl.result;
}

void write_table_csv(std::ostream& os, const MultiplicityTable& t, bool header) {
  if (header) os << "n,family,index,count\n";
  for (const auto& e : table_entries(t))
    os << t.n << ',' << e.family << ',' << e.index << ',' << e.count << '\n';
}

nlohmann::json table_to_json(const MultiplicityTable& t) {
  return {{"n", t.n}, {"z", t.z}, {"b", t.b}, {"c", t.c}, {"d", t.d},
          {"e", t.e}, {"f", t.f}, {"g", t.g}, {"h", t.h}, {"total", t.total()}};
}

}  // namespace mpscap
