#include "bergman/multi_index.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bergman {

MultiIndex::MultiIndex(std::initializer_list<int> entries) : e_(entries) {
  for (int v : e_)
    if (v < 0) throw std::invalid_argument("multi-index entries must be non-negative");
}

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_)
    if (v < 0) throw std::invalid_argument("multi-index entries must be non-negative");
}

MultiIndex MultiIndex::unit(int n, int i) {
  MultiIndex m(n);
  m.e_[i] = 1;
  return m;
}

int MultiIndex::order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

bool MultiIndex::dominates(const MultiIndex& o) const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] < o.e_[i]) return false;
  return true;
}

Real MultiIndex::factorial() const {
  Real r = 1;
  for (int v : e_) r *= bergman::factorial(static_cast<unsigned>(v));
  return r;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi-index size mismatch");
  MultiIndex r(a.size());
  for (int i = 0; i < a.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
  return r;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multi-index size mismatch");
  MultiIndex r(a.size());
  for (int i = 0; i < a.size(); ++i) {
    if (a.e_[i] < b.e_[i]) throw std::invalid_argument("multi-index difference would be negative");
    r.e_[i] = a.e_[i] - b.e_[i];
  }
  return r;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < e_.size(); ++i) os << (i ? "," : "") << e_[i];
  os << ')';
  return os.str();
}

MultiIndex concat(const MultiIndex& a, const MultiIndex& b) {
  std::vector<int> v = a.entries();
  v.insert(v.end(), b.entries().begin(), b.entries().end());
  return MultiIndex(std::move(v));
}

Real multi_binomial(const MultiIndex& a, const MultiIndex& b) {
  Real r = 1;
  for (int i = 0; i < a.size(); ++i)
    r *= binomial(static_cast<unsigned>(a[i]), static_cast<unsigned>(b[i]));
  return r;
}

namespace {

constexpr std::size_t kMaxSumTable = 1u << 22;

void append_degree(int nvars, int remaining, int pos, std::vector<int>& cur,
                   std::vector<MultiIndex>& out) {
  if (pos == nvars - 1) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    append_degree(nvars, remaining - v, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || order < 0) throw std::invalid_argument("bad monomial basis shape");
  counts_.assign(nvars + 1, std::vector<std::size_t>(2 * order + 2, 0));
  for (int s = 0; s <= 2 * order + 1; ++s) counts_[0][s] = s == 0 ? 1 : 0;
  for (int k = 1; k <= nvars; ++k)
    for (int s = 0; s <= 2 * order + 1; ++s) {
      std::size_t c = 0;
      for (int v = 0; v <= s; ++v) c += counts_[k - 1][s - v];
      counts_[k][s] = c;
    }
  std::vector<int> cur(nvars, 0);
  for (int d = 0; d <= order; ++d) {
    offsets_.push_back(monos_.size());
    append_degree(nvars, d, 0, cur, monos_);
  }
  offsets_.push_back(monos_.size());
  degrees_.reserve(monos_.size());
  for (const auto& m : monos_) degrees_.push_back(m.order());

  const std::size_t n = monos_.size();
  parent_.assign(n, 0);
  parent_var_.assign(n, -1);
  for (std::size_t t = 1; t < n; ++t) {
    int v = 0;
    while (monos_[t][v] == 0) ++v;
    parent_var_[t] = v;
    parent_[t] = static_cast<std::size_t>(rank(monos_[t] - MultiIndex::unit(nvars_, v)));
  }
  if (n * n <= kMaxSumTable) {
    sum_table_.assign(n * n, -1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (degrees_[i] + degrees_[j] <= order_)
          sum_table_[i * n + j] = static_cast<int>(rank(monos_[i] + monos_[j]));
  }
}

std::size_t MonomialBasis::degree_offset(int d) const {
  if (d <= 0) return 0;
  if (d > order_) return monos_.size();
  return offsets_[d];
}

long MonomialBasis::rank(const MultiIndex& e) const {
  if (e.size() != nvars_) throw std::invalid_argument("monomial has wrong number of variables");
  const int d = e.order();
  if (d > order_) return -1;
  std::size_t r = offsets_[d];
  int remaining = d;
  for (int i = 0; i < nvars_ - 1; ++i) {
    // monomials whose i-th exponent is larger come first
    for (int v = remaining; v > e[i]; --v) r += counts_[nvars_ - i - 1][remaining - v];
    remaining -= e[i];
  }
  return static_cast<long>(r);
}

long MonomialBasis::sum_rank(std::size_t i, std::size_t j) const {
  if (!sum_table_.empty()) return sum_table_[i * monos_.size() + j];
  if (degrees_[i] + degrees_[j] > order_) return -1;
  return rank(monos_[i] + monos_[j]);
}

std::shared_ptr<const MonomialBasis> monomial_basis(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(nvars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto b = std::make_shared<const MonomialBasis>(nvars, order);
  cache.emplace(key, b);
  return b;
}

}  // namespace bergman
