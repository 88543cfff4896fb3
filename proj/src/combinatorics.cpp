#include "arakelov/combinatorics.hpp"

#include <numeric>
#include <string>

#include "arakelov/error.hpp"

namespace arakelov {

namespace {

long long factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

long long choose(long long n, int k) {
  if (k < 0 || n < k) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long ipow(long long base, int e) {
  long long r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// Calls visit(tuple) for every k-tuple of indices into an alphabet of size n.
template <class F>
void for_each_tuple(int n, int k, F&& visit) {
  std::vector<int> idx(k, 0);
  while (true) {
    visit(idx);
    int pos = k - 1;
    while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
    if (pos < 0) return;
  }
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<BundleSymbol> bundle_symbols(int n, int apex) {
  std::vector<BundleSymbol> out;
  for (int j = 1; j <= n; ++j) out.push_back({j, j});
  if (apex > 0)
    for (int j = 1; j <= n; ++j) out.push_back({j, apex});
  for (int k = 1; k <= n; ++k)
    for (int l = k + 1; l <= n; ++l) out.push_back({k, l});
  return out;
}

TupleGraph::TupleGraph(int n, std::vector<BundleSymbol> e)
    : vertex_count(n), edges(std::move(e)), degree(n + 1, 0) {
  for (const auto& s : edges) {
    ++degree[s.a];
    ++degree[s.b];
  }
}

int TupleGraph::components() const {
  Dsu dsu(vertex_count + 1);
  for (const auto& s : edges) dsu.unite(s.a, s.b);
  int c = 0;
  for (int v = 1; v <= vertex_count; ++v) c += dsu.find(v) == v;
  return c;
}

bool TupleGraph::has_bridge() const {
  const int base = components();
  for (std::size_t skip = 0; skip < edges.size(); ++skip) {
    if (edges[skip].loop()) continue;
    Dsu dsu(vertex_count + 1);
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (i != skip) dsu.unite(edges[i].a, edges[i].b);
    int c = 0;
    for (int v = 1; v <= vertex_count; ++v) c += dsu.find(v) == v;
    if (c > base) return true;
  }
  return false;
}

long long enumerate_B(int g, int k) {
  if (g < 1 || k < 0 || k > g) throw Error(ErrorKind::InvalidInput, "need 0 <= k <= g");
  if (g > 4) throw Error(ErrorKind::ParameterTooLarge, "enumeration limited to g <= 4");
  if (k == 0) return 1;
  const auto symbols = bundle_symbols(g, g + 1);
  const long long loop_weight = 2 - 2 * g;
  long long total = 0;
  for_each_tuple(static_cast<int>(symbols.size()), k, [&](const std::vector<int>& idx) {
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      unsigned touched = 0;
      for (int i = 0; i < k; ++i) {
        if (!(mask >> i & 1u)) continue;
        const auto& s = symbols[idx[i]];
        if (s.a <= k) touched |= 1u << (s.a - 1);
        if (s.b <= k) touched |= 1u << (s.b - 1);
      }
      if (__builtin_popcount(touched) < __builtin_popcount(mask)) return;
    }
    std::vector<BundleSymbol> e;
    for (int i : idx) e.push_back(symbols[i]);
    const TupleGraph graph(g + 1, std::move(e));
    const long long sign = graph.degree[g + 1] % 2 ? -1 : 1;
    total += sign * ipow(loop_weight, graph.betti());
  });
  return total;
}

long long closed_form_B(int g, int k) {
  return (k % 2 ? -1 : 1) * factorial(k) * (factorial(g) / factorial(g - k));
}

long long enumerate_A(int k, AVariant variant) {
  if (k < 2) throw Error(ErrorKind::InvalidInput, "need k >= 2");
  if (k > 5) throw Error(ErrorKind::ParameterTooLarge, "enumeration limited to k <= 5");
  const int n = k - 1;
  const auto symbols = bundle_symbols(n, 0);
  long long count = 0;
  for_each_tuple(static_cast<int>(symbols.size()), k, [&](const std::vector<int>& idx) {
    std::vector<BundleSymbol> e;
    for (int i : idx) e.push_back(symbols[i]);
    const TupleGraph graph(n, std::move(e));
    if (!graph.connected()) return;
    int threes = 0, fours = 0;
    for (int v = 1; v <= n; ++v) {
      const int d = graph.degree[v];
      if (d == 3) ++threes;
      else if (d == 4) ++fours;
      else if (d != 2) return;
    }
    switch (variant) {
      case AVariant::Theta: count += threes == 2 && !graph.has_bridge(); break;
      case AVariant::Dumbbell: count += threes == 2 && graph.has_bridge(); break;
      case AVariant::FigureEight: count += fours == 1 && threes == 0; break;
    }
  });
  return count;
}

long long closed_form_A(int k, AVariant variant) {
  // The product formulas hold from k = 3; k = 2 is the single tuple (T_1, T_1).
  if (k == 2) return variant == AVariant::FigureEight ? 1 : 0;
  const long long base = factorial(k) * factorial(k - 1);
  switch (variant) {
    case AVariant::Theta: return choose(k - 1, 2) * base / 12;
    case AVariant::Dumbbell: return base * (k * k + k - 4) / 16;
    case AVariant::FigureEight: return base * (k + 1) / 8;
  }
  return 0;
}

long long binom_identity_check(int g, const std::vector<long long>& coefficients) {
  if (g < 1 || g > 20) throw Error(ErrorKind::InvalidInput, "need 1 <= g <= 20");
  int degree = -1;
  for (int i = 0; i < static_cast<int>(coefficients.size()); ++i)
    if (coefficients[i] != 0) degree = i;
  if (degree >= g) throw Error(ErrorKind::DegreeTooHigh, "deg f = " + std::to_string(degree) + " >= g");
  __int128 total = 0;
  for (int k = 0; k <= g; ++k) {
    __int128 value = 0;
    __int128 term = 0;
    bool overflow = false;
    for (int i = degree; i >= 0; --i) {
      overflow |= __builtin_mul_overflow(value, static_cast<__int128>(k), &value);
      overflow |= __builtin_add_overflow(value, static_cast<__int128>(coefficients[i]), &value);
    }
    overflow |= __builtin_mul_overflow(value, static_cast<__int128>(choose(g, k)), &term);
    overflow |= __builtin_add_overflow(total, k % 2 ? -term : term, &total);
    if (overflow) throw Error(ErrorKind::InvalidInput, "coefficients too large for exact evaluation");
  }
  if (total > INT64_MAX || total < INT64_MIN) throw Error(ErrorKind::InvalidInput, "residual overflows 64 bits");
  return static_cast<long long>(total);
}

long long alternating_pair_sum(int g) {
  long long total = 0;
  for (int k = 3; k <= g; ++k) total += (k % 2 ? 1 : -1) * choose(k - 1, 2) * choose(g, k);
  return total;
}

}  // namespace arakelov
