#pragma once

#include <cstdint>
#include <vector>

namespace arakelov {

// Line bundle symbols on X^n: a loop T_j at v_j, or an edge between two
// vertices. Vertex indices are 1-based; `apex` is the distinguished vertex g+1.
struct BundleSymbol {
  int a = 1;
  int b = 1;  // a == b for the loop T_a
  bool loop() const { return a == b; }
};

// Symbols T_j, edges (j, apex) for j <= n, and edges (k, l) for k < l <= n.
// With apex == 0 the edges to the distinguished vertex are left out.
std::vector<BundleSymbol> bundle_symbols(int n, int apex);

// Multigraph of a symbol tuple on the vertices 1..vertex_count.
struct TupleGraph {
  int vertex_count = 0;
  std::vector<BundleSymbol> edges;
  std::vector<int> degree;  // 1-based; loops count twice

  TupleGraph(int vertex_count, std::vector<BundleSymbol> edges);
  int components() const;
  int betti() const { return static_cast<int>(edges.size()) - vertex_count + components(); }
  bool connected() const { return components() == 1; }
  // True if some edge is a bridge.
  bool has_bridge() const;
};

// Signed count over k-tuples of symbols for genus g: weight (2-2g)^b1 (-1)^deg(v_{g+1}),
// zero whenever some l of the tuple entries touch fewer than l of v_1..v_k.
long long enumerate_B(int g, int k);
long long closed_form_B(int g, int k);

enum class AVariant { Theta, Dumbbell, FigureEight };

// Number of k-tuples over the k-1 vertices (no distinguished vertex) whose graph
// is connected with Betti number 2 and no leaves: two degree-3 vertices joined by
// three paths (Theta) or one path (Dumbbell), or one degree-4 vertex (FigureEight).
long long enumerate_A(int k, AVariant variant);
long long closed_form_A(int k, AVariant variant);  // k >= 2

// sum_{k=0}^g (-1)^k f(k) C(g, k) for integer coefficients f (ascending powers),
// which vanishes whenever deg f < g.
long long binom_identity_check(int g, const std::vector<long long>& coefficients);

// sum_{k=3}^g (-1)^(k-1) C(k-1, 2) C(g, k); equals 1 for every g >= 3.
long long alternating_pair_sum(int g);

}  // namespace arakelov
