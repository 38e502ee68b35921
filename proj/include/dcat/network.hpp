#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dcat/types.hpp"

namespace dcat {

// Undirected graph on m nodes. Self-loops are implicit on every node and not
// stored in the adjacency lists.
struct Graph {
  int m = 0;
  std::vector<std::vector<int>> adj;

  explicit Graph(int m = 0) : m(m), adj(m) {}
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;
  int degree(int i) const { return static_cast<int>(adj[i].size()); }
  int edge_count() const;  // excluding self-loops
  int component_count() const;
  bool connected() const { return component_count() <= 1; }
};

Graph path_graph(int m);
Graph complete_graph(int m);
Graph ring_graph(int m);

// G(m, p); on a disconnected draw the seed is incremented (up to 100 times),
// after which components are chained by their lowest-index nodes.
Graph erdos_renyi(int m, double p, std::uint64_t seed);

Mat metropolis_weights(const Graph& g);

// |W - 11^T/m|_2 for symmetric doubly stochastic W; throws if >= 1.
double spectral_gap(const Mat& W);

struct Topology {
  Graph graph;
  Mat W;
  double rho = 0.0;
};

Topology make_topology(const Graph& g);

// Accelerated gossip with momentum (1 - sqrt(1 - rho^2)) / (1 + sqrt(1 - rho^2)).
Mat fastmix(const Mat& X, int rounds, const Mat& W, double rho);

// T_K(W / rho) / T_K(1 / rho) applied to X with the three-term recurrence.
Mat chebyshev_rounds(const Mat& X, int K, const Mat& W, double rho);
Mat chebyshev_rounds(const Mat& X, int K, const Mat& W);

// Smallest K with 1 / T_K(1 / rho) <= rho_target.
int chebyshev_rounds_for(double rho, double rho_target);

// Round count of the form ceil(log(1 / rho_target) / sqrt(1 - rho)).
int chebyshev_rounds_simple(double rho, double rho_target);

// A gossip operator together with its communication cost per application.
struct Gossip {
  Mat P;
  int rounds = 1;
  double rho = 0.0;

  Mat apply(const Mat& X) const { return P * X; }
};

Gossip plain_gossip(const Topology& t);
Gossip chebyshev_gossip(const Topology& t, int K);

struct PudaMatrices {
  Mat W;
  Mat Hsq;
  Mat C;
  double sigma_max_C = 0.0;
  double sigma_min_plus_Hsq = 0.0;
  double sigma_max_Hsq = 0.0;
  int rounds = 1;  // cost of one application of a non-identity factor
  bool W_identity = false;
  bool Hsq_zero = false;
  bool C_zero = false;
};

// Checks the PUDA admissibility list (eigen tolerance 1e-10); throws on failure.
void validate_puda(const PudaMatrices& pm, double tol = 1e-10);

// W = (I + Wt)/2, H^2 = (I - Wt)/2, C = 0.
PudaMatrices prox_ed_triple(const Mat& Wt, int rounds = 1);
// W = (I + Wt)/2, H^2 = (I - Wt)/2, C = (I - Wt)/2.
PudaMatrices extra_triple(const Mat& Wt, int rounds = 1);

}  // namespace dcat
