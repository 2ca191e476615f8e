#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ust/small_graph.hpp"
#include "ust/tree_metrics.hpp"
#include "ust/wilson.hpp"

namespace ust {

// Effective resistance between disjoint vertex sets of a unit-conductance
// network: Dirichlet solve (1 on A, 0 on B) by Jacobi-scaled conjugate
// gradients, R = 1/energy. Returns +infinity when no path joins A and B.
double resistance_general(const SmallGraph& g, std::span<const int> set_a,
                          std::span<const int> set_b, double rel_residual = 1e-13);

// Exact effective resistance from a member vertex to the absorbing layer of
// a tree piece, by one series-parallel sweep from the leaves.
double resistance_tree(const BallGraph& g, int source);

// Same sweep with the ground moved to a set of member vertices (absorbing
// edges are ignored); used for series-law checks R(x <-> y) = d_U(x,y).
double resistance_tree_to_members(const BallGraph& g, int source,
                                  std::span<const int> absorbing_members);

// R(x <-> absorbing layer) for every member at once (rerooting sweep).
std::vector<double> resistance_all_members(const BallGraph& g);

// Green diagonal via the electrical identity: degree(x) * R(x <-> exits).
double green_diagonal(const BallGraph& g, int x);

// Green diagonal via the defining series sum_n P^x(X_n = x), evaluated by
// substochastic iteration with geometric tail completion. Independent of the
// electrical route; the two are compared in validation.
double green_series(const BallGraph& g, int x, double rel_tol = 1e-9);

// Ball graph as an explicit network: members 0..n-1 plus one ground vertex
// (index n) merging the whole absorbing layer.
SmallGraph to_small_graph(const BallGraph& g, int& ground_vertex);

struct ResistanceReport {
  std::int64_t r = 0;
  double r_eff_origin = 0.0;  // R(0 <-> exits of B_U(0,r))
  double r_eff_ur = 0.0;      // R(0 <-> attachment of U_r)
  double green_origin = 0.0;  // mu(0) * r_eff_origin
  int mu_origin = 0;
  std::size_t ball_size = 0;
  std::size_t ur_size = 0;
  std::int64_t ur_intrinsic_radius = 0;
};

ResistanceReport resistance_profile(const SpanningTree& tree, std::int64_t r);

}  // namespace ust
