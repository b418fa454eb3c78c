#pragma once

#include "npalg/sugar.hpp"

namespace npalg::samples {

/// k-coloring: k guessed color classes partitioning the nodes with no edge
/// inside one class.
inline NpAlgQuery k_coloring(int k, const std::string& nodes = "NODES",
                             const std::string& edges = "EDGES") {
  NpAlgQuery q;
  std::vector<ExprPtr> parts;
  for (int i = 1; i <= k; ++i) {
    q.guesses.push_back({"Q" + std::to_string(i), 1});
    parts.push_back(expr::guessed("Q" + std::to_string(i)));
  }
  std::vector<ExprPtr> color_terms;
  for (const auto& p : parts)
    color_terms.push_back(
        expr::project({"$1"}, expr::intersect(expr::product(p, p), expr::base(edges))));
  q.lets.emplace_back("FAIL_PARTITION", sugar::fail_partition(expr::base(nodes), parts, 1));
  q.lets.emplace_back("FAIL_COLORING", expr::union_all(std::move(color_terms)));
  q.fail = expr::set_union(expr::base("FAIL_PARTITION"), expr::base("FAIL_COLORING"));
  return q;
}

/// 2-coloring in the single-guess polynomial shape: every pair is either a
/// non-edge or crosses between C and its complement.
inline NpAlgQuery two_coloring(const std::string& edges = "EDGES") {
  using namespace expr;
  NpAlgQuery q;
  q.guesses = {{"C", 1}};
  auto c = guessed("C");
  auto phi = union_all({sugar::complement(base(edges), 2),
                        product(c, sugar::complement(c, 1)),
                        product(sugar::complement(c, 1), c)});
  q.fail = difference(product(dom(), dom()), std::move(phi));
  return q;
}

/// 2-partition into cliques, same single-guess shape: every pair either
/// crosses the partition or is an edge.
inline NpAlgQuery two_partition_cliques(const std::string& edges = "EDGES") {
  using namespace expr;
  NpAlgQuery q;
  q.guesses = {{"P", 1}};
  auto p = guessed("P");
  auto phi = union_all({product(sugar::complement(p, 1), p),
                        product(p, sugar::complement(p, 1)), base(edges)});
  q.fail = difference(product(dom(), dom()), std::move(phi));
  return q;
}

/// Graph disconnectivity in the division shape: some pair (a in Q, b not in
/// Q) exists such that no edge crosses between Q and its complement.
inline NpAlgQuery disconnectivity(const std::string& edges = "EDGES") {
  using namespace expr;
  NpAlgQuery q;
  q.guesses = {{"Q", 1}};
  auto g = guessed("Q");
  auto comp = sugar::complement(g, 1);
  auto crossing = intersect(
      set_union(product(g, comp), product(comp, g)), base(edges));
  auto phi = product(product(g, comp),
                     difference(product(dom(), dom()), std::move(crossing)));
  auto x = divide(std::move(phi), rename({"Y1", "Y2"}, product(dom(), dom())));
  q.lets.emplace_back("X", std::move(x));
  q.fail = sugar::empty_test(base("X"));
  return q;
}

}  // namespace npalg::samples
