#include "npalg/fixtures.hpp"

#include "npalg/sugar.hpp"

namespace npalg::fixtures {

namespace {

using expr::base;
using expr::guessed;

/// Arity-1 plumbing projection, so fail terms of different widths can be
/// unioned into one FAIL relation.
ExprPtr arity1(ExprPtr e) { return expr::project({"$1"}, std::move(e), true); }

}  // namespace

// Guess N ⊆ DOM and a size-witnessing partial surjection N -> K; FAIL is
// nonempty when |N| < |K| or some edge joins two guessed nodes.
NpAlgQuery independent_set_query() {
  NpAlgQuery q;
  q.guesses.push_back({"N", 1});
  q.guesses.push_back({"AUX", 2});
  ExprPtr size_term = sugar::fail_size_cmp(sugar::SizeCmp::Geq, "AUX", guessed("N"), base("K"), 1, 1);
  ExprPtr edge_inside = expr::project(
      {"$1"},
      expr::join(pred::conj(pred::cmp_attrs("$1", CmpOp::Eq, "$1"),
                            pred::cmp_attrs("$2", CmpOp::Eq, "$2")),
                 expr::product(guessed("N"), guessed("N")), base("EDGES")));
  q.fail = expr::set_union(size_term, edge_inside);
  return q;
}

// Guess N ⊆ DOM; FAIL is nonempty when |N| < |K| or some pair of distinct
// guessed nodes lands in the active complement of EDGES.
NpAlgQuery clique_query() {
  NpAlgQuery q;
  q.guesses.push_back({"N", 1});
  q.guesses.push_back({"AUX", 2});
  ExprPtr size_term = sugar::fail_size_cmp(sugar::SizeCmp::Geq, "AUX", guessed("N"), base("K"), 1, 1);
  ExprPtr non_edge = arity1(
      expr::join(pred::conj(pred::cmp_attrs("$1", CmpOp::Eq, "$1"),
                            pred::cmp_attrs("$2", CmpOp::Eq, "$2")),
                 expr::select(pred::cmp_attrs("$1", CmpOp::Ne, "$2"),
                              expr::product(guessed("N"), guessed("N"))),
                 sugar::complement(base("EDGES"), 2)));
  q.fail = expr::set_union(size_term, non_edge);
  return q;
}

// Guess a successor relation SUCC (with its ordering witness ORD) over the
// nodes; FAIL additionally requires SUCC ⊆ EDGES, so a solution is a
// traversal touching every node exactly once.
NpAlgQuery hamiltonian_path_query() {
  NpAlgQuery q;
  q.guesses.push_back({"SUCC", 2});
  q.guesses.push_back({"ORD", 2});
  ExprPtr succ_term = sugar::fail_successor("SUCC", "ORD", base("NODES"), 1);
  ExprPtr in_graph = arity1(expr::difference(guessed("SUCC"), base("EDGES")));
  q.fail = expr::set_union(succ_term, in_graph);
  return q;
}

// Guess a transitively closed superset T of EDGES; some such T omits
// (from, to) iff `to` is unreachable from `from`. Recursion via guessing.
NpAlgQuery non_reachability_query(int from, int to) {
  NpAlgQuery q;
  q.guesses.push_back({"T", 2});
  ExprPtr contains_edges = arity1(expr::difference(base("EDGES"), guessed("T")));
  ExprPtr composed = expr::project(
      {"$1", "$4"},
      expr::join(pred::cmp_attrs("$2", CmpOp::Eq, "$1"), guessed("T"), guessed("T")), true);
  ExprPtr closed = arity1(expr::difference(composed, guessed("T")));
  ExprPtr reaches = arity1(expr::select(
      pred::conj(pred::cmp_const("$1", CmpOp::Eq, Constant::integer(from)),
                 pred::cmp_const("$2", CmpOp::Eq, Constant::integer(to))),
      guessed("T")));
  q.fail = expr::union_all({contains_edges, closed, reaches});
  return q;
}

// Clauses as POS(clause, var) / NEG(clause, var) over CLAUSES and VARS;
// guess the set T of true variables; FAIL lists the unsatisfied clauses.
NpAlgQuery sat_query() {
  NpAlgQuery q;
  q.guesses.push_back({"T", 1});
  ExprPtr pos_sat = expr::project(
      {"$1"}, expr::join(pred::cmp_attrs("$2", CmpOp::Eq, "$1"), base("POS"), guessed("T")));
  ExprPtr neg_sat = expr::project(
      {"$1"}, expr::join(pred::cmp_attrs("$2", CmpOp::Eq, "$1"), base("NEG"),
                         expr::difference(expr::dom(), guessed("T"))));
  q.fail = expr::difference(base("CLAUSES"), expr::set_union(pos_sat, neg_sat));
  return q;
}

// |DOM| is even iff DOM admits a perfect matching: guess a pairing P that is
// a total single-valued relation on DOM, irreflexive, and symmetric.
NpAlgQuery evenness_query() {
  NpAlgQuery q;
  q.guesses.push_back({"P", 1 + 1});
  ExprPtr single_valued = sugar::fail_function_family(sugar::FunctionKind::Function, guessed("P"),
                                                      expr::dom(), expr::dom(), 1, 1);
  ExprPtr total = sugar::fail_function_family(sugar::FunctionKind::Total, guessed("P"),
                                              expr::dom(), expr::dom(), 1, 1);
  ExprPtr irreflexive =
      arity1(expr::select(pred::cmp_attrs("$1", CmpOp::Eq, "$2"), guessed("P")));
  ExprPtr symmetric = arity1(
      expr::difference(guessed("P"), expr::project({"$2", "$1"}, guessed("P"), true)));
  q.fail = expr::union_all({single_valued, total, irreflexive, symmetric});
  return q;
}

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all = {
      {"coloring-paper-3", "corpus/coloring-paper-3/query.nq", "corpus/coloring-paper-3/data",
       true, "corpus/coloring-paper-3/witness.json", false},
      {"independent-set-k2", "corpus/independent-set-k2/query.nq",
       "corpus/independent-set-k2/data", true, "", false},
      {"independent-set-k2-triangle", "corpus/independent-set-k2/query.nq",
       "corpus/independent-set-k2-triangle/data", false, "", false},
      {"clique-k3-triangle", "corpus/clique-k3-triangle/query.nq",
       "corpus/clique-k3-triangle/data", true, "", false},
      {"hamiltonian-path", "corpus/hamiltonian-path/query.nq", "corpus/hamiltonian-path/data",
       true, "", false},
      {"non-reachability-yes", "corpus/non-reachability-yes/query.nq",
       "corpus/non-reachability-yes/data", true, "", false},
      {"non-reachability-no", "corpus/non-reachability-no/query.nq",
       "corpus/non-reachability-yes/data", false, "", false},
      {"two-coloring", "corpus/two-coloring/query.nq", "corpus/coloring-paper-3/data", true, "",
       true},
      {"two-coloring-triangle", "corpus/two-coloring/query.nq",
       "corpus/independent-set-k2-triangle/data", false, "", true},
      {"two-partition-cliques", "corpus/two-partition-cliques/query.nq",
       "corpus/two-partition-cliques/data", true, "", true},
      {"disconnectivity", "corpus/disconnectivity/query.nq", "corpus/disconnectivity/data", true,
       "", true},
      {"sat-minimal", "corpus/sat-minimal/query.nq", "corpus/sat-minimal/data", true, "", false},
      {"evenness-minimal", "corpus/evenness-minimal/query.nq", "corpus/evenness-minimal/data",
       true, "", false},
      {"coloring-consql", "graph_coloring.consql", "corpus/coloring-consql/data", true, "",
       false},
      {"timetabling-consql", "university_timetabling.consql", "corpus/timetabling-consql/data",
       true, "", false},
      {"aircraft-consql", "aircraft_landing.consql", "corpus/aircraft-consql/data", true, "",
       false},
  };
  return all;
}

}  // namespace npalg::fixtures
