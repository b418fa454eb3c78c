#include "npalg/sugar.hpp"

namespace npalg {
namespace sugar {

namespace {

std::string col(int i) { return "$" + std::to_string(i); }

std::vector<std::string> cols(int lo, int hi) {
  std::vector<std::string> out;
  for (int i = lo; i <= hi; ++i) out.push_back(col(i));
  return out;
}

ExprPtr arity1(ExprPtr e) { return expr::project({"$1"}, std::move(e)); }

// Join condition: left columns [l0..l0+k) equal right columns [r0..r0+k).
PredPtr equal_block(int l0, int r0, int k) {
  std::vector<PredPtr> ps;
  for (int i = 0; i < k; ++i) ps.push_back(pred::cmp_attrs(col(l0 + i), CmpOp::Eq, col(r0 + i)));
  return pred::all_of(ps);
}

// Selection condition over a 2k-column relation: the two k-blocks are equal.
PredPtr blocks_equal(int k) {
  std::vector<PredPtr> ps;
  for (int i = 1; i <= k; ++i) ps.push_back(pred::cmp_attrs(col(i), CmpOp::Eq, col(k + i)));
  return pred::all_of(ps);
}

}  // namespace

ExprPtr complement(ExprPtr r, int k, std::vector<std::string> names) {
  auto diff = expr::difference(expr::dom_power(k), std::move(r));
  if (names.empty()) return diff;
  return expr::rename(std::move(names), diff);
}

ExprPtr empty_test(ExprPtr r) {
  return expr::difference(expr::dom(),
                          expr::project({"$1"}, expr::product(expr::dom(), std::move(r))));
}

ExprPtr fail_partition(ExprPtr n, std::vector<ExprPtr> parts, int k) {
  if (parts.empty()) throw Error("fail_partition: needs at least one part");
  std::vector<ExprPtr> terms;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (i != j) terms.push_back(arity1(expr::join(equal_block(1, 1, k), parts[i], parts[j])));
  terms.push_back(arity1(expr::sym_diff(std::move(n), expr::union_all(parts))));
  return expr::union_all(std::move(terms));
}

ExprPtr fail_function_family(FunctionKind kind, ExprPtr fun, ExprPtr dom_rel, ExprPtr range_rel,
                             int d, int r) {
  if (d < 1 || r < 1) throw Error("fail_function_family: arities must be >= 1");
  switch (kind) {
    case FunctionKind::Function: {
      auto in_dom = arity1(expr::difference(expr::project(cols(1, d), fun), std::move(dom_rel)));
      auto in_range =
          arity1(expr::difference(expr::project(cols(d + 1, d + r), fun), std::move(range_rel)));
      // Two tuples agreeing on the domain part but differing somewhere in the
      // range part witness that FUN is not mono-valued.
      std::vector<PredPtr> range_eq;
      for (int i = 0; i < r; ++i)
        range_eq.push_back(pred::cmp_attrs(col(d + 1 + i), CmpOp::Eq, col(d + 1 + i)));
      auto cond = pred::conj(equal_block(1, 1, d), pred::neg(pred::all_of(range_eq)));
      auto multi = arity1(expr::join(cond, fun, fun));
      return expr::set_union(expr::set_union(in_dom, in_range), multi);
    }
    case FunctionKind::Total:
      return arity1(expr::difference(std::move(dom_rel), expr::project(cols(1, d), fun)));
    case FunctionKind::Surjective:
      return arity1(expr::difference(std::move(range_rel), expr::project(cols(d + 1, d + r), fun)));
    case FunctionKind::Injective: {
      std::vector<PredPtr> dom_eq;
      for (int i = 0; i < d; ++i) dom_eq.push_back(pred::cmp_attrs(col(1 + i), CmpOp::Eq, col(1 + i)));
      auto cond = pred::conj(equal_block(d + 1, d + 1, r), pred::neg(pred::all_of(dom_eq)));
      return arity1(expr::join(cond, fun, fun));
    }
  }
  throw Error("fail_function_family: bad kind");
}

ExprPtr fail_size_cmp(SizeCmp kind, const std::string& aux, ExprPtr n, ExprPtr k, int arity_n,
                      int arity_k) {
  ExprPtr a = expr::guessed(aux);
  switch (kind) {
    case SizeCmp::Geq:
      // A partial surjective function n -> k exists iff |n| >= |k|.
      return expr::set_union(
          fail_function_family(FunctionKind::Function, a, n, k, arity_n, arity_k),
          fail_function_family(FunctionKind::Surjective, a, n, k, arity_n, arity_k));
    case SizeCmp::Leq:
      return fail_size_cmp(SizeCmp::Geq, aux, std::move(k), std::move(n), arity_k, arity_n);
    case SizeCmp::Eq:
      // A total bijective function n -> k exists iff |n| = |k|.
      return expr::union_all(
          {fail_function_family(FunctionKind::Function, a, n, k, arity_n, arity_k),
           fail_function_family(FunctionKind::Total, a, n, k, arity_n, arity_k),
           fail_function_family(FunctionKind::Injective, a, n, k, arity_n, arity_k),
           fail_function_family(FunctionKind::Surjective, a, n, k, arity_n, arity_k)});
  }
  throw Error("fail_size_cmp: bad kind");
}

ExprPtr fail_permutation(const std::string& perm, ExprPtr n, int k) {
  ExprPtr p = expr::guessed(perm);
  return expr::union_all({fail_function_family(FunctionKind::Function, p, n, n, k, k),
                          fail_function_family(FunctionKind::Total, p, n, n, k, k),
                          fail_function_family(FunctionKind::Injective, p, n, n, k, k),
                          fail_function_family(FunctionKind::Surjective, p, n, n, k, k)});
}

ExprPtr fail_successor(const std::string& succ, const std::string& aux_order, ExprPtr n, int k) {
  using namespace expr;
  ExprPtr s = guessed(succ);
  ExprPtr ord = guessed(aux_order);

  std::vector<ExprPtr> terms;
  // The order relates elements of n only.
  terms.push_back(arity1(difference(project(cols(1, k), ord), n)));
  terms.push_back(arity1(difference(project(cols(k + 1, 2 * k), ord), n)));
  // Irreflexive.
  terms.push_back(arity1(select(blocks_equal(k), ord)));
  // Total: every pair of distinct elements is ordered one way or the other.
  std::vector<std::string> swapped = cols(k + 1, 2 * k);
  auto lo = cols(1, k);
  swapped.insert(swapped.end(), lo.begin(), lo.end());
  auto inverse = project(swapped, ord);
  auto all_pairs = select(pred::neg(blocks_equal(k)), product(n, n));
  terms.push_back(arity1(difference(all_pairs, set_union(ord, inverse))));
  // Transitive; a cycle surfaces here as a reflexive composed pair.
  auto composed = join(equal_block(k + 1, 1, k), ord, ord);
  std::vector<std::string> outer = cols(1, k);
  auto hi = cols(3 * k + 1, 4 * k);
  outer.insert(outer.end(), hi.begin(), hi.end());
  auto two_step = project(outer, composed);
  terms.push_back(arity1(difference(two_step, ord)));
  // succ is exactly the covering relation of the order.
  terms.push_back(arity1(sym_diff(s, difference(ord, two_step))));

  return union_all(std::move(terms));
}

}  // namespace sugar
}  // namespace npalg
