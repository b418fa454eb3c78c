#pragma once

#include "npalg/algebra.hpp"

namespace npalg {
namespace sugar {

/// The active complement: rho(DOM^k - r), columns renamed like r's.
/// `names` are the column names to restore (r's schema, length k).
ExprPtr complement(ExprPtr r, int k, std::vector<std::string> names = {});

/// DOM - pi_$1(DOM x r): empty iff r is nonempty (and vice versa).
ExprPtr empty_test(ExprPtr r);

/// Empty iff the parts are a partition of n (pairwise disjoint and covering).
/// All operands have arity k; the result has arity 1.
ExprPtr fail_partition(ExprPtr n, std::vector<ExprPtr> parts, int k);

enum class FunctionKind { Function, Total, Injective, Surjective };

/// Empty iff `fun` (arity d+r) is, respectively, a function / total /
/// injective / surjective relation from tuples of `dom` (arity d) to tuples
/// of `range` (arity r). Result arity 1.
ExprPtr fail_function_family(FunctionKind kind, ExprPtr fun, ExprPtr dom_rel, ExprPtr range_rel,
                             int d, int r);

enum class SizeCmp { Geq, Leq, Eq };

/// Empty for some extension of the auxiliary guessed relation `aux` iff
/// |n| >= |k| (resp. <=, =). For Geq, aux has arity arity(n)+arity(k) and
/// encodes a partial surjection n -> k; for Leq the roles swap (aux arity
/// arity(k)+arity(n)); Eq demands a total bijection n -> k.
ExprPtr fail_size_cmp(SizeCmp kind, const std::string& aux, ExprPtr n, ExprPtr k, int arity_n,
                      int arity_k);

/// Empty for some extension of the auxiliary guessed order relation
/// `aux_order` (arity 2k) iff `succ` (arity 2k) encodes a successor relation
/// on the elements of n (arity k): a Hamiltonian-path-style 1-1
/// correspondence with [1,|n|]. The auxiliary relation is constrained to be
/// a strict total order on n whose covering relation equals succ.
ExprPtr fail_successor(const std::string& succ, const std::string& aux_order, ExprPtr n, int k);

/// Empty iff `perm` (arity 2k) is a permutation of the elements of n (arity
/// k), i.e. a total bijective function n -> n ordered by its first k columns.
ExprPtr fail_permutation(const std::string& perm, ExprPtr n, int k);

}  // namespace sugar
}  // namespace npalg
