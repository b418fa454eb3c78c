#include "npalg/circuit.hpp"

#include "npalg/sugar.hpp"

namespace npalg {

namespace {

std::string gate_name(int i) { return "G" + std::to_string(i); }

ExprPtr dom01() {
  std::vector<PredPtr> ps;
  for (const char* k : {"AND", "OR", "NOT", "IN"})
    ps.push_back(pred::cmp_const("$1", CmpOp::Ne, Constant::symbol(k)));
  return expr::select(pred::all_of(std::move(ps)), expr::dom());
}

ExprPtr dom01_power(int k) {
  ExprPtr e = dom01();
  for (int i = 1; i < k; ++i) e = expr::product(std::move(e), dom01());
  return e;
}

ExprPtr arity1(ExprPtr e) { return expr::project({"$1"}, std::move(e)); }

}  // namespace

void Circuit::validate() const {
  if (n < 1) throw Error("circuit: n must be positive");
  if (gates.empty()) throw Error("circuit: no gates");
  int ins = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    int idx = static_cast<int>(i) + 1;
    switch (g.kind) {
      case Gate::Kind::In:
        if (g.b != 0 || g.c != 0) throw Error("circuit: input gate " + std::to_string(idx) +
                                              " must have zero operands");
        ++ins;
        break;
      case Gate::Kind::Not:
        if (g.b != g.c) throw Error("circuit: not gate " + std::to_string(idx) +
                                    " must repeat its operand");
        [[fallthrough]];
      case Gate::Kind::And:
      case Gate::Kind::Or:
        if (g.b < 1 || g.b >= idx || g.c < 1 || g.c >= idx)
          throw Error("circuit: gate " + std::to_string(idx) + " reads a non-earlier gate");
        break;
    }
  }
  if (ins != 2 * n)
    throw Error("circuit: expected " + std::to_string(2 * n) + " input gates, found " +
                std::to_string(ins));
}

bool eval_circuit(const Circuit& c, const std::vector<bool>& bits) {
  c.validate();
  if (bits.size() != static_cast<std::size_t>(2 * c.n))
    throw Error("circuit: expected " + std::to_string(2 * c.n) + " input bits");
  std::vector<bool> val(c.gates.size());
  int next_input = 0;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case Gate::Kind::In:
        val[i] = bits[next_input++];
        break;
      case Gate::Kind::And:
        val[i] = val[g.b - 1] && val[g.c - 1];
        break;
      case Gate::Kind::Or:
        val[i] = val[g.b - 1] || val[g.c - 1];
        break;
      case Gate::Kind::Not:
        val[i] = !val[g.b - 1];
        break;
    }
  }
  return val.back();
}

Database succinct_db() {
  std::map<std::string, Relation> rels;
  Relation bits({"$1"});
  bits.insert({Constant::integer(0)});
  bits.insert({Constant::integer(1)});
  rels["BITS"] = std::move(bits);
  Relation kinds({"$1"});
  for (const char* k : {"AND", "OR", "NOT", "IN"}) kinds.insert({Constant::symbol(k)});
  rels["GATEKINDS"] = std::move(kinds);
  return Database(std::move(rels));
}

std::vector<Tuple> bit_universe(int k) {
  if (k < 0 || k > 20) throw Error("bit universe too wide");
  std::vector<Tuple> out;
  for (std::uint64_t p = 0; p < (1ull << k); ++p) {
    Tuple t;
    for (int i = k - 1; i >= 0; --i) t.push_back(Constant::integer((p >> i) & 1));
    out.push_back(std::move(t));
  }
  return out;
}

std::map<std::string, Relation> forced_gate_extension(const Circuit& c) {
  c.validate();
  int w = 2 * c.n;
  if (w > 20) throw Error("circuit too wide for a truth-table sweep");

  std::vector<std::string> schema;
  for (int i = 1; i <= w; ++i) schema.push_back("$" + std::to_string(i));
  std::map<std::string, Relation> out;
  for (std::size_t i = 0; i < c.gates.size(); ++i) out[gate_name(int(i) + 1)] = Relation(schema);

  for (std::uint64_t p = 0; p < (1ull << w); ++p) {
    std::vector<bool> bits(w);
    Tuple t;
    for (int i = 0; i < w; ++i) {
      bits[i] = (p >> (w - 1 - i)) & 1;
      t.push_back(Constant::integer(bits[i] ? 1 : 0));
    }
    // One pass computing every gate, not just the output.
    std::vector<bool> val(c.gates.size());
    int next_input = 0;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
      const Gate& g = c.gates[i];
      switch (g.kind) {
        case Gate::Kind::In: val[i] = bits[next_input++]; break;
        case Gate::Kind::And: val[i] = val[g.b - 1] && val[g.c - 1]; break;
        case Gate::Kind::Or: val[i] = val[g.b - 1] || val[g.c - 1]; break;
        case Gate::Kind::Not: val[i] = !val[g.b - 1]; break;
      }
      if (val[i]) out[gate_name(int(i) + 1)].insert(t);
    }
  }
  return out;
}

NpAlgQuery gen_succinct_3col(const Circuit& c) {
  c.validate();
  int w = 2 * c.n;
  int k = static_cast<int>(c.gates.size());

  NpAlgQuery q;
  for (int i = 1; i <= k; ++i) q.guesses.push_back({gate_name(i), w});
  for (int i = 1; i <= 3; ++i) q.guesses.push_back({"COL" + std::to_string(i), c.n});

  // Per-gate agreement between the guessed relation and its definition.
  std::vector<ExprPtr> circuit_terms;
  int next_input = 0;
  for (int i = 1; i <= k; ++i) {
    const Gate& g = c.gates[i - 1];
    ExprPtr gi = expr::guessed(gate_name(i));
    ExprPtr expected;
    switch (g.kind) {
      case Gate::Kind::And:
        expected = expr::intersect(expr::guessed(gate_name(g.b)), expr::guessed(gate_name(g.c)));
        break;
      case Gate::Kind::Or:
        expected = expr::set_union(expr::guessed(gate_name(g.b)), expr::guessed(gate_name(g.c)));
        break;
      case Gate::Kind::Not:
        expected = expr::difference(dom01_power(w), expr::guessed(gate_name(g.b)));
        break;
      case Gate::Kind::In: {
        ++next_input;
        expected = expr::select(
            pred::cmp_const("$" + std::to_string(next_input), CmpOp::Eq, Constant::integer(1)),
            dom01_power(w));
        break;
      }
    }
    circuit_terms.push_back(arity1(expr::sym_diff(std::move(gi), std::move(expected))));
  }

  std::vector<ExprPtr> cols = {expr::guessed("COL1"), expr::guessed("COL2"),
                               expr::guessed("COL3")};
  ExprPtr fail_partition = sugar::fail_partition(dom01_power(c.n), cols, c.n);

  // An edge inside one color class is a coloring failure; the output gate's
  // relation is the edge relation.
  std::vector<ExprPtr> color_terms;
  for (const auto& col : cols)
    color_terms.push_back(
        arity1(expr::intersect(expr::product(col, col), expr::guessed(gate_name(k)))));

  q.lets.emplace_back("FAIL_CIRCUIT", expr::union_all(std::move(circuit_terms)));
  q.lets.emplace_back("FAIL_PARTITION", std::move(fail_partition));
  q.lets.emplace_back("FAIL_COLORING", expr::union_all(std::move(color_terms)));
  q.fail = expr::union_all({expr::base("FAIL_CIRCUIT"), expr::base("FAIL_PARTITION"),
                            expr::base("FAIL_COLORING")});
  return q;
}

}  // namespace npalg
