#pragma once

#include "npalg/guess.hpp"

namespace npalg {

struct Gate {
  enum class Kind { In, And, Or, Not };
  Kind kind = Kind::In;
  int b = 0, c = 0;  // 1-based indices of earlier gates; 0 for In
};

/// A boolean circuit over 2n input bits: an ordered gate list where every
/// gate reads strictly earlier gates; the last gate is the output. It
/// presents a graph on n-bit nodes: (u, v) is an edge iff the circuit
/// outputs 1 on u's bits followed by v's bits.
struct Circuit {
  int n = 0;  // node-label width; the circuit has 2n In gates
  std::vector<Gate> gates;

  /// Throws on malformed circuits: wrong In-gate count, forward/self
  /// references, or bad operand conventions (Not has b = c, In has b = c = 0).
  void validate() const;
};

/// Value of the output gate on the given input bits (length 2n).
bool eval_circuit(const Circuit& c, const std::vector<bool>& bits);

/// The database the generated query runs against: constants 0, 1 and the
/// four gate-kind symbols, so DOM01 (DOM minus the gate kinds) is {0, 1}.
Database succinct_db();

/// For every gate i, the relation of all 2n-bit tuples making gate i output
/// 1, computed by a truth-table sweep. Keys "G1".."Gk". Throws when 2n > 20.
std::map<std::string, Relation> forced_gate_extension(const Circuit& c);

/// The 3-coloring query over the circuit-presented graph: guesses G1..Gk
/// (arity 2n) and COL1..COL3 (arity n); FAIL is bound as lets FAIL_CIRCUIT,
/// FAIL_PARTITION and FAIL_COLORING with FAIL their union. FAIL evaluates
/// empty for some witness iff the presented graph is 3-colorable.
NpAlgQuery gen_succinct_3col(const Circuit& c);

/// All k-bit 0/1 tuples in sorted order: the enumeration universe for the
/// coloring guesses (any satisfying coloring lies within the bit tuples).
std::vector<Tuple> bit_universe(int k);

}  // namespace npalg
