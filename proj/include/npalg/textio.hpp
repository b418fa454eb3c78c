#pragma once

#include <map>
#include <string>

#include "npalg/fo.hpp"
#include "npalg/guess.hpp"

namespace npalg::textio {

/// A database loaded from a directory of CSV files, plus the optional
/// per-table key columns declared in the directory's manifest.
struct Instance {
  Database db;
  std::map<std::string, std::string> keys;  // table name -> key column
};

/// Loads one relation per `*.csv` file in the directory (relation name =
/// upper-cased file stem). The header names the columns; a `:int` or `:str`
/// suffix fixes the column type (default `:str`, stored as an uninterpreted
/// symbol). Fields follow RFC-style quoting: a quoted field may contain
/// commas, newlines, and doubled quotes. An optional `manifest.json`
/// (`{"keys": {"TABLE": "column"}}`) declares key columns, validated against
/// the loaded schemas. Errors name the file and line.
Instance load_instance(const std::string& dir);

/// Writes one CSV per relation into the directory (created if absent), in
/// the format load_instance reads back; loading the result yields an equal
/// database. Integer columns get `:int`; symbol columns get `:str`; mixed or
/// text-valued columns are an error.
void save_database(const Database& db, const std::string& dir);

/// Parses one CSV text under a given relation name (the file-level loader's
/// core, exposed for testing and in-memory use).
Relation parse_csv(const std::string& text, const std::string& what);

std::string to_csv(const Relation& r);

/// S-expression query text, the on-disk form of a query:
///   (query (guess Q 1) ... (let NAME <expr>) ... (fail <expr>))
/// with expressions
///   (base N) (guessed Q) (dom k) (select <pred> <e>)
///   (project (<attrs>) <e>) (project! (<attrs>) <e>)   [! = plumbing]
///   (product <l> <r>) (join <pred> <l> <r>) (union <l> <r>)
///   (difference <l> <r>) (symdiff <l> <r>) (divide <l> <r>)
///   (rename (<names>) <e>) (let NAME <bound> <body>)
/// predicates
///   (= <t> <t>) (!= ...) (< ...) (<= ...) (> ...) (>= ...)
///   (and <p> <p>) (or <p> <p>) (not <p>)
/// and terms: a bare token is an attribute reference; constants are
/// (int N), (sym NAME), (text "..."), with standard backslash escapes.
NpAlgQuery parse_query(const std::string& text);

std::string print_query(const NpAlgQuery& q);

/// Single-expression forms, used inside the query format and standalone.
ExprPtr parse_expr_text(const std::string& text);
std::string print_expr(const ExprPtr& e);

/// Existential second-order sentence text:
///   (eso (guess S 1) ... (forall <vars>) (exists <vars>) (matrix <formula>))
/// where (forall)/(exists) may list zero variables or be omitted, and the
/// matrix formula uses (atom P <terms>), (= <t> <t>), (and ...), (or ...),
/// (not ...); a bare term token is a variable, constants as in queries.
EsoSentence parse_eso(const std::string& text);
std::string print_eso(const EsoSentence& s);

}  // namespace npalg::textio
