#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "npalg/constant.hpp"

namespace npalg {

/// A relation: an ordered attribute list plus a duplicate-free set of
/// equal-arity tuples. Tuples iterate in the total Constant order, so every
/// traversal of the same relation is deterministic.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::vector<std::string> schema) : schema_(std::move(schema)) {}
  Relation(std::vector<std::string> schema, std::vector<Tuple> tuples)
      : schema_(std::move(schema)) {
    for (auto& t : tuples) insert(std::move(t));
  }

  std::size_t arity() const { return schema_.size(); }
  const std::vector<std::string>& schema() const { return schema_; }
  const std::set<Tuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }
  bool contains(const Tuple& t) const { return tuples_.count(t) > 0; }

  void insert(Tuple t) {
    if (t.size() != schema_.size())
      throw Error("tuple arity " + std::to_string(t.size()) + " does not match schema arity " +
                  std::to_string(schema_.size()));
    tuples_.insert(std::move(t));
  }

  /// Resolves an attribute reference to a 0-based column index. Accepts a
  /// 1-based positional index "$i", an exact schema name, or an unqualified
  /// name matching the part after the qualifying dot. Ambiguity is an error.
  std::size_t resolve(const std::string& attr) const {
    if (!attr.empty() && attr[0] == '$') {
      std::size_t i = 0;
      try {
        i = static_cast<std::size_t>(std::stoull(attr.substr(1)));
      } catch (const std::exception&) {
        throw Error("bad positional attribute: " + attr);
      }
      if (i < 1 || i > schema_.size()) throw Error("positional attribute out of range: " + attr);
      return i - 1;
    }
    std::size_t found = schema_.size();
    int matches = 0;
    for (std::size_t i = 0; i < schema_.size(); ++i) {
      if (schema_[i] == attr) {
        found = i;
        ++matches;
      }
    }
    if (matches == 1) return found;
    if (matches > 1) throw Error("ambiguous attribute name: " + attr);
    // Suffix match against qualified names.
    matches = 0;
    for (std::size_t i = 0; i < schema_.size(); ++i) {
      const std::string& s = schema_[i];
      auto dot = s.rfind('.');
      if (dot != std::string::npos && s.substr(dot + 1) == attr) {
        found = i;
        ++matches;
      }
    }
    if (matches == 1) return found;
    if (matches > 1) throw Error("ambiguous attribute name: " + attr);
    // A qualified reference may address a relation whose schema carries the
    // bare names (the qualifier being the operand's alias).
    auto adot = attr.rfind('.');
    if (adot != std::string::npos) return resolve(attr.substr(adot + 1));
    throw Error("unknown attribute: " + attr);
  }

  bool operator==(const Relation& o) const { return tuples_ == o.tuples_; }

 private:
  std::vector<std::string> schema_;
  std::set<Tuple> tuples_;
};

/// An immutable database: named base relations plus the active domain DOM,
/// the unary relation of all constants occurring in any base relation.
class Database {
 public:
  Database() : dom_({"$1"}) {}
  explicit Database(std::map<std::string, Relation> relations)
      : relations_(std::move(relations)), dom_({"$1"}) {
    for (const auto& [name, rel] : relations_)
      for (const auto& t : rel.tuples())
        for (const auto& c : t) dom_.insert({c});
  }

  const std::map<std::string, Relation>& relations() const { return relations_; }
  bool has(const std::string& name) const { return relations_.count(name) > 0; }
  const Relation& relation(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw Error("unknown relation: " + name);
    return it->second;
  }
  const Relation& dom() const { return dom_; }

 private:
  std::map<std::string, Relation> relations_;
  Relation dom_;
};

inline const Relation& active_domain(const Database& db) { return db.dom(); }

}  // namespace npalg
