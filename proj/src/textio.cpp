#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "npalg/textio.hpp"

namespace npalg::textio {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

struct CsvReader {
  const std::string& text;
  std::string what;
  std::size_t pos = 0;
  int line = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(what + ", line " + std::to_string(line) + ": " + msg);
  }

  bool done() const { return pos >= text.size(); }

  /// One record as raw fields; handles quoted fields spanning lines.
  std::vector<std::string> record() {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (;; ++pos) {
      if (pos >= text.size()) {
        if (quoted) fail("unterminated quoted field");
        fields.push_back(field);
        return fields;
      }
      char c = text[pos];
      if (quoted) {
        if (c == '"') {
          if (pos + 1 < text.size() && text[pos + 1] == '"') {
            field += '"';
            ++pos;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
        }
      } else if (c == '"') {
        if (!field.empty()) fail("quote inside an unquoted field");
        quoted = true;
      } else if (c == ',') {
        fields.push_back(field);
        field.clear();
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
        ++pos;
        ++line;
        fields.push_back(field);
        return fields;
      } else {
        field += c;
      }
    }
  }
};

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos || s.empty();
}

std::string csv_field(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Relation parse_csv(const std::string& text, const std::string& what) {
  CsvReader r{text, what};
  if (r.done()) throw Error(what + ": missing header");
  int header_line = r.line;
  std::vector<std::string> header = r.record();
  std::vector<std::string> cols;
  std::vector<bool> is_int;
  for (const std::string& h : header) {
    std::string name = h;
    bool integer = false;
    auto colon = h.rfind(':');
    if (colon != std::string::npos) {
      std::string suffix = h.substr(colon + 1);
      name = h.substr(0, colon);
      if (suffix == "int")
        integer = true;
      else if (suffix != "str")
        throw Error(what + ", line " + std::to_string(header_line) + ": bad type suffix \"" +
                    suffix + "\" (expected int or str)");
    }
    if (name.empty())
      throw Error(what + ", line " + std::to_string(header_line) + ": empty column name");
    cols.push_back(name);
    is_int.push_back(integer);
  }
  Relation rel(cols);
  while (!r.done()) {
    int row_line = r.line;
    std::vector<std::string> fields = r.record();
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != cols.size())
      throw Error(what + ", line " + std::to_string(row_line) + ": expected " +
                  std::to_string(cols.size()) + " fields, got " + std::to_string(fields.size()));
    Tuple t;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (is_int[i]) {
        try {
          std::size_t used = 0;
          std::int64_t v = std::stoll(fields[i], &used);
          if (used != fields[i].size()) throw std::invalid_argument("");
          t.push_back(Constant::integer(v));
        } catch (const std::exception&) {
          throw Error(what + ", line " + std::to_string(row_line) + ": \"" + fields[i] +
                      "\" is not an integer (column " + cols[i] + ")");
        }
      } else {
        t.push_back(Constant::symbol(fields[i]));
      }
    }
    rel.insert(std::move(t));
  }
  return rel;
}

std::string to_csv(const Relation& r) {
  // Column types: all-int columns get :int, otherwise every value must be a
  // symbol (text constants have no CSV representation).
  std::vector<bool> is_int(r.arity(), true);
  for (const auto& t : r.tuples())
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i].kind() == Constant::Kind::Text)
        throw Error("text constant has no CSV representation: " + t[i].to_string());
      if (!t[i].is_int()) is_int[i] = false;
    }
  for (const auto& t : r.tuples())
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i].is_int() && !is_int[i])
        throw Error("column " + r.schema()[i] + " mixes integers and symbols");
  std::ostringstream out;
  for (std::size_t i = 0; i < r.arity(); ++i) {
    if (i) out << ',';
    out << csv_field(r.schema()[i]) << (is_int[i] ? ":int" : ":str");
  }
  out << '\n';
  for (const auto& t : r.tuples()) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out << ',';
      out << csv_field(t[i].is_int() ? std::to_string(t[i].as_int()) : t[i].as_string());
    }
    out << '\n';
  }
  return out.str();
}

Instance load_instance(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::map<std::string, Relation> rels;
  Instance inst;
  for (const auto& path : files) {
    if (path.filename() == "manifest.json") continue;
    if (path.extension() != ".csv") continue;
    std::string name = path.stem().string();
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (rels.count(name)) throw Error("duplicate relation name: " + name);
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    rels[name] = parse_csv(ss.str(), path.filename().string());
  }
  inst.db = Database(std::move(rels));

  fs::path manifest = fs::path(dir) / "manifest.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    json m;
    try {
      m = json::parse(in);
    } catch (const json::exception& e) {
      throw Error("manifest.json: " + std::string(e.what()));
    }
    if (m.contains("keys")) {
      for (const auto& [table, col] : m["keys"].items()) {
        if (!col.is_string()) throw Error("manifest.json: key column for " + table +
                                          " must be a string");
        if (!inst.db.has(table)) throw Error("manifest.json: unknown table " + table);
        inst.db.relation(table).resolve(col.get<std::string>());  // throws if absent
        inst.keys[table] = col.get<std::string>();
      }
    }
  }
  return inst;
}

void save_database(const Database& db, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& [name, rel] : db.relations()) {
    std::string stem = name;
    std::transform(stem.begin(), stem.end(), stem.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    std::ofstream out(fs::path(dir) / (stem + ".csv"));
    out << to_csv(rel);
    if (!out) throw Error("cannot write " + stem + ".csv in " + dir);
  }
}

// ---------------------------------------------------------------------------
// S-expression query format
// ---------------------------------------------------------------------------

namespace {

struct Sexp {
  bool is_atom = false;
  bool is_string = false;  // double-quoted atom
  std::string atom;
  std::vector<Sexp> items;
};

struct SexpParser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("query text: " + msg + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == ';') {  // line comment
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  bool done() {
    skip_ws();
    return pos >= text.size();
  }

  Sexp next() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      Sexp s;
      for (;;) {
        skip_ws();
        if (pos >= text.size()) fail("unterminated list");
        if (text[pos] == ')') {
          ++pos;
          return s;
        }
        s.items.push_back(next());
      }
    }
    if (c == ')') fail("unexpected )");
    Sexp s;
    s.is_atom = true;
    if (c == '"') {
      s.is_string = true;
      ++pos;
      while (pos < text.size() && text[pos] != '"') {
        if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
        s.atom += text[pos++];
      }
      if (pos >= text.size()) fail("unterminated string");
      ++pos;
      return s;
    }
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != '"')
      s.atom += text[pos++];
    return s;
  }
};

[[noreturn]] void bad(const std::string& msg) { throw Error("query text: " + msg); }

const std::string& head(const Sexp& s) {
  if (s.is_atom || s.items.empty() || !s.items[0].is_atom) bad("expected a tagged list");
  return s.items[0].atom;
}

const Sexp& arg(const Sexp& s, std::size_t i) {
  if (i >= s.items.size()) bad("(" + head(s) + " ...): missing operand");
  return s.items[i];
}

void expect_arity(const Sexp& s, std::size_t n) {
  if (s.items.size() != n + 1)
    bad("(" + head(s) + " ...): expected " + std::to_string(n) + " operands, got " +
        std::to_string(s.items.size() - 1));
}

std::string atom_of(const Sexp& s, const std::string& what) {
  if (!s.is_atom || s.is_string) bad("expected " + what);
  return s.atom;
}

int int_of(const Sexp& s, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(atom_of(s, what), &used);
    if (used != s.atom.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    bad("expected an integer for " + what);
  }
}

PredTerm parse_term(const Sexp& s) {
  if (s.is_atom) {
    if (s.is_string) bad("a bare string is not a term; use (text \"...\")");
    return PredTerm::attribute(s.atom);
  }
  const std::string& h = head(s);
  expect_arity(s, 1);
  if (h == "int") {
    try {
      return PredTerm::constant(Constant::integer(std::stoll(atom_of(arg(s, 1), "integer"))));
    } catch (const std::exception&) {
      bad("expected an integer after (int ...)");
    }
  }
  if (h == "sym") return PredTerm::constant(Constant::symbol(atom_of(arg(s, 1), "symbol")));
  if (h == "text") {
    if (!arg(s, 1).is_string) bad("(text ...) takes a quoted string");
    return PredTerm::constant(Constant::text(arg(s, 1).atom));
  }
  bad("unknown term form: " + h);
}

std::optional<CmpOp> cmp_op(const std::string& t) {
  if (t == "=") return CmpOp::Eq;
  if (t == "!=") return CmpOp::Ne;
  if (t == "<") return CmpOp::Lt;
  if (t == "<=") return CmpOp::Le;
  if (t == ">") return CmpOp::Gt;
  if (t == ">=") return CmpOp::Ge;
  return std::nullopt;
}

PredPtr parse_pred(const Sexp& s) {
  const std::string& h = head(s);
  if (auto op = cmp_op(h)) {
    expect_arity(s, 2);
    return pred::cmp(parse_term(arg(s, 1)), *op, parse_term(arg(s, 2)));
  }
  if (h == "and" || h == "or") {
    expect_arity(s, 2);
    PredPtr a = parse_pred(arg(s, 1));
    PredPtr b = parse_pred(arg(s, 2));
    return h == "and" ? pred::conj(a, b) : pred::disj(a, b);
  }
  if (h == "not") {
    expect_arity(s, 1);
    return pred::neg(parse_pred(arg(s, 1)));
  }
  bad("unknown predicate form: " + h);
}

std::vector<std::string> parse_name_list(const Sexp& s, const std::string& what) {
  if (s.is_atom) bad("expected a list of " + what);
  std::vector<std::string> out;
  for (const auto& item : s.items) out.push_back(atom_of(item, what));
  return out;
}

ExprPtr parse_expr(const Sexp& s) {
  const std::string& h = head(s);
  if (h == "base") {
    expect_arity(s, 1);
    return expr::base(atom_of(arg(s, 1), "relation name"));
  }
  if (h == "guessed") {
    expect_arity(s, 1);
    return expr::guessed(atom_of(arg(s, 1), "guess name"));
  }
  if (h == "dom") {
    expect_arity(s, 1);
    return expr::dom_power(int_of(arg(s, 1), "domain power"));
  }
  if (h == "select") {
    expect_arity(s, 2);
    return expr::select(parse_pred(arg(s, 1)), parse_expr(arg(s, 2)));
  }
  if (h == "project" || h == "project!") {
    expect_arity(s, 2);
    return expr::project(parse_name_list(arg(s, 1), "attributes"), parse_expr(arg(s, 2)),
                         h == "project!");
  }
  if (h == "rename") {
    expect_arity(s, 2);
    return expr::rename(parse_name_list(arg(s, 1), "names"), parse_expr(arg(s, 2)));
  }
  if (h == "join") {
    expect_arity(s, 3);
    return expr::join(parse_pred(arg(s, 1)), parse_expr(arg(s, 2)), parse_expr(arg(s, 3)));
  }
  if (h == "let") {
    expect_arity(s, 3);
    return expr::let(atom_of(arg(s, 1), "binding name"), parse_expr(arg(s, 2)),
                     parse_expr(arg(s, 3)));
  }
  if (h == "product" || h == "union" || h == "difference" || h == "symdiff" || h == "divide") {
    expect_arity(s, 2);
    ExprPtr l = parse_expr(arg(s, 1));
    ExprPtr r = parse_expr(arg(s, 2));
    if (h == "product") return expr::product(l, r);
    if (h == "union") return expr::set_union(l, r);
    if (h == "difference") return expr::difference(l, r);
    if (h == "symdiff") return expr::sym_diff(l, r);
    return expr::divide(l, r);
  }
  bad("unknown expression form: " + h);
}

void print_term(std::ostream& out, const PredTerm& t) {
  if (t.is_attr) {
    out << t.attr;
    return;
  }
  switch (t.value.kind()) {
    case Constant::Kind::Int:
      out << "(int " << t.value.as_int() << ")";
      break;
    case Constant::Kind::Symbol:
      out << "(sym " << t.value.as_string() << ")";
      break;
    case Constant::Kind::Text: {
      out << "(text \"";
      for (char c : t.value.as_string()) {
        if (c == '"' || c == '\\') out << '\\';
        out << c;
      }
      out << "\")";
      break;
    }
  }
}

void print_pred(std::ostream& out, const PredPtr& p) {
  switch (p->kind) {
    case Pred::Kind::Cmp: {
      const char* ops[] = {"=", "!=", "<", "<=", ">", ">="};
      out << "(" << ops[static_cast<int>(p->op)] << " ";
      print_term(out, p->lhs);
      out << " ";
      print_term(out, p->rhs);
      out << ")";
      break;
    }
    case Pred::Kind::And:
    case Pred::Kind::Or:
      out << (p->kind == Pred::Kind::And ? "(and " : "(or ");
      print_pred(out, p->a);
      out << " ";
      print_pred(out, p->b);
      out << ")";
      break;
    case Pred::Kind::Not:
      out << "(not ";
      print_pred(out, p->a);
      out << ")";
      break;
  }
}

void print_names(std::ostream& out, const std::vector<std::string>& names) {
  out << "(";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out << " ";
    out << names[i];
  }
  out << ")";
}

void print_expr_rec(std::ostream& out, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Base:
      out << "(base " << e->name << ")";
      break;
    case Expr::Kind::Guessed:
      out << "(guessed " << e->name << ")";
      break;
    case Expr::Kind::DomPower:
      out << "(dom " << e->power << ")";
      break;
    case Expr::Kind::Select:
      out << "(select ";
      print_pred(out, e->predicate);
      out << " ";
      print_expr_rec(out, e->left);
      out << ")";
      break;
    case Expr::Kind::Project:
      out << (e->implicit_proj ? "(project! " : "(project ");
      print_names(out, e->attrs);
      out << " ";
      print_expr_rec(out, e->left);
      out << ")";
      break;
    case Expr::Kind::Rename:
      out << "(rename ";
      print_names(out, e->new_names);
      out << " ";
      print_expr_rec(out, e->left);
      out << ")";
      break;
    case Expr::Kind::Join:
      out << "(join ";
      print_pred(out, e->predicate);
      out << " ";
      print_expr_rec(out, e->left);
      out << " ";
      print_expr_rec(out, e->right);
      out << ")";
      break;
    case Expr::Kind::Let:
      out << "(let " << e->name << " ";
      print_expr_rec(out, e->left);
      out << " ";
      print_expr_rec(out, e->right);
      out << ")";
      break;
    default: {
      const char* tag = e->kind == Expr::Kind::Product      ? "product"
                        : e->kind == Expr::Kind::Union      ? "union"
                        : e->kind == Expr::Kind::Difference ? "difference"
                        : e->kind == Expr::Kind::SymDiff    ? "symdiff"
                                                            : "divide";
      out << "(" << tag << " ";
      print_expr_rec(out, e->left);
      out << " ";
      print_expr_rec(out, e->right);
      out << ")";
      break;
    }
  }
}

FoTerm parse_fo_term(const Sexp& s) {
  if (s.is_atom) {
    if (s.is_string) bad("a bare string is not a term; use (text \"...\")");
    return FoTerm::variable(s.atom);
  }
  PredTerm t = parse_term(s);
  return FoTerm::constant(t.value);
}

FoPtr parse_formula(const Sexp& s) {
  const std::string& h = head(s);
  if (h == "atom") {
    if (s.items.size() < 2) bad("(atom ...) needs a predicate name");
    std::vector<FoTerm> args;
    for (std::size_t i = 2; i < s.items.size(); ++i) args.push_back(parse_fo_term(s.items[i]));
    return fo::atom(atom_of(arg(s, 1), "predicate name"), std::move(args));
  }
  if (h == "=") {
    expect_arity(s, 2);
    return fo::equals(parse_fo_term(arg(s, 1)), parse_fo_term(arg(s, 2)));
  }
  if (h == "and" || h == "or") {
    expect_arity(s, 2);
    FoPtr a = parse_formula(arg(s, 1));
    FoPtr b = parse_formula(arg(s, 2));
    return h == "and" ? fo::conj(a, b) : fo::disj(a, b);
  }
  if (h == "not") {
    expect_arity(s, 1);
    return fo::neg(parse_formula(arg(s, 1)));
  }
  bad("unknown formula form: " + h);
}

void print_fo_term(std::ostream& out, const FoTerm& t) {
  if (t.is_var) {
    out << t.var;
    return;
  }
  PredTerm pt = PredTerm::constant(t.value);
  print_term(out, pt);
}

void print_formula(std::ostream& out, const FoPtr& f) {
  switch (f->kind) {
    case FoFormula::Kind::Atom:
      out << "(atom " << f->predicate;
      for (const auto& a : f->args) {
        out << " ";
        print_fo_term(out, a);
      }
      out << ")";
      break;
    case FoFormula::Kind::Equality:
      out << "(= ";
      print_fo_term(out, f->args[0]);
      out << " ";
      print_fo_term(out, f->args[1]);
      out << ")";
      break;
    case FoFormula::Kind::And:
    case FoFormula::Kind::Or:
      out << (f->kind == FoFormula::Kind::And ? "(and " : "(or ");
      print_formula(out, f->a);
      out << " ";
      print_formula(out, f->b);
      out << ")";
      break;
    case FoFormula::Kind::Not:
      out << "(not ";
      print_formula(out, f->a);
      out << ")";
      break;
  }
}

}  // namespace

EsoSentence parse_eso(const std::string& text) {
  SexpParser p{text};
  Sexp top = p.next();
  if (!p.done()) bad("trailing input after the sentence");
  if (head(top) != "eso") bad("expected (eso ...)");
  EsoSentence s;
  bool have_matrix = false;
  for (std::size_t i = 1; i < top.items.size(); ++i) {
    const Sexp& item = top.items[i];
    const std::string& h = head(item);
    if (h == "guess") {
      expect_arity(item, 2);
      GuessDecl g;
      g.name = atom_of(arg(item, 1), "guess name");
      g.arity = int_of(arg(item, 2), "guess arity");
      if (g.arity < 1) bad("guess arity must be positive");
      s.second_order.push_back(std::move(g));
    } else if (h == "forall" || h == "exists") {
      auto& vars = (h == "forall") ? s.universal_vars : s.existential_vars;
      for (std::size_t j = 1; j < item.items.size(); ++j)
        vars.push_back(atom_of(item.items[j], "variable"));
    } else if (h == "matrix") {
      expect_arity(item, 1);
      if (have_matrix) bad("duplicate (matrix ...)");
      s.matrix = parse_formula(arg(item, 1));
      have_matrix = true;
    } else {
      bad("unknown sentence clause: " + h);
    }
  }
  if (s.second_order.empty()) bad("a sentence needs at least one guess");
  if (!have_matrix) bad("a sentence needs a (matrix ...) clause");
  return s;
}

std::string print_eso(const EsoSentence& s) {
  std::ostringstream out;
  out << "(eso\n";
  for (const auto& g : s.second_order) out << "  (guess " << g.name << " " << g.arity << ")\n";
  auto vars = [&](const char* tag, const std::vector<std::string>& vs) {
    out << "  (" << tag;
    for (const auto& v : vs) out << " " << v;
    out << ")\n";
  };
  vars("forall", s.universal_vars);
  vars("exists", s.existential_vars);
  out << "  (matrix ";
  print_formula(out, s.matrix);
  out << "))\n";
  return out.str();
}

ExprPtr parse_expr_text(const std::string& text) {
  SexpParser p{text};
  Sexp s = p.next();
  if (!p.done()) bad("trailing input after the expression");
  return parse_expr(s);
}

std::string print_expr(const ExprPtr& e) {
  std::ostringstream out;
  print_expr_rec(out, e);
  return out.str();
}

NpAlgQuery parse_query(const std::string& text) {
  SexpParser p{text};
  Sexp top = p.next();
  if (!p.done()) bad("trailing input after the query");
  if (head(top) != "query") bad("expected (query ...)");
  NpAlgQuery q;
  bool have_fail = false;
  for (std::size_t i = 1; i < top.items.size(); ++i) {
    const Sexp& item = top.items[i];
    const std::string& h = head(item);
    if (h == "guess") {
      expect_arity(item, 2);
      GuessDecl g;
      g.name = atom_of(arg(item, 1), "guess name");
      g.arity = int_of(arg(item, 2), "guess arity");
      if (g.arity < 1) bad("guess arity must be positive");
      if (q.find_guess(g.name)) bad("duplicate guess: " + g.name);
      q.guesses.push_back(std::move(g));
    } else if (h == "let") {
      expect_arity(item, 2);
      q.lets.emplace_back(atom_of(arg(item, 1), "binding name"), parse_expr(arg(item, 2)));
    } else if (h == "fail") {
      expect_arity(item, 1);
      if (have_fail) bad("duplicate (fail ...)");
      q.fail = parse_expr(arg(item, 1));
      have_fail = true;
    } else {
      bad("unknown query clause: " + h);
    }
  }
  if (q.guesses.empty()) bad("a query needs at least one guess");
  if (!have_fail) bad("a query needs a (fail ...) clause");
  return q;
}

std::string print_query(const NpAlgQuery& q) {
  std::ostringstream out;
  out << "(query\n";
  for (const auto& g : q.guesses) out << "  (guess " << g.name << " " << g.arity << ")\n";
  for (const auto& [name, e] : q.lets) {
    out << "  (let " << name << " ";
    print_expr_rec(out, e);
    out << ")\n";
  }
  out << "  (fail ";
  print_expr_rec(out, q.fail);
  out << "))\n";
  return out.str();
}

}  // namespace npalg::textio
