#include <algorithm>
#include <cctype>
#include <sstream>

#include "npalg/consql.hpp"

namespace npalg::consql {

namespace {

struct Token {
  enum class Kind { Ident, Int, Str, Punct, End };
  Kind kind = Kind::End;
  std::string text;   // Ident (as written), Str (content), Punct
  std::string upper;  // Ident uppercased, for keyword tests
  std::int64_t value = 0;
  int line = 1, col = 1;
};

const char* kKeywords[] = {"CREATE", "SPECIFICATION", "GUESS", "TABLE", "AS", "SELECT",
                           "FROM", "WHERE", "CHECK", "RETURN", "MAXIMIZE", "MINIMIZE",
                           "EXISTS", "NOT", "AND", "OR", "IN", "UNION", "SUBSET", "OF",
                           "TOTAL", "PARTIAL", "FUNCTION_TO", "PARTITION", "PERMUTATION",
                           "COUNT", "SUM"};

bool is_keyword(const std::string& upper) {
  for (const char* k : kKeywords)
    if (upper == k) return true;
  return false;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (text[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  auto err = [&](const std::string& msg) {
    throw Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col));
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      advance(2);
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) advance(1);
      if (i + 1 >= text.size()) err("unterminated comment");
      advance(2);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = text.substr(i, j - i);
      t.upper = t.text;
      for (auto& ch : t.upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = text.substr(i, j - i);
      t.value = std::stoll(t.text);
      advance(j - i);
    } else if (c == '\'') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '\'') ++j;
      if (j >= text.size()) err("unterminated string literal");
      t.kind = Token::Kind::Str;
      t.text = text.substr(i + 1, j - i - 1);
      advance(j - i + 1);
    } else {
      t.kind = Token::Kind::Punct;
      auto two = text.substr(i, 2);
      if (two == ".." || two == "<>" || two == "<=" || two == ">=") {
        t.text = two;
        advance(2);
      } else if (std::string("(),.=<>+-*;").find(c) != std::string::npos) {
        t.text = std::string(1, c);
        advance(1);
      } else {
        err(std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks[std::min(pos + ahead, toks.size() - 1)];
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw Error(msg + " at line " + std::to_string(t.line) + ", column " + std::to_string(t.col));
  }
  bool at_kw(const char* kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.upper == kw;
  }
  bool at_punct(const std::string& p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == p;
  }
  bool accept_kw(const char* kw) {
    if (!at_kw(kw)) return false;
    ++pos;
    return true;
  }
  void expect_kw(const char* kw) {
    if (!accept_kw(kw)) fail(std::string("expected ") + kw);
  }
  bool accept_punct(const std::string& p) {
    if (!at_punct(p)) return false;
    ++pos;
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!accept_punct(p)) fail("expected '" + p + "'");
  }
  std::string expect_name(const char* what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident || is_keyword(t.upper))
      fail(std::string("expected ") + what);
    ++pos;
    return t.text;
  }

  // ---- scalar expressions ----

  ScalarPtr scalar() {
    ScalarPtr e = term();
    while (at_punct("+") || at_punct("-")) {
      bool plus = at_punct("+");
      ++pos;
      auto n = std::make_shared<Scalar>();
      n->kind = plus ? Scalar::Kind::Add : Scalar::Kind::Sub;
      n->a = e;
      n->b = term();
      e = n;
    }
    return e;
  }
  ScalarPtr term() {
    ScalarPtr e = factor();
    while (at_punct("*")) {
      ++pos;
      auto n = std::make_shared<Scalar>();
      n->kind = Scalar::Kind::Mul;
      n->a = e;
      n->b = factor();
      e = n;
    }
    return e;
  }
  ScalarPtr factor() {
    auto n = std::make_shared<Scalar>();
    if (peek().kind == Token::Kind::Int) {
      n->kind = Scalar::Kind::IntLit;
      n->int_val = peek().value;
      ++pos;
      return n;
    }
    if (peek().kind == Token::Kind::Str) {
      n->kind = Scalar::Kind::TextLit;
      n->text_val = peek().text;
      ++pos;
      return n;
    }
    if (accept_kw("COUNT")) {
      expect_punct("(");
      expect_punct("*");
      expect_punct(")");
      n->kind = Scalar::Kind::CountStar;
      return n;
    }
    if (accept_kw("SUM")) {
      expect_punct("(");
      n->kind = Scalar::Kind::Sum;
      n->a = scalar();
      expect_punct(")");
      return n;
    }
    if (accept_punct("(")) {
      if (at_kw("SELECT")) {
        n->kind = Scalar::Kind::Subquery;
        n->sub = query();
        expect_punct(")");
        return n;
      }
      ScalarPtr e = scalar();
      expect_punct(")");
      return e;
    }
    if (peek().kind == Token::Kind::Ident && !is_keyword(peek().upper)) {
      n->kind = Scalar::Kind::Column;
      std::string first = peek().text;
      ++pos;
      if (at_punct(".") && peek(1).kind == Token::Kind::Ident) {
        ++pos;
        n->table = first;
        n->column = expect_name("column name");
      } else {
        n->column = first;
      }
      return n;
    }
    fail("expected scalar expression");
  }

  // ---- conditions ----

  CondPtr condition() {
    CondPtr e = cond_and();
    while (accept_kw("OR")) {
      auto n = std::make_shared<Cond>();
      n->kind = Cond::Kind::Or;
      n->a = e;
      n->b = cond_and();
      e = n;
    }
    return e;
  }
  CondPtr cond_and() {
    CondPtr e = cond_unary();
    while (accept_kw("AND")) {
      auto n = std::make_shared<Cond>();
      n->kind = Cond::Kind::And;
      n->a = e;
      n->b = cond_unary();
      e = n;
    }
    return e;
  }
  CondPtr cond_unary() {
    auto n = std::make_shared<Cond>();
    if (at_kw("NOT") && at_kw("EXISTS", 1)) {
      pos += 2;
      expect_punct("(");
      n->kind = Cond::Kind::NotExists;
      n->sub = query();
      expect_punct(")");
      return n;
    }
    if (accept_kw("NOT")) {
      n->kind = Cond::Kind::Not;
      n->a = cond_unary();
      return n;
    }
    if (accept_kw("EXISTS")) {
      expect_punct("(");
      n->kind = Cond::Kind::Exists;
      n->sub = query();
      expect_punct(")");
      return n;
    }
    // Either a comparison/membership predicate or a parenthesized condition;
    // try the predicate first and backtrack on failure.
    std::size_t save = pos;
    try {
      return predicate();
    } catch (const Error&) {
      pos = save;
    }
    expect_punct("(");
    CondPtr inner = condition();
    expect_punct(")");
    return inner;
  }
  CondPtr predicate() {
    auto n = std::make_shared<Cond>();
    n->lhs = scalar();
    if (at_kw("NOT") && at_kw("IN", 1)) {
      pos += 2;
      n->kind = Cond::Kind::NotIn;
      expect_punct("(");
      n->sub = query();
      expect_punct(")");
      return n;
    }
    if (accept_kw("IN")) {
      n->kind = Cond::Kind::In;
      expect_punct("(");
      n->sub = query();
      expect_punct(")");
      return n;
    }
    n->kind = Cond::Kind::Cmp;
    if (accept_punct("="))
      n->op = Cond::Op::Eq;
    else if (accept_punct("<>"))
      n->op = Cond::Op::Ne;
    else if (accept_punct("<="))
      n->op = Cond::Op::Le;
    else if (accept_punct(">="))
      n->op = Cond::Op::Ge;
    else if (accept_punct("<"))
      n->op = Cond::Op::Lt;
    else if (accept_punct(">"))
      n->op = Cond::Op::Gt;
    else
      fail("expected comparison operator");
    n->rhs = scalar();
    return n;
  }

  // ---- queries ----

  std::int64_t fold_int(const ScalarPtr& e) {
    switch (e->kind) {
      case Scalar::Kind::IntLit: return e->int_val;
      case Scalar::Kind::Add: return fold_int(e->a) + fold_int(e->b);
      case Scalar::Kind::Sub: return fold_int(e->a) - fold_int(e->b);
      case Scalar::Kind::Mul: return fold_int(e->a) * fold_int(e->b);
      default: fail("expected a constant integer expression");
    }
  }

  std::vector<FromItem> plain_from_list(const char* what) {
    std::vector<FromItem> out;
    do {
      FromItem it;
      it.kind = FromItem::Kind::Table;
      it.table = expect_name(what);
      if (peek().kind == Token::Kind::Ident && !is_keyword(peek().upper))
        it.alias = expect_name("alias");
      out.push_back(std::move(it));
    } while (accept_punct(","));
    return out;
  }

  FromItem shape() {
    FromItem it;
    if (accept_kw("SUBSET")) {
      expect_kw("OF");
      it.kind = FromItem::Kind::SubsetOf;
      it.domain = plain_from_list("table name");
      return it;
    }
    if (at_kw("TOTAL") || at_kw("PARTIAL") || at_kw("FUNCTION_TO")) {
      it.kind = FromItem::Kind::FunctionTo;
      it.total = !accept_kw("PARTIAL");
      accept_kw("TOTAL");
      expect_kw("FUNCTION_TO");
      expect_punct("(");
      if (peek().kind == Token::Kind::Ident && !is_keyword(peek().upper) && at_punct(")", 1)) {
        it.range.is_table = true;
        it.range.table = expect_name("range table");
      } else {
        it.range.min_expr = scalar();
        expect_punct("..");
        it.range.max_expr = scalar();
        it.range.min = fold_int(it.range.min_expr);
        it.range.max = fold_int(it.range.max_expr);
      }
      expect_punct(")");
      expect_kw("AS");
      do {
        it.fields.push_back(expect_name("field name"));
      } while (accept_punct(","));
      expect_kw("OF");
      it.domain = plain_from_list("table name");
      return it;
    }
    if (accept_kw("PARTITION")) {
      it.kind = FromItem::Kind::Partition;
      expect_punct("(");
      it.parts = fold_int(scalar());
      expect_punct(")");
      expect_kw("AS");
      it.fields.push_back(expect_name("field name"));
      expect_kw("OF");
      it.domain = plain_from_list("table name");
      return it;
    }
    if (accept_kw("PERMUTATION")) {
      it.kind = FromItem::Kind::Permutation;
      expect_kw("AS");
      it.fields.push_back(expect_name("field name"));
      expect_kw("OF");
      it.domain = plain_from_list("table name");
      return it;
    }
    fail("expected a guessed-table shape");
  }

  bool at_shape_start() const {
    return at_kw("SUBSET") || at_kw("TOTAL") || at_kw("PARTIAL") || at_kw("FUNCTION_TO") ||
           at_kw("PARTITION") || at_kw("PERMUTATION");
  }

  FromItem from_item() {
    if (accept_punct("(")) {
      if (at_kw("SELECT")) {
        FromItem it;
        it.kind = FromItem::Kind::Derived;
        it.derived = query();
        expect_punct(")");
        it.alias = expect_name("derived-table alias");
        return it;
      }
      FromItem it = shape();
      it.parenthesized = true;
      expect_punct(")");
      if (peek().kind == Token::Kind::Ident && !is_keyword(peek().upper))
        it.alias = expect_name("alias");
      return it;
    }
    if (at_shape_start()) return shape();
    FromItem it;
    it.kind = FromItem::Kind::Table;
    it.table = expect_name("table name");
    if (peek().kind == Token::Kind::Ident && !is_keyword(peek().upper))
      it.alias = expect_name("alias");
    return it;
  }

  QueryPtr query() {
    auto q = std::make_shared<Query>();
    expect_kw("SELECT");
    if (accept_punct("*")) {
      SelectItem s;
      s.star = true;
      q->select.push_back(s);
    } else {
      do {
        SelectItem s;
        s.expr = scalar();
        if (accept_kw("AS")) s.alias = expect_name("output column name");
        q->select.push_back(std::move(s));
      } while (accept_punct(","));
    }
    expect_kw("FROM");
    do {
      q->from.push_back(from_item());
    } while (accept_punct(","));
    if (accept_kw("WHERE")) q->where = condition();
    if (accept_kw("UNION")) q->union_next = query();
    return q;
  }

  // ---- specifications ----

  Specification specification() {
    Specification s;
    expect_kw("CREATE");
    expect_kw("SPECIFICATION");
    s.name = expect_name("specification name");
    expect_punct("(");
    while (at_kw("GUESS")) {
      ++pos;
      expect_kw("TABLE");
      GuessedTableSpec g;
      g.name = expect_name("guessed table name");
      if (accept_punct("(")) {
        do {
          g.aliases.push_back(expect_name("column name"));
        } while (accept_punct(","));
        expect_punct(")");
      }
      expect_kw("AS");
      g.body = query();
      s.guesses.push_back(std::move(g));
    }
    if (s.guesses.empty()) fail("a specification needs at least one GUESS TABLE");
    if (at_kw("MAXIMIZE") || at_kw("MINIMIZE")) {
      Objective o;
      o.minimize = at_kw("MINIMIZE");
      ++pos;
      expect_punct("(");
      o.query = query();
      expect_punct(")");
      s.objective = std::move(o);
    }
    while (at_kw("CHECK")) {
      ++pos;
      expect_punct("(");
      s.checks.push_back(condition());
      expect_punct(")");
    }
    if (s.checks.empty()) fail("a specification needs at least one CHECK");
    while (at_kw("RETURN")) {
      ++pos;
      expect_kw("TABLE");
      std::string name = expect_name("return table name");
      expect_kw("AS");
      s.returns.emplace_back(std::move(name), query());
    }
    expect_punct(")");
    return s;
  }

  PostSelect post_select() {
    PostSelect p;
    expect_kw("SELECT");
    if (accept_punct("*")) {
      SelectItem s;
      s.star = true;
      p.select.push_back(s);
    } else {
      do {
        SelectItem s;
        s.expr = scalar();
        if (accept_kw("AS")) s.alias = expect_name("output column name");
        p.select.push_back(std::move(s));
      } while (accept_punct(","));
    }
    expect_kw("FROM");
    p.problem = expect_name("problem name");
    expect_punct(".");
    p.table = expect_name("return table name");
    if (accept_kw("WHERE")) p.where = condition();
    accept_punct(";");
    return p;
  }
};

// ---- printer ----

struct Printer {
  std::ostringstream out;

  static const char* op_text(Cond::Op op) {
    switch (op) {
      case Cond::Op::Eq: return "=";
      case Cond::Op::Ne: return "<>";
      case Cond::Op::Lt: return "<";
      case Cond::Op::Le: return "<=";
      case Cond::Op::Gt: return ">";
      case Cond::Op::Ge: return ">=";
    }
    return "=";
  }

  void scalar(const ScalarPtr& e) {
    switch (e->kind) {
      case Scalar::Kind::Column:
        if (!e->table.empty()) out << e->table << ".";
        out << e->column;
        return;
      case Scalar::Kind::IntLit: out << e->int_val; return;
      case Scalar::Kind::TextLit: out << "'" << e->text_val << "'"; return;
      case Scalar::Kind::Add:
      case Scalar::Kind::Sub:
      case Scalar::Kind::Mul: {
        const char* op = e->kind == Scalar::Kind::Add ? " + "
                         : e->kind == Scalar::Kind::Sub ? " - "
                                                        : " * ";
        out << "(";
        scalar(e->a);
        out << op;
        scalar(e->b);
        out << ")";
        return;
      }
      case Scalar::Kind::CountStar: out << "COUNT(*)"; return;
      case Scalar::Kind::Sum:
        out << "SUM(";
        scalar(e->a);
        out << ")";
        return;
      case Scalar::Kind::Subquery:
        out << "(";
        query(e->sub);
        out << ")";
        return;
    }
  }

  void cond_wrapped(const CondPtr& c) {
    if (c->kind == Cond::Kind::And || c->kind == Cond::Kind::Or) {
      out << "(";
      cond(c);
      out << ")";
    } else {
      cond(c);
    }
  }

  void cond(const CondPtr& c) {
    switch (c->kind) {
      case Cond::Kind::Cmp:
        scalar(c->lhs);
        out << " " << op_text(c->op) << " ";
        scalar(c->rhs);
        return;
      case Cond::Kind::And:
        cond_wrapped(c->a);
        out << " AND ";
        cond_wrapped(c->b);
        return;
      case Cond::Kind::Or:
        cond_wrapped(c->a);
        out << " OR ";
        cond_wrapped(c->b);
        return;
      case Cond::Kind::Not:
        out << "NOT ";
        cond_wrapped(c->a);
        return;
      case Cond::Kind::Exists:
      case Cond::Kind::NotExists:
        out << (c->kind == Cond::Kind::Exists ? "EXISTS (" : "NOT EXISTS (");
        query(c->sub);
        out << ")";
        return;
      case Cond::Kind::In:
      case Cond::Kind::NotIn:
        scalar(c->lhs);
        out << (c->kind == Cond::Kind::In ? " IN (" : " NOT IN (");
        query(c->sub);
        out << ")";
        return;
    }
  }

  void from_item(const FromItem& it) {
    switch (it.kind) {
      case FromItem::Kind::Table:
        out << it.table;
        if (!it.alias.empty()) out << " " << it.alias;
        return;
      case FromItem::Kind::Derived:
        out << "(";
        query(it.derived);
        out << ") " << it.alias;
        return;
      default: break;
    }
    if (it.parenthesized) out << "(";
    switch (it.kind) {
      case FromItem::Kind::SubsetOf: out << "SUBSET OF "; break;
      case FromItem::Kind::FunctionTo:
        out << (it.total ? "TOTAL" : "PARTIAL") << " FUNCTION_TO(";
        if (it.range.is_table) {
          out << it.range.table;
        } else {
          scalar(it.range.min_expr);
          out << "..";
          scalar(it.range.max_expr);
        }
        out << ") AS ";
        for (std::size_t i = 0; i < it.fields.size(); ++i)
          out << (i ? ", " : "") << it.fields[i];
        out << " OF ";
        break;
      case FromItem::Kind::Partition:
        out << "PARTITION(" << it.parts << ") AS " << it.fields[0] << " OF ";
        break;
      case FromItem::Kind::Permutation:
        out << "PERMUTATION AS " << it.fields[0] << " OF ";
        break;
      default: break;
    }
    for (std::size_t i = 0; i < it.domain.size(); ++i) {
      out << (i ? ", " : "") << it.domain[i].table;
      if (!it.domain[i].alias.empty()) out << " " << it.domain[i].alias;
    }
    if (it.parenthesized) {
      out << ")";
      if (!it.alias.empty()) out << " " << it.alias;
    }
  }

  void query(const QueryPtr& q) {
    out << "SELECT ";
    for (std::size_t i = 0; i < q->select.size(); ++i) {
      if (i) out << ", ";
      if (q->select[i].star) {
        out << "*";
      } else {
        scalar(q->select[i].expr);
        if (!q->select[i].alias.empty()) out << " AS " << q->select[i].alias;
      }
    }
    out << " FROM ";
    for (std::size_t i = 0; i < q->from.size(); ++i) {
      if (i) out << ", ";
      from_item(q->from[i]);
    }
    if (q->where) {
      out << " WHERE ";
      cond(q->where);
    }
    if (q->union_next) {
      out << " UNION ";
      query(q->union_next);
    }
  }

  void spec(const Specification& s) {
    out << "CREATE SPECIFICATION " << s.name << " (\n";
    for (const auto& g : s.guesses) {
      out << "  GUESS TABLE " << g.name;
      if (!g.aliases.empty()) {
        out << "(";
        for (std::size_t i = 0; i < g.aliases.size(); ++i)
          out << (i ? ", " : "") << g.aliases[i];
        out << ")";
      }
      out << " AS\n    ";
      query(g.body);
      out << "\n";
    }
    if (s.objective) {
      out << "  " << (s.objective->minimize ? "MINIMIZE" : "MAXIMIZE") << " (\n    ";
      query(s.objective->query);
      out << "\n  )\n";
    }
    for (const auto& c : s.checks) {
      out << "  CHECK (\n    ";
      cond(c);
      out << "\n  )\n";
    }
    for (const auto& [name, q] : s.returns) {
      out << "  RETURN TABLE " << name << " AS\n    ";
      query(q);
      out << "\n";
    }
    out << ")\n";
  }
};

}  // namespace

Specification parse_spec(const std::string& text) {
  Parser p{lex(text)};
  Specification s = p.specification();
  if (p.peek().kind != Token::Kind::End) p.fail("unexpected trailing input");
  return s;
}

Program parse_program(const std::string& text) {
  Parser p{lex(text)};
  Program prog;
  while (p.peek().kind != Token::Kind::End) {
    if (p.at_kw("CREATE"))
      prog.specs.push_back(p.specification());
    else if (p.at_kw("SELECT"))
      prog.posts.push_back(p.post_select());
    else
      p.fail("expected CREATE SPECIFICATION or a post-solve SELECT");
  }
  if (prog.specs.empty()) throw Error("no CREATE SPECIFICATION block found");
  return prog;
}

std::string print_spec(const Specification& spec) {
  Printer pr;
  pr.spec(spec);
  return pr.out.str();
}

std::string print_query(const QueryPtr& q) {
  Printer pr;
  pr.query(q);
  return pr.out.str();
}

std::string print_cond(const CondPtr& c) {
  Printer pr;
  pr.cond(c);
  return pr.out.str();
}

}  // namespace npalg::consql
