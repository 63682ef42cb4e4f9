#include "riq/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "riq/sequent.hpp"

namespace riq {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

// "exists" and "forall" are accepted as synonyms of "some" and "only".
const std::set<std::string> kKeywords = {"some", "only", "exists", "forall", "atmost", "atleast",
                                         "and",  "or",   "not",    "TOP",    "BOT"};

std::vector<Token> lex(std::string_view text, std::size_t line, std::size_t column) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = column;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\'')) {
        ++j;
      }
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      static const char* two[] = {"<=", "|-", "!="};
      t.kind = Tok::Sym;
      for (const char* s : two) {
        if (text.substr(i, 2) == s) t.text = s;
      }
      if (t.text.empty()) {
        if (std::string_view(".(),-:=").find(c) == std::string_view::npos) {
          throw ParseError(line, column, std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParseOptions& opts) : toks_(std::move(toks)), opts_(opts) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool is_word(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(peek().line, peek().column, what);
  }

  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    take();
  }

  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  std::string name(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    if (kKeywords.count(peek().text)) fail("keyword '" + peek().text + "' used as " + what);
    const std::string& t = peek().text;
    if (!opts_.internal && (t[0] == '_' || t.find('\'') != std::string::npos)) {
      fail("reserved name '" + t + "'");
    }
    return take().text;
  }

  Role role() {
    const Token& at = peek();
    std::string n = name("role name");
    if (n == "o") throw ParseError(at.line, at.column, "'o' cannot be used as a role name");
    if (opts_.strict && opts_.known_roles && !opts_.known_roles->count(n)) {
      throw ParseError(at.line, at.column, "unknown role '" + n + "'");
    }
    bool inv = false;
    if (is_sym("-")) {
      take();
      inv = true;
    }
    return Role{n, inv};
  }

  Concept cpt() {
    Concept c = conj_expr();
    while (is_word("or")) {
      take();
      c = Concept::disj(c, conj_expr());
    }
    return c;
  }

  Concept conj_expr() {
    Concept c = unary();
    while (is_word("and")) {
      take();
      c = Concept::conj(c, unary());
    }
    return c;
  }

  std::uint32_t number() {
    if (peek().kind != Tok::Number) fail("expected a number");
    const Token& t = peek();
    if (t.text.size() > 10 || std::stoull(t.text) > kMaxCount) fail("number out of range");
    return static_cast<std::uint32_t>(std::stoul(take().text));
  }

  Concept unary() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "not") {
        take();
        return nnf_negate(unary());
      }
      if (t.text == "some" || t.text == "only" || t.text == "exists" || t.text == "forall") {
        const std::string q = take().text;
        bool some = q == "some" || q == "exists";
        Role r = role();
        expect_sym(".");
        Concept body = cpt();
        return some ? Concept::exists(r, body) : Concept::forall(r, body);
      }
      if (t.text == "atmost" || t.text == "atleast") {
        bool most = take().text == "atmost";
        std::uint32_t n = number();
        Role r = role();
        expect_sym(".");
        Concept body = cpt();
        return most ? Concept::at_most(n, r, body) : Concept::at_least(n, r, body);
      }
      if (t.text == "TOP") {
        take();
        return Concept::top();
      }
      if (t.text == "BOT") {
        take();
        return Concept::bottom();
      }
      return Concept::name(name("concept name"));
    }
    if (is_sym("(")) {
      take();
      Concept c = cpt();
      expect_sym(")");
      return c;
    }
    fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  Label label() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || t.text.size() < 2 || t.text[0] != 'x') fail("expected a label");
    for (std::size_t i = 1; i < t.text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) fail("expected a label");
    }
    if (t.text.size() > 10) fail("label out of range");
    return Label{static_cast<std::uint32_t>(std::stoul(take().text.substr(1)))};
  }

  StructuralAtom atom() {
    bool role_atom = peek().kind == Tok::Ident && (is_sym("(", 1) || (is_sym("-", 1) && is_sym("(", 2)));
    if (role_atom) {
      Role r = role();
      expect_sym("(");
      Label x = label();
      expect_sym(",");
      Label y = label();
      expect_sym(")");
      return StructuralAtom::role_atom(r, x, y);
    }
    Label x = label();
    if (is_sym("=")) {
      take();
      return StructuralAtom::eq(x, label());
    }
    if (is_sym("!=")) {
      take();
      return StructuralAtom::neq(x, label());
    }
    fail("expected '=' or '!='");
  }

  Sequent sequent() {
    Sequent s;
    if (!is_sym("|-")) {
      s.antecedent.insert(atom());
      while (is_sym(",")) {
        take();
        s.antecedent.insert(atom());
      }
    }
    expect_sym("|-");
    if (!at_end()) {
      auto item = [&] {
        Label x = label();
        expect_sym(":");
        s.consequent.push_back({x, cpt()});
      };
      item();
      while (is_sym(",")) {
        take();
        item();
      }
    }
    expect_end();
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseOptions& opts_;
};

// Rendering. Quantifier bodies extend to the right, so a quantifier is only left bare at the
// end of the enclosing text.
void render_into(const Concept& c, int min_prec, bool open_ok, std::string& out) {
  if (c.is_top()) {
    out += "TOP";
    return;
  }
  if (c.is_bottom()) {
    out += "BOT";
    return;
  }
  switch (c.kind()) {
    case ConceptKind::Name: out += c.atom(); return;
    case ConceptKind::NegName: out += "not " + c.atom(); return;
    case ConceptKind::And:
    case ConceptKind::Or: {
      bool is_and = c.kind() == ConceptKind::And;
      int prec = is_and ? 2 : 1;
      bool paren = min_prec > prec;
      if (paren) out += "(";
      render_into(c.left(), prec, false, out);
      out += is_and ? " and " : " or ";
      render_into(c.right(), prec + 1, paren || open_ok, out);
      if (paren) out += ")";
      return;
    }
    default: {
      bool paren = !open_ok;
      if (paren) out += "(";
      switch (c.kind()) {
        case ConceptKind::Exists: out += "some "; break;
        case ConceptKind::Forall: out += "only "; break;
        case ConceptKind::AtMost: out += "atmost " + std::to_string(c.count()) + " "; break;
        default: out += "atleast " + std::to_string(c.count()) + " "; break;
      }
      out += render(c.role()) + " . ";
      render_into(c.body(), 0, true, out);
      if (paren) out += ")";
    }
  }
}

Parser make_parser(std::string_view text, const ParseOptions& opts, std::size_t line = 1,
                   std::size_t column = 1) {
  return Parser(lex(text, line, column), opts);
}

}  // namespace

Concept parse_concept(std::string_view text, const ParseOptions& opts) {
  Parser p = make_parser(text, opts);
  Concept c = p.cpt();
  p.expect_end();
  return c;
}

RawGCI parse_goal(std::string_view text, const ParseOptions& opts) {
  Parser p = make_parser(text, opts);
  Concept sub = p.cpt();
  p.expect_sym("<=");
  Concept sup = p.cpt();
  p.expect_end();
  return {sub, sup};
}

Ontology parse_ontology(std::string_view text, const ParseOptions& opts) {
  struct Line {
    std::size_t number;
    std::size_t offset;
    std::string_view body;
    std::string keyword;
  };
  std::vector<Line> lines;
  std::size_t start = 0, number = 1;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::size_t first = raw.find_first_not_of(" \t\r");
    if (first != std::string_view::npos) {
      std::size_t colon = raw.find(':');
      if (colon == std::string_view::npos) throw ParseError(number, first + 1, "expected 'roles:', 'ria:' or 'gci:'");
      std::string kw(raw.substr(first, colon - first));
      while (!kw.empty() && (kw.back() == ' ' || kw.back() == '\t')) kw.pop_back();
      if (kw != "roles" && kw != "ria" && kw != "gci") {
        throw ParseError(number, first + 1, "unknown line kind '" + kw + "'");
      }
      lines.push_back({number, colon + 1, raw.substr(colon + 1), kw});
    }
    if (end == text.size()) break;
    start = end + 1;
    ++number;
  }

  std::set<std::string> declared;
  for (const auto& l : lines) {
    if (l.keyword != "roles") continue;
    ParseOptions lax = opts;
    lax.strict = false;
    Parser p = make_parser(l.body, lax, l.number, l.offset + 1);
    if (p.at_end()) continue;
    declared.insert(p.role().name);
    while (p.is_sym(",")) {
      p.take();
      declared.insert(p.role().name);
    }
    p.expect_end();
  }

  ParseOptions inner = opts;
  if (opts.strict) inner.known_roles = &declared;
  std::vector<RawGCI> gcis;
  std::vector<RIA> rias;
  for (const auto& l : lines) {
    Parser p = make_parser(l.body, inner, l.number, l.offset + 1);
    if (l.keyword == "ria") {
      RIA ria;
      ria.lhs.push_back(p.role());
      while (p.is_word("o")) {
        p.take();
        ria.lhs.push_back(p.role());
      }
      p.expect_sym("<=");
      ria.rhs = p.role();
      p.expect_end();
      rias.push_back(std::move(ria));
    } else if (l.keyword == "gci") {
      Concept sub = p.cpt();
      p.expect_sym("<=");
      Concept sup = p.cpt();
      p.expect_end();
      gcis.push_back({sub, sup});
    }
  }
  return normalize_ontology(gcis, rias, declared);
}

Ontology load_ontology(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_ontology(buf.str(), opts);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path + ": " + std::string(e.what()));
  }
}

std::string render(const Role& r) { return r.name + (r.inverted ? "-" : ""); }

std::string render(const RIA& ria) {
  std::string out;
  for (std::size_t i = 0; i < ria.lhs.size(); ++i) {
    if (i) out += " o ";
    out += render(ria.lhs[i]);
  }
  return out + " <= " + render(ria.rhs);
}

std::string render(const Concept& c) {
  std::string out;
  render_into(c, 0, true, out);
  return out;
}

std::string render(const Ontology& o) {
  std::string out;
  if (!o.declared_roles.empty()) {
    out += "roles: ";
    bool first = true;
    for (const auto& r : o.declared_roles) {
      if (!first) out += ", ";
      out += r;
      first = false;
    }
    out += "\n";
  }
  for (const auto& ria : o.rbox) out += "ria: " + render(ria) + "\n";
  for (const auto& c : o.tbox) out += "gci: TOP <= " + render(c) + "\n";
  return out;
}

std::string render(Label x) { return "x" + std::to_string(x.id); }

std::string render(const StructuralAtom& a) {
  switch (a.kind) {
    case StructuralAtom::Kind::Role: return render(a.role) + "(" + render(a.from) + "," + render(a.to) + ")";
    case StructuralAtom::Kind::Eq: return render(a.from) + " = " + render(a.to);
    case StructuralAtom::Kind::Neq: return render(a.from) + " != " + render(a.to);
  }
  return {};
}

std::string render(const LabeledConcept& lc) { return render(lc.label) + " : " + render(lc.cpt); }

std::string render(const Sequent& s) {
  std::string out;
  bool first = true;
  for (const auto& a : s.antecedent) {
    if (!first) out += ", ";
    out += render(a);
    first = false;
  }
  out += out.empty() ? "|-" : " |-";
  first = true;
  for (const auto& lc : s.consequent) {
    out += first ? " " : ", ";
    out += render(lc);
    first = false;
  }
  return out;
}

Sequent parse_sequent(const std::string& text) {
  ParseOptions opts;
  opts.internal = true;
  return make_parser(text, opts).sequent();
}

Label parse_label(const std::string& text) {
  ParseOptions opts;
  opts.internal = true;
  Parser p = make_parser(text, opts);
  Label x = p.label();
  p.expect_end();
  return x;
}

}  // namespace riq
