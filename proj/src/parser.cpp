#include "kgnp/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "kgnp/error.hpp"
#include "kgnp/util.hpp"

namespace kgnp {

namespace {

enum class Tok { Name, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0;
  std::string unit;
  bool quoted = false;
  bool functor = false;  // name written immediately before `(`
  std::size_t line = 1;
  std::size_t column = 1;
};

constexpr std::string_view kArrow = "\xE2\x86\x90";  // U+2190

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_layout();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      const auto c = static_cast<unsigned char>(s_[pos_]);
      if (s_.substr(pos_, kArrow.size()) == kArrow) {
        advance(kArrow.size());
        t.kind = Tok::Punct;
        t.text = "<-";
      } else if (std::isdigit(c) || (c == '-' && std::isdigit(peek(1)) && !value_ended(out))) {
        lex_number(t);
      } else if (ident_start(c)) {
        t.kind = Tok::Name;
        t.text = lex_identifier();
        t.functor = peek(0) == '(';
      } else if (c == '\'' || c == '"') {
        t.kind = Tok::Name;
        t.quoted = true;
        t.text = lex_quoted(static_cast<char>(c), t);
        t.functor = peek(0) == '(';
      } else {
        t.kind = Tok::Punct;
        t.text = lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  unsigned char peek(std::size_t ahead) const {
    return pos_ + ahead < s_.size() ? static_cast<unsigned char>(s_[pos_ + ahead]) : 0;
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(s_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  static bool value_ended(const std::vector<Token>& out) {
    if (out.empty()) return false;
    const Token& last = out.back();
    if (last.kind == Tok::Name || last.kind == Tok::Number) return true;
    return last.text == ")" || last.text == "]" || last.text == "}";
  }

  void skip_layout() {
    while (pos_ < s_.size()) {
      const auto c = peek(0);
      if (std::isspace(c)) {
        advance();
      } else if (c == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string lex_identifier() {
    std::string out;
    while (pos_ < s_.size()) {
      const auto c = peek(0);
      if (s_.substr(pos_, kArrow.size()) == kArrow) break;
      if (ident_char(c)) {
        out += static_cast<char>(c);
        advance();
      } else if (c == '-' && !out.empty() && std::isalnum(peek(1))) {
        out += '-';
        advance();
      } else {
        break;
      }
    }
    return out;
  }

  std::string lex_quoted(char q, const Token& at) {
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= s_.size() || s_[pos_] == '\n')
        throw SyntaxError("unterminated quoted atom", at.line, at.column);
      const char c = s_[pos_];
      advance();
      if (c == q) return out;
      if (c == '\\') {
        const char e = pos_ < s_.size() ? s_[pos_] : '\0';
        advance();
        out += e == 'n' ? '\n' : (e == 't' ? '\t' : e);
        continue;
      }
      out += c;
    }
  }

  void lex_number(Token& t) {
    const std::size_t start = pos_;
    if (peek(0) == '-') advance();
    while (std::isdigit(peek(0))) advance();
    if (peek(0) == '.' && std::isdigit(peek(1))) {
      advance();
      while (std::isdigit(peek(0))) advance();
    }
    if ((peek(0) == 'e' || peek(0) == 'E') &&
        (std::isdigit(peek(1)) || ((peek(1) == '-' || peek(1) == '+') && std::isdigit(peek(2))))) {
      advance(2);
      while (std::isdigit(peek(0))) advance();
    }
    const auto text = s_.substr(start, pos_ - start);
    const auto value = parse_number(text);
    if (!value) throw SyntaxError("malformed number '" + std::string(text) + "'", t.line, t.column);
    t.kind = Tok::Number;
    t.text = std::string(text);
    t.number = *value;
    if (peek(0) == '%') {
      advance();
      t.unit = "%";
      return;
    }
    // `83 kg` or `83 'beats/minute'`: a unit follows after blanks.
    std::size_t ahead = 0;
    while (peek(ahead) == ' ' || peek(ahead) == '\t') ++ahead;
    if (ahead == 0) return;
    const auto c = peek(ahead);
    if (c == '\'') {
      advance(ahead);
      Token dummy = t;
      t.unit = lex_quoted('\'', dummy);
      return;
    }
    if (!std::islower(c)) return;
    std::size_t end = ahead;
    while (ident_char(peek(end)) || (peek(end) == '-' && std::isalnum(peek(end + 1)))) ++end;
    const auto word = s_.substr(pos_ + ahead, end - ahead);
    if (peek(end) == '(' || word == "is" || word == "not" || word == "mod") return;
    advance(ahead);
    t.unit = lex_identifier();
  }

  std::string lex_punct(const Token& t) {
    static const char* const kMulti[] = {"<-", ":-", "\\+", "\\=", "=<", ">="};
    for (const char* m : kMulti) {
      const std::string_view mv(m);
      if (s_.substr(pos_, mv.size()) == mv) {
        advance(mv.size());
        return mv == ":-" ? "<-" : std::string(mv);
      }
    }
    const char c = s_[pos_];
    static const std::string_view kSingle = "()[]{},;|.?!#@:=<>+-*/";
    if (kSingle.find(c) == std::string_view::npos)
      throw SyntaxError(std::string("unexpected character '") + c + "'", t.line, t.column);
    advance();
    return std::string(1, c);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct PendingCheck {
  std::string name;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  Parser(std::string_view text, bool ground) : toks_(Lexer(text).run()), ground_(ground) {}

  Program program() {
    Program p;
    program_ = &p;
    while (!at_end()) item(p, {});
    finish(p);
    return p;
  }

  Query query() {
    Query q;
    expect("?");
    if (at_end() || is("."))
      throw SyntaxError("empty query", cur().line, cur().column);
    if (is("#")) q.sources = directive();
    auto alts = disjunction();
    if (alts.size() == 1) {
      q.goals = std::move(alts.front());
    } else {
      Goal g;
      g.kind = GoalKind::Disjunction;
      g.alternatives = std::move(alts);
      q.goals.push_back(std::move(g));
    }
    if (is(".")) next();
    if (!at_end()) error("unexpected '" + cur().text + "' after query");
    q.var_count = var_names_.size();
    q.var_names = var_names_;
    return q;
  }

  TermPtr ground_term() {
    auto t = expr();
    if (!at_end()) error("unexpected '" + cur().text + "' after term");
    return t;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& look(std::size_t ahead) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at_end() const { return cur().kind == Tok::End; }
  bool is(std::string_view punct) const { return cur().kind == Tok::Punct && cur().text == punct; }
  bool is_word(std::string_view w) const { return cur().kind == Tok::Name && !cur().quoted && cur().text == w; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(const std::string& message) const {
    throw SyntaxError(message, cur().line, cur().column);
  }

  void expect(std::string_view punct) {
    if (!is(punct)) {
      const std::string got = at_end() ? "end of input" : "'" + cur().text + "'";
      error("expected '" + std::string(punct) + "' but found " + got);
    }
    next();
  }

  std::string name_token(const char* what) {
    if (cur().kind != Tok::Name) error(std::string("expected ") + what);
    return next().text;
  }

  void reset_clause() {
    vars_.clear();
    var_names_.clear();
  }

  // ----- program items -----

  void item(Program& p, const std::string& emba) {
    if (cur().kind == Tok::Name && !cur().quoted && look(1).kind == Tok::Punct && look(1).text == ":") {
      const std::string& word = cur().text;
      if (word == "Data") return data_section(p, emba);
      if (word == "Concepts") return concepts_section(p);
      if (word == "Comparative") return comparative_section(p);
      if (word == "EMBA") return emba_section(p);
    }
    clause(p, emba, false);
  }

  void data_section(Program& p, const std::string& emba) {
    next();
    expect(":");
    if (cur().kind == Tok::Name && look(1).kind == Tok::Punct && look(1).text == ":") {
      const Token name_tok = next();
      next();
      if (p.find_list(name_tok.text))
        throw SyntaxError("duplicate data list '" + name_tok.text + "'", name_tok.line, name_tok.column);
      DataList list{name_tok.text, {}};
      const bool saved = ground_;
      ground_ = true;
      for (;;) {
        list.values.push_back(expr());
        if (is(",")) {
          next();
          continue;
        }
        break;
      }
      ground_ = saved;
      expect(".");
      p.data_lists.push_back(std::move(list));
      return;
    }
    clause(p, emba, true);
  }

  void concepts_section(Program& p) {
    next();
    expect(":");
    for (;;) {
      const Token t = cur();
      const std::string name = name_token("a concept name");
      expect("=");
      if (cur().kind != Tok::Number) error("expected a numeric anchor");
      const double v = next().number;
      if (v < 0 || v > 1) throw SyntaxError("concept anchor outside [0, 1]", t.line, t.column);
      if (p.concept_value(name)) throw SyntaxError("duplicate concept '" + name + "'", t.line, t.column);
      p.concepts.push_back({name, v});
      if (!is(",")) break;
      next();
    }
    expect(".");
  }

  void comparative_section(Program& p) {
    next();
    expect(":");
    static const std::set<std::string> kBase = {"eq", "larger", "smaller", "larger-eq", "smaller-eq"};
    for (;;) {
      const Token t = cur();
      const std::string name = name_token("a relation name");
      expect("=");
      const std::string base = lowercase(name_token("a comparative relation"));
      if (!kBase.count(base))
        throw SyntaxError("'" + base + "' is not one of eq, larger, smaller, larger-eq, smaller-eq", t.line,
                          t.column);
      p.comparatives.push_back({name, base});
      if (!is(",")) break;
      next();
    }
    expect(".");
  }

  void emba_section(Program& p) {
    next();
    expect(":");
    const std::string algorithm = name_token("an embedding algorithm name");
    expect("{");
    while (!is("}")) {
      if (at_end()) error("unterminated EMBA block");
      item(p, algorithm);
    }
    next();
    if (is(";")) next();
  }

  void clause(Program& p, const std::string& emba, bool ground_data) {
    reset_clause();
    const bool saved = ground_;
    if (ground_data) ground_ = true;
    Rule r;
    r.line = cur().line;
    r.emba = emba;
    if (is("#")) r.origin = directive();
    const Token head_tok = cur();
    r.head = expr();
    if (!r.head->is_callable())
      throw SyntaxError("clause head must be an atom or compound term", head_tok.line, head_tok.column);
    if (is("@")) r.annotation = annotation();
    if (is("<-")) {
      next();
      r.body = disjunction();
    }
    if (ground_data && !r.body.empty()) throw SyntaxError("Data items must be facts", head_tok.line, head_tok.column);
    expect(".");
    ground_ = saved;
    r.var_count = var_names_.size();
    r.var_names = var_names_;
    check_annotation_vars(r, head_tok);
    const bool ground_fact = r.body.empty() && is_ground(*r.head) && r.origin.empty();
    (ground_fact ? p.data : p.rules).push_back(std::move(r));
  }

  // ----- goals -----

  std::vector<Conjunction> disjunction() {
    std::vector<Conjunction> alts;
    alts.push_back(conjunction());
    while (is(";")) {
      next();
      alts.push_back(conjunction());
    }
    return alts;
  }

  Conjunction conjunction() {
    Conjunction c;
    c.push_back(goal());
    while (is(",")) {
      next();
      c.push_back(goal());
    }
    return c;
  }

  Goal goal() {
    std::vector<std::string> sources;
    const Token start = cur();
    if (is("#")) sources = directive();
    Goal g;
    g.line = cur().line;
    if (is("(")) {
      next();
      g.kind = GoalKind::Disjunction;
      g.alternatives = disjunction();
      expect(")");
    } else if (is("!")) {
      next();
      g.kind = GoalKind::Cut;
    } else if (is("\\+")) {
      next();
      g.kind = GoalKind::Not;
      g.alternatives.push_back(Conjunction{goal()});
    } else if (is_word("not") && cur().functor) {
      next();
      Goal inner;
      inner.line = g.line;
      inner.kind = GoalKind::Disjunction;
      expect("(");
      inner.alternatives = disjunction();
      expect(")");
      g.kind = GoalKind::Not;
      g.alternatives.push_back(Conjunction{std::move(inner)});
    } else if (is_word("Fail") || is_word("fail")) {
      const bool has_bound = cur().functor;
      next();
      g.kind = GoalKind::Fail;
      if (has_bound) {
        expect("(");
        const Token t = cur();
        g.term = expr();
        if (g.term->is_number()) {
          const double n = g.term->number;
          if (n < 1 || n != static_cast<double>(static_cast<long long>(n)) || !g.term->unit.empty())
            throw SyntaxError("Fail bound must be a positive integer", t.line, t.column);
        } else if (!g.term->is_var()) {
          throw SyntaxError("Fail bound must be a positive integer or a variable", t.line, t.column);
        }
        expect(")");
      }
    } else {
      const Token t = cur();
      g.term = expr();
      if (!g.term->is_callable())
        throw SyntaxError("goal must be an atom or compound term", t.line, t.column);
    }
    if (is("@")) {
      if (g.kind != GoalKind::Call) error("only predicate calls carry annotations");
      g.annotation = annotation();
    }
    if (!sources.empty()) {
      if (g.kind == GoalKind::Fail || g.kind == GoalKind::Cut)
        throw SyntaxError("a graph directive cannot prefix Fail or !", start.line, start.column);
      g.sources = std::move(sources);
    }
    return g;
  }

  std::vector<std::string> directive() {
    expect("#");
    std::string close;
    if (is("(")) {
      close = ")";
      next();
    } else if (is("<")) {
      close = ">";
      next();
    }
    std::vector<std::string> names;
    for (;;) {
      names.push_back(name_token("a graph name"));
      if (close.empty() || !is(",")) break;
      next();
    }
    if (!close.empty()) expect(close);
    expect("#");
    return names;
  }

  Annotation annotation() {
    expect("@");
    const Token t = cur();
    const std::string tag = cur().kind == Tok::Name ? next().text : "";
    Annotation a;
    if (tag == "f")
      a.mode = AnnotationMode::Fuzzy;
    else if (tag == "p")
      a.mode = AnnotationMode::Probabilistic;
    else
      throw SyntaxError("annotation must be @f(...) or @p(...)", t.line, t.column);
    expect("(");
    for (;;) {
      const Token e = cur();
      if (e.kind == Tok::Number) {
        next();
        if (e.number < 0 || e.number > 1 || !e.unit.empty())
          throw SyntaxError("annotation values must lie in [0, 1]", e.line, e.column);
        a.elements.push_back(make_number(e.number));
      } else if (e.kind == Tok::Name && !e.functor) {
        auto term = name_term(next());
        if (term->is_atom()) concept_refs_.push_back({term->name, e.line, e.column});
        a.elements.push_back(term);
      } else {
        throw SyntaxError("annotation elements are numbers, concepts or variables", e.line, e.column);
      }
      if (!is(",")) break;
      next();
    }
    expect(")");
    Program& p = *program_;
    if (p.mode && *p.mode != a.mode)
      throw SyntaxError("mixed fuzzy and probabilistic annotations in one program", t.line, t.column);
    if (p.mode && p.annotation_arity != a.elements.size())
      throw SyntaxError("annotation has " + std::to_string(a.elements.size()) + " elements, expected " +
                            std::to_string(p.annotation_arity),
                        t.line, t.column);
    p.mode = a.mode;
    p.annotation_arity = a.elements.size();
    return a;
  }

  // ----- terms -----

  TermPtr expr() {
    auto lhs = additive();
    static const std::set<std::string> kCompare = {"=", "\\=", "<", ">", "=<", ">="};
    if ((cur().kind == Tok::Punct && kCompare.count(cur().text)) || is_word("is")) {
      const std::string op = next().text;
      auto rhs = additive();
      return make_compound(op, {lhs, rhs});
    }
    return lhs;
  }

  TermPtr additive() {
    auto lhs = multiplicative();
    while (is("+") || is("-")) {
      const std::string op = next().text;
      lhs = make_compound(op, {lhs, multiplicative()});
    }
    return lhs;
  }

  TermPtr multiplicative() {
    auto lhs = primary();
    while (is("*") || is("/")) {
      const std::string op = next().text;
      lhs = make_compound(op, {lhs, primary()});
    }
    return lhs;
  }

  TermPtr primary() {
    const Token t = cur();
    if (t.kind == Tok::Number) {
      next();
      return make_number(t.number, t.unit);
    }
    if (t.kind == Tok::Name) {
      next();
      if (t.functor) {
        expect("(");
        std::vector<TermPtr> args;
        for (;;) {
          args.push_back(expr());
          if (!is(",")) break;
          next();
        }
        expect(")");
        return make_compound(t.text, std::move(args));
      }
      return name_term(t);
    }
    if (is("[")) {
      next();
      if (is("]")) {
        next();
        return make_atom("[]");
      }
      std::vector<TermPtr> items;
      TermPtr tail;
      for (;;) {
        items.push_back(expr());
        if (!is(",")) break;
        next();
      }
      if (is("|")) {
        next();
        tail = expr();
      }
      expect("]");
      return make_list(items, tail);
    }
    if (is("(")) {
      next();
      auto inner = expr();
      expect(")");
      return inner;
    }
    if (at_end()) error("unexpected end of input");
    error("unexpected '" + t.text + "'");
  }

  TermPtr name_term(const Token& t) {
    if (t.quoted || ground_ || !variable_name(t.text)) return make_atom(t.text);
    if (t.text == "_") {
      const auto id = static_cast<VarId>(var_names_.size());
      var_names_.push_back("_");
      return make_var(id, "_");
    }
    auto it = vars_.find(t.text);
    if (it == vars_.end()) {
      it = vars_.emplace(t.text, static_cast<VarId>(var_names_.size())).first;
      var_names_.push_back(t.text);
    }
    return make_var(it->second, t.text);
  }

  // ----- checks -----

  static void body_vars(const std::vector<Conjunction>& alts, std::vector<TermPtr>& out) {
    for (const auto& conj : alts)
      for (const auto& g : conj) {
        if (g.term) collect_vars(g.term, out);
        body_vars(g.alternatives, out);
      }
  }

  static void annotation_vars(const std::vector<Conjunction>& alts, std::vector<TermPtr>& out) {
    for (const auto& conj : alts)
      for (const auto& g : conj) {
        if (g.annotation)
          for (const auto& e : g.annotation->elements)
            if (e->is_var()) out.push_back(e);
        annotation_vars(g.alternatives, out);
      }
  }

  static void check_annotation_vars(const Rule& r, const Token& at) {
    std::vector<TermPtr> bound;
    collect_vars(r.head, bound);
    body_vars(r.body, bound);
    std::vector<TermPtr> used;
    if (r.annotation)
      for (const auto& e : r.annotation->elements)
        if (e->is_var()) used.push_back(e);
    annotation_vars(r.body, used);
    for (const auto& v : used) {
      bool found = false;
      for (const auto& b : bound) found = found || b->var == v->var;
      if (!found)
        throw SyntaxError("annotation variable " + v->name + " does not occur in the clause", at.line, at.column);
    }
  }

  static void check_lists(const Program& p, const std::vector<Conjunction>& alts) {
    for (const auto& conj : alts)
      for (const auto& g : conj) {
        check_lists(p, g.alternatives);
        if (g.kind != GoalKind::Call || !g.term->is_compound() || g.term->arity() != 2) continue;
        std::string n;
        for (char c : g.term->name)
          if (c != '-' && c != '_') n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (n != "indata") continue;
        const auto& list = g.term->args[0];
        if (!list->is_atom() && !list->is_var())
          throw SyntaxError("in-data expects a data list name", g.line, 1);
        if (!p.find_list(list->name))
          throw SyntaxError("undefined data list '" + list->name + "'", g.line, 1);
      }
  }

  void finish(const Program& p) {
    for (const auto& c : concept_refs_)
      if (!p.concept_value(c.name))
        throw SyntaxError("undeclared concept '" + c.name + "' in annotation", c.line, c.column);
    for (const auto& r : p.rules) check_lists(p, r.body);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool ground_;
  std::map<std::string, VarId> vars_;
  std::vector<std::string> var_names_;
  std::vector<PendingCheck> concept_refs_;
  Program scratch_;
  Program* program_ = &scratch_;
};

// ----- printing -----

void print_sources(const std::vector<std::string>& sources, std::string& out) {
  if (sources.empty()) return;
  out += "#(";
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (i) out += ", ";
    out += functor_text(sources[i]);
  }
  out += ")# ";
}

std::string print_alternatives(const std::vector<Conjunction>& alts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < alts.size(); ++i) {
    if (i) out += sep;
    out += print_conjunction(alts[i]);
  }
  return out;
}

}  // namespace

std::string print_annotation(const Annotation& a) {
  std::string out = a.mode == AnnotationMode::Fuzzy ? "@f(" : "@p(";
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    if (i) out += ", ";
    out += to_string(*a.elements[i]);
  }
  return out + ")";
}

std::string print_goal(const Goal& g) {
  std::string out;
  print_sources(g.sources, out);
  switch (g.kind) {
    case GoalKind::Call: out += to_string(*g.term); break;
    case GoalKind::Fail: out += g.term ? "Fail(" + to_string(*g.term) + ")" : "Fail"; break;
    case GoalKind::Cut: out += "!"; break;
    case GoalKind::Not: out += "\\+ " + print_goal(g.alternatives.at(0).at(0)); break;
    case GoalKind::Disjunction: out += "(" + print_alternatives(g.alternatives, " ; ") + ")"; break;
  }
  if (g.annotation) out += " " + print_annotation(*g.annotation);
  return out;
}

std::string print_conjunction(const Conjunction& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += print_goal(c[i]);
  }
  return out;
}

std::string print_rule(const Rule& r) {
  std::string out;
  print_sources(r.origin, out);
  out += to_string(*r.head);
  if (r.annotation) out += " " + print_annotation(*r.annotation);
  if (!r.body.empty()) out += " <- " + print_alternatives(r.body, " ;\n    ");
  return out + ".";
}

std::string print_query(const Query& q) {
  std::string out = "? ";
  print_sources(q.sources, out);
  return out + print_conjunction(q.goals) + ".";
}

std::string print_program(const Program& p) {
  std::string out;
  auto section = [&](const char* head, const auto& items, auto fmt) {
    if (items.empty()) return;
    out += head;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : " ") + fmt(items[i]);
    out += ".\n";
  };
  section("Concepts:", p.concepts, [](const ConceptAnchor& c) { return atom_text(c.name) + " = " + format_number(c.value); });
  section("Comparative:", p.comparatives,
          [](const ComparativeAlias& c) { return functor_text(c.name) + " = " + c.relation; });
  for (const auto& list : p.data_lists) {
    out += "Data: " + functor_text(list.name) + ":";
    for (std::size_t i = 0; i < list.values.size(); ++i) out += (i ? ", " : " ") + to_string(*list.values[i]);
    out += ".\n";
  }
  auto clauses = [&](const std::vector<Rule>& rules) {
    std::string open;
    for (const auto& r : rules) {
      if (r.emba != open) {
        if (!open.empty()) out += "}\n";
        if (!r.emba.empty()) out += "EMBA: " + functor_text(r.emba) + " {\n";
        open = r.emba;
      }
      out += print_rule(r) + "\n";
    }
    if (!open.empty()) out += "}\n";
  };
  clauses(p.data);
  clauses(p.rules);
  return out;
}

Program parse_program(std::string_view text) { return Parser(text, false).program(); }

Program parse_program_file(const std::string& path) {
  try {
    return parse_program(read_file(path));
  } catch (const SyntaxError& e) {
    throw SyntaxError(path + ": " + e.what(), e.line(), e.column());
  }
}

Query parse_query(std::string_view text) { return Parser(text, false).query(); }

TermPtr parse_ground_term(std::string_view text) { return Parser(text, true).ground_term(); }

// ----- AST helpers -----

const DataList* Program::find_list(std::string_view name) const {
  for (const auto& l : data_lists)
    if (l.name == name) return &l;
  return nullptr;
}

std::optional<double> Program::concept_value(std::string_view name) const {
  for (const auto& c : concepts)
    if (c.name == name) return c.value;
  return std::nullopt;
}

std::vector<std::string> Program::emba_algorithms() const {
  std::vector<std::string> out;
  auto add = [&](const std::vector<Rule>& rules) {
    for (const auto& r : rules)
      if (!r.emba.empty() && std::find(out.begin(), out.end(), r.emba) == out.end()) out.push_back(r.emba);
  };
  add(data);
  add(rules);
  return out;
}

bool same_annotation(const std::optional<Annotation>& a, const std::optional<Annotation>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  if (a->mode != b->mode || a->elements.size() != b->elements.size()) return false;
  for (std::size_t i = 0; i < a->elements.size(); ++i)
    if (!same_term(*a->elements[i], *b->elements[i])) return false;
  return true;
}

namespace {

bool same_alternatives(const std::vector<Conjunction>& a, const std::vector<Conjunction>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!same_goal(a[i][j], b[i][j])) return false;
  }
  return true;
}

}  // namespace

bool same_goal(const Goal& a, const Goal& b) {
  if (a.kind != b.kind || a.sources != b.sources) return false;
  if (static_cast<bool>(a.term) != static_cast<bool>(b.term)) return false;
  if (a.term && !same_term(*a.term, *b.term)) return false;
  return same_annotation(a.annotation, b.annotation) && same_alternatives(a.alternatives, b.alternatives);
}

bool same_rule(const Rule& a, const Rule& b) {
  return same_term(*a.head, *b.head) && same_annotation(a.annotation, b.annotation) &&
         same_alternatives(a.body, b.body) && a.origin == b.origin && a.emba == b.emba &&
         a.var_count == b.var_count;
}

bool same_program(const Program& a, const Program& b) {
  auto same_rules = [](const std::vector<Rule>& x, const std::vector<Rule>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!same_rule(x[i], y[i])) return false;
    return true;
  };
  if (!same_rules(a.rules, b.rules) || !same_rules(a.data, b.data)) return false;
  if (a.data_lists.size() != b.data_lists.size() || a.concepts.size() != b.concepts.size() ||
      a.comparatives.size() != b.comparatives.size() || a.mode != b.mode)
    return false;
  for (std::size_t i = 0; i < a.data_lists.size(); ++i) {
    const auto& x = a.data_lists[i];
    const auto& y = b.data_lists[i];
    if (x.name != y.name || x.values.size() != y.values.size()) return false;
    for (std::size_t j = 0; j < x.values.size(); ++j)
      if (!same_term(*x.values[j], *y.values[j])) return false;
  }
  for (std::size_t i = 0; i < a.concepts.size(); ++i)
    if (a.concepts[i].name != b.concepts[i].name || a.concepts[i].value != b.concepts[i].value) return false;
  for (std::size_t i = 0; i < a.comparatives.size(); ++i)
    if (a.comparatives[i].name != b.comparatives[i].name || a.comparatives[i].relation != b.comparatives[i].relation)
      return false;
  return true;
}

}  // namespace kgnp
