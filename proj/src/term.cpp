#include "kgnp/term.hpp"

#include <algorithm>
#include <cctype>

#include "kgnp/util.hpp"

namespace kgnp {

TermPtr make_var(VarId id, std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Variable;
  t->var = id;
  t->name = std::move(name);
  return t;
}

TermPtr make_atom(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Atom;
  t->name = std::move(name);
  return t;
}

TermPtr make_number(double value, std::string unit) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Number;
  t->number = value;
  t->unit = std::move(unit);
  return t;
}

TermPtr make_compound(std::string functor, std::vector<TermPtr> args) {
  if (args.empty()) return make_atom(std::move(functor));
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Compound;
  t->name = std::move(functor);
  t->args = std::move(args);
  return t;
}

TermPtr make_list(const std::vector<TermPtr>& items, TermPtr tail) {
  TermPtr list = tail ? std::move(tail) : make_atom("[]");
  for (auto it = items.rbegin(); it != items.rend(); ++it) list = make_compound(".", {*it, list});
  return list;
}

bool list_items(const TermPtr& t, std::vector<TermPtr>& out) {
  out.clear();
  const Term* cur = t.get();
  while (cur->is_compound() && cur->name == "." && cur->arity() == 2) {
    out.push_back(cur->args[0]);
    cur = cur->args[1].get();
  }
  return cur->is_atom() && cur->name == "[]";
}

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  return std::all_of(t.args.begin(), t.args.end(), [](const TermPtr& a) { return is_ground(*a); });
}

bool occurs_in(VarId v, const Term& t) {
  if (t.is_var()) return t.var == v;
  return std::any_of(t.args.begin(), t.args.end(), [v](const TermPtr& a) { return occurs_in(v, *a); });
}

void collect_vars(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->is_var()) {
    if (std::none_of(out.begin(), out.end(), [&](const TermPtr& v) { return v->var == t->var; })) out.push_back(t);
    return;
  }
  for (const auto& a : t->args) collect_vars(a, out);
}

bool same_term(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Variable: return a.var == b.var;
    case TermKind::Atom: return a.name == b.name;
    case TermKind::Number: return a.number == b.number && a.unit == b.unit;
    case TermKind::Compound:
      if (a.name != b.name || a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i)
        if (!same_term(*a.args[i], *b.args[i])) return false;
      return true;
  }
  return false;
}

int compare_terms(const Term& a, const Term& b) {
  auto rank = [](TermKind k) {
    switch (k) {
      case TermKind::Variable: return 0;
      case TermKind::Number: return 1;
      case TermKind::Atom: return 2;
      case TermKind::Compound: return 3;
    }
    return 4;
  };
  if (a.kind != b.kind) return rank(a.kind) < rank(b.kind) ? -1 : 1;
  switch (a.kind) {
    case TermKind::Variable: return a.var < b.var ? -1 : (a.var > b.var ? 1 : 0);
    case TermKind::Number:
      if (a.number != b.number) return a.number < b.number ? -1 : 1;
      return a.unit.compare(b.unit) < 0 ? -1 : (a.unit == b.unit ? 0 : 1);
    case TermKind::Atom: return a.name < b.name ? -1 : (a.name > b.name ? 1 : 0);
    case TermKind::Compound:
      if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
      if (a.name != b.name) return a.name < b.name ? -1 : 1;
      for (std::size_t i = 0; i < a.arity(); ++i)
        if (int c = compare_terms(*a.args[i], *b.args[i])) return c;
      return 0;
  }
  return 0;
}

TermPtr shift_vars(const TermPtr& t, VarId offset) {
  if (offset == 0) return t;
  if (t->is_var()) return make_var(t->var + offset, t->name);
  if (!t->is_compound() || is_ground(*t)) return t;
  std::vector<TermPtr> args;
  args.reserve(t->arity());
  for (const auto& a : t->args) args.push_back(shift_vars(a, offset));
  return make_compound(t->name, std::move(args));
}

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

// Matches the lexer: letters, digits, `_`, and `-` between identifier characters.
bool bare_identifier(std::string_view s) {
  if (s.empty() || !ident_start(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (ident_char(c)) continue;
    if (c == '-' && i + 1 < s.size() && std::isalnum(static_cast<unsigned char>(s[i + 1])) && ident_char(s[i - 1]))
      continue;
    return false;
  }
  return true;
}

bool reserved_atom(std::string_view s) {
  return s == "is" || s == "not" || s == "Fail" || s == "fail" || s == "Data" || s == "Concepts" ||
         s == "Comparative" || s == "EMBA";
}

std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "'";
}

int op_precedence(const Term& t) {
  if (!t.is_compound() || t.arity() != 2) return 0;
  const auto& f = t.name;
  if (f == "=" || f == "\\=" || f == "is" || f == "<" || f == ">" || f == "=<" || f == ">=") return 700;
  if (f == "+" || f == "-") return 500;
  if (f == "*" || f == "/") return 400;
  return 0;
}

void write(const Term& t, std::string& out, int max_prec);

void write_operand(const Term& t, std::string& out, int limit) {
  if (op_precedence(t) > limit) {
    out += '(';
    write(t, out, 1200);
    out += ')';
  } else {
    write(t, out, limit);
  }
}

void write(const Term& t, std::string& out, int max_prec) {
  switch (t.kind) {
    case TermKind::Variable:
      if (!t.name.empty() && variable_name(t.name) && bare_identifier(t.name))
        out += t.name;
      else
        out += "_G" + std::to_string(t.var);
      return;
    case TermKind::Atom: out += atom_text(t.name); return;
    case TermKind::Number:
      out += format_number(t.number);
      if (t.unit.empty()) return;
      if (t.unit == "%")
        out += '%';
      else if (bare_identifier(t.unit) && !variable_name(t.unit) && !reserved_atom(t.unit))
        out += ' ' + t.unit;
      else
        out += ' ' + quote(t.unit);
      return;
    case TermKind::Compound: break;
  }
  if (t.name == "." && t.arity() == 2) {
    out += '[';
    const Term* cur = &t;
    bool first = true;
    while (cur->is_compound() && cur->name == "." && cur->arity() == 2) {
      if (!first) out += ", ";
      write(*cur->args[0], out, 999);
      first = false;
      cur = cur->args[1].get();
    }
    if (!(cur->is_atom() && cur->name == "[]")) {
      out += '|';
      write(*cur, out, 999);
    }
    out += ']';
    return;
  }
  if (const int p = op_precedence(t)) {
    const bool xfx = p == 700;
    if (p > max_prec) out += '(';
    write_operand(*t.args[0], out, xfx ? p - 1 : p);
    out += ' ' + t.name + ' ';
    write_operand(*t.args[1], out, p - 1);
    if (p > max_prec) out += ')';
    return;
  }
  out += functor_text(t.name);
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ", ";
    write(*t.args[i], out, 999);
  }
  out += ')';
}

}  // namespace

bool variable_name(std::string_view name) {
  return !name.empty() && (std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_');
}

std::string atom_text(std::string_view name) {
  if (name == "[]") return "[]";
  if (bare_identifier(name) && !variable_name(name) && !reserved_atom(name)) return std::string(name);
  return quote(name);
}

std::string functor_text(std::string_view name) {
  if (bare_identifier(name) && name != "not" && name != "Fail" && name != "fail") return std::string(name);
  return quote(name);
}

std::string to_string(const Term& t) {
  std::string out;
  write(t, out, 1200);
  return out;
}

std::string indicator(const Term& t) { return t.name + "/" + std::to_string(t.arity()); }

}  // namespace kgnp
