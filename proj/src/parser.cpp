#include "holmatch/parser.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "holmatch/errors.hpp"

namespace holmatch {
namespace {

bool is_delim(char c) {
  return c == ' ' || c == '\t' || c == '(' || c == ')' || c == ',' ||
         c == '\n' || c == '\r';
}

struct Cursor {
  std::string_view s;
  size_t pos = 0;
  size_t line = 1;

  bool eof() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }
  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  std::string_view token() {
    size_t start = pos;
    while (pos < s.size() && !is_delim(s[pos])) ++pos;
    return s.substr(start, pos - start);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, pos + 1);
  }
};

std::optional<uint32_t> var_number(std::string_view tok) {
  if (tok.size() < 2 || tok[0] != 'V') return std::nullopt;
  uint32_t n = 0;
  auto [p, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), n);
  if (ec != std::errc() || p != tok.data() + tok.size()) return std::nullopt;
  return n;
}

class TermParser {
 public:
  explicit TermParser(Cursor& c) : c_(c) {}

  TermPtr parse() {
    TermPtr t = seq('\0');
    c_.skip_ws();
    if (!c_.eof() && c_.peek() != '\n' && c_.peek() != '\r')
      c_.fail("trailing characters after term");
    return t;
  }

 private:
  Cursor& c_;
  uint32_t depth_ = 0;
  std::unordered_map<uint32_t, uint32_t> binder_depth_;  // var number -> depth

  // A juxtaposition sequence of atoms, left-associated.
  TermPtr seq(char stop) {
    TermPtr acc;
    for (;;) {
      c_.skip_ws();
      if (c_.eof() || c_.peek() == '\n' || c_.peek() == '\r') break;
      if (stop && c_.peek() == stop) break;
      TermPtr a = atom();
      acc = acc ? Term::app(std::move(acc), std::move(a)) : a;
    }
    if (!acc) c_.fail("empty term");
    return acc;
  }

  TermPtr atom() {
    if (c_.peek() == '(') {
      ++c_.pos;
      c_.skip_ws();
      TermPtr t = (!c_.eof() && c_.peek() == '\\') ? binder() : seq(')');
      c_.skip_ws();
      if (c_.eof() || c_.peek() != ')') c_.fail("expected ')'");
      ++c_.pos;
      return t;
    }
    std::string_view tok = c_.token();
    if (tok.empty()) c_.fail("expected term");
    if (auto v = var_number(tok)) {
      auto it = binder_depth_.find(*v);
      if (it == binder_depth_.end())
        throw UnboundVariableError("unbound variable V" + std::to_string(*v) +
                                   " at line " + std::to_string(c_.line));
      return Term::bound(depth_ - 1 - it->second);
    }
    return Term::constant(intern(tok));
  }

  TermPtr binder() {
    ++c_.pos;  // consume '\'
    // The variable token ends at the '.' (qualified names may contain dots,
    // so '.' is not a general delimiter).
    size_t start = c_.pos;
    while (c_.pos < c_.s.size() && c_.s[c_.pos] != '.' &&
           !is_delim(c_.s[c_.pos]))
      ++c_.pos;
    auto v = var_number(c_.s.substr(start, c_.pos - start));
    if (!v) c_.fail("expected variable after '\\'");
    if (c_.eof() || c_.peek() != '.') c_.fail("expected '.' after binder");
    ++c_.pos;
    auto old = binder_depth_.find(*v) != binder_depth_.end()
                   ? std::optional<uint32_t>(binder_depth_[*v])
                   : std::nullopt;
    binder_depth_[*v] = depth_;
    ++depth_;
    TermPtr body = seq(')');
    --depth_;
    if (old)
      binder_depth_[*v] = *old;
    else
      binder_depth_.erase(*v);
    return Term::abs(std::move(body));
  }
};

class TypeParser {
 public:
  explicit TypeParser(Cursor& c) : c_(c) {}

  TypePtr parse() {
    TypePtr t = expr();
    c_.skip_ws();
    if (!c_.eof() && c_.peek() != '\n' && c_.peek() != '\r')
      c_.fail("trailing characters after type");
    return t;
  }

 private:
  Cursor& c_;
  std::unordered_map<std::string, uint32_t> var_ids_;  // tail -> id

  TypePtr expr() {
    c_.skip_ws();
    std::string_view tok = c_.token();
    if (tok.empty()) c_.fail("expected type");
    if (tok.find('.') == std::string_view::npos) {
      if (tok[0] != 'A')
        c_.fail("bad type token '" + std::string(tok) + "'");
      std::string tail(tok.substr(1));
      auto [it, fresh] =
          var_ids_.emplace(tail, static_cast<uint32_t>(var_ids_.size()));
      (void)fresh;
      return Type::var(it->second);
    }
    Symbol name = intern(tok);
    std::vector<TypePtr> args;
    if (!c_.eof() && c_.peek() == '(') {
      ++c_.pos;
      for (;;) {
        args.push_back(expr());
        c_.skip_ws();
        if (!c_.eof() && c_.peek() == ',') {
          ++c_.pos;
          continue;
        }
        break;
      }
      if (c_.eof() || c_.peek() != ')') c_.fail("expected ')' in type");
      ++c_.pos;
    }
    return Type::con(name, std::move(args));
  }
};

std::string derive_name(std::string_view qname) {
  size_t dot = qname.find('.');
  if (dot == std::string_view::npos || dot < 2) return std::string(qname);
  return std::string(qname.substr(1, dot - 1));  // strip category prefix
}

}  // namespace

TermPtr parse_term(std::string_view text) {
  Cursor c{text};
  return TermParser(c).parse();
}

TypePtr parse_type(std::string_view text) {
  Cursor c{text};
  return TypeParser(c).parse();
}

Library parse_library(std::string_view text, std::string_view name) {
  Library lib;
  lib.name = std::string(name);
  lib.install_basis();

  // Pass 1: signatures (order-independent so theorems may precede decls).
  size_t line_no = 0;
  std::string_view rest = text;
  auto next_line = [](std::string_view& r) -> std::optional<std::string_view> {
    if (r.empty()) return std::nullopt;
    size_t nl = r.find('\n');
    std::string_view line =
        nl == std::string_view::npos ? r : r.substr(0, nl);
    r = nl == std::string_view::npos ? std::string_view{} : r.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  for (int pass = 0; pass < 2; ++pass) {
    rest = text;
    line_no = 0;
    while (auto line_opt = next_line(rest)) {
      ++line_no;
      std::string_view line = *line_opt;
      Cursor c{line, 0, line_no};
      c.skip_ws();
      if (c.eof() || c.peek() == '#') continue;
      std::string_view kw = c.token();
      c.skip_ws();
      if (kw == "const") {
        std::string_view qn = c.token();
        if (qn.empty()) c.fail("expected constant name");
        if (pass != 0) continue;
        c.skip_ws();
        TypePtr ty = TypeParser(c).parse();
        try {
          lib.declare_const(intern(qn), renumber_type_vars(ty));
        } catch (const ParseError& e) {
          throw ParseError(std::string(e.what()), line_no, 1);
        }
        if (lib.name.empty()) lib.name = derive_name(qn);
      } else if (kw == "thm") {
        std::string_view qn = c.token();
        if (qn.empty()) c.fail("expected theorem name");
        if (pass != 1) continue;
        c.skip_ws();
        TermPtr stmt = TermParser(c).parse();
        if (!stmt->is_closed())
          throw UnboundVariableError("theorem " + std::string(qn) +
                                     " is not closed (line " +
                                     std::to_string(line_no) + ")");
        for (Symbol s : constants_in_order(stmt))
          if (!lib.has_const(s))
            throw UnknownConstantError(
                "theorem " + std::string(qn) + " uses undeclared constant " +
                sym_name(s) + " (line " + std::to_string(line_no) + ")");
        if (lib.name.empty()) lib.name = derive_name(qn);
        lib.theorems.push_back({intern(qn), std::move(stmt)});
      } else {
        c.fail("unknown record '" + std::string(kw) + "'");
      }
    }
  }
  return lib;
}

Library parse_library_file(const std::string& path, std::string_view name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_library(ss.str(), name);
}

std::string write_term(const TermPtr& t) {
  std::string out;
  // Recursive lambda keeps binder numbering equal to binding depth.
  auto rec = [&out](auto&& self, const Term* n, uint32_t depth) -> void {
    switch (n->kind()) {
      case TermKind::Const:
        out += sym_name(n->sym());
        break;
      case TermKind::Bound:
        out += 'V';
        out += std::to_string(depth - 1 - n->index());
        break;
      case TermKind::Abs:
        out += "(\\V";
        out += std::to_string(depth);
        out += ". ";
        self(self, n->body().get(), depth + 1);
        out += ')';
        break;
      case TermKind::App:
        out += '(';
        self(self, n->fun().get(), depth);
        out += ' ';
        self(self, n->arg().get(), depth);
        out += ')';
        break;
    }
  };
  rec(rec, t.get(), 0);
  return out;
}

}  // namespace holmatch
