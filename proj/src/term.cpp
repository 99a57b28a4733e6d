#include "holmatch/term.hpp"

#include <algorithm>
#include <charconv>

#include "holmatch/errors.hpp"

namespace holmatch {
namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

constexpr uint64_t kTagConst = 0x87c37b91114253d5ULL;
constexpr uint64_t kTagBound = 0x4cf5ad432745937fULL;
constexpr uint64_t kTagAbs = 0xff51afd7ed558ccdULL;
constexpr uint64_t kTagApp = 0xc4ceb9fe1a85ec53ULL;

}  // namespace

TermPtr Term::constant(Symbol s) {
  std::shared_ptr<Term> t(new Term());
  t->kind_ = TermKind::Const;
  t->sym_ = s;
  t->shash_ = mix(kTagConst, s);
  t->nodes_ = 1;
  t->free_above_ = 0;
  return t;
}

TermPtr Term::bound(uint32_t index) {
  std::shared_ptr<Term> t(new Term());
  t->kind_ = TermKind::Bound;
  t->index_ = index;
  t->shash_ = mix(kTagBound, index);
  t->nodes_ = 1;
  t->free_above_ = index + 1;
  return t;
}

TermPtr Term::abs(Ptr body) {
  std::shared_ptr<Term> t(new Term());
  t->kind_ = TermKind::Abs;
  t->shash_ = mix(kTagAbs, body->shash());
  t->nodes_ = body->node_count() + 1;
  t->free_above_ = body->free_above() == 0 ? 0 : body->free_above() - 1;
  t->a_ = std::move(body);
  return t;
}

TermPtr Term::app(Ptr fun, Ptr arg) {
  std::shared_ptr<Term> t(new Term());
  t->kind_ = TermKind::App;
  t->shash_ = mix(mix(kTagApp, fun->shash()), arg->shash());
  t->nodes_ = fun->node_count() + arg->node_count() + 1;
  t->free_above_ = std::max(fun->free_above(), arg->free_above());
  t->a_ = std::move(fun);
  t->b_ = std::move(arg);
  return t;
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->shash() != b->shash() || a->kind() != b->kind() ||
      a->node_count() != b->node_count())
    return false;
  switch (a->kind()) {
    case TermKind::Const:
      return a->sym() == b->sym();
    case TermKind::Bound:
      return a->index() == b->index();
    case TermKind::Abs:
      return term_eq(a->body(), b->body());
    case TermKind::App:
      return term_eq(a->fun(), b->fun()) && term_eq(a->arg(), b->arg());
  }
  return false;
}

std::string serialize_term(const TermPtr& t) {
  std::string out;
  out.reserve(t->node_count() * 3);
  std::vector<const Term*> stack{t.get()};
  while (!stack.empty()) {
    const Term* n = stack.back();
    stack.pop_back();
    if (!out.empty()) out.push_back(' ');
    switch (n->kind()) {
      case TermKind::App:
        out.push_back('@');
        stack.push_back(n->arg().get());
        stack.push_back(n->fun().get());
        break;
      case TermKind::Abs:
        out.push_back('L');
        stack.push_back(n->body().get());
        break;
      case TermKind::Bound:
        out.push_back('b');
        out += std::to_string(n->index());
        break;
      case TermKind::Const:
        out += "c:";
        out += sym_name(n->sym());
        break;
    }
  }
  return out;
}

std::string canonical(const TermPtr& t) {
  if (!t->is_closed())
    throw UnboundVariableError("canonical: term has unbound variable b" +
                               std::to_string(t->free_above() - 1));
  return serialize_term(t);
}

namespace {

// Streams the bytes serialize_term would produce, one token at a time.  A
// token spans at most two segments ("c:" plus the interned name).
class SerialCursor {
 public:
  explicit SerialCursor(const Term* root) {
    stack_.reserve(64);
    stack_.push_back(root);
    load();
  }

  // Next byte of the serialization, or -1 once exhausted.
  int next() {
    while (seg_ < 2) {
      if (pos_ < len_[seg_])
        return static_cast<unsigned char>(data_[seg_][pos_++]);
      ++seg_;
      pos_ = 0;
    }
    if (stack_.empty()) return -1;
    load();
    return ' ';
  }

 private:
  void load() {
    const Term* n = stack_.back();
    stack_.pop_back();
    seg_ = 0;
    pos_ = 0;
    len_[1] = 0;
    switch (n->kind()) {
      case TermKind::App:
        data_[0] = "@";
        len_[0] = 1;
        stack_.push_back(n->arg().get());
        stack_.push_back(n->fun().get());
        break;
      case TermKind::Abs:
        data_[0] = "L";
        len_[0] = 1;
        stack_.push_back(n->body().get());
        break;
      case TermKind::Bound: {
        buf_[0] = 'b';
        auto res = std::to_chars(buf_ + 1, buf_ + sizeof(buf_), n->index());
        data_[0] = buf_;
        len_[0] = static_cast<size_t>(res.ptr - buf_);
        break;
      }
      case TermKind::Const: {
        const std::string& name = sym_name(n->sym());
        data_[0] = "c:";
        len_[0] = 2;
        data_[1] = name.data();
        len_[1] = name.size();
        break;
      }
    }
  }

  std::vector<const Term*> stack_;
  const char* data_[2] = {nullptr, nullptr};
  size_t len_[2] = {0, 0};
  size_t pos_ = 0;
  int seg_ = 0;
  char buf_[16];
};

}  // namespace

int term_cmp(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return 0;
  SerialCursor ca(a.get()), cb(b.get());
  for (;;) {
    int x = ca.next();
    int y = cb.next();
    if (x != y) return x < y ? -1 : 1;
    if (x < 0) return 0;
  }
}

namespace {

TermPtr parse_tokens(const std::vector<std::string_view>& toks, size_t& pos) {
  if (pos >= toks.size())
    throw ParseError("canonical term: unexpected end of input");
  std::string_view tok = toks[pos++];
  if (tok == "@") {
    TermPtr f = parse_tokens(toks, pos);
    TermPtr a = parse_tokens(toks, pos);
    return Term::app(std::move(f), std::move(a));
  }
  if (tok == "L") return Term::abs(parse_tokens(toks, pos));
  if (tok.size() >= 2 && tok[0] == 'b') {
    uint32_t idx = 0;
    auto [p, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), idx);
    if (ec == std::errc() && p == tok.data() + tok.size())
      return Term::bound(idx);
  }
  if (tok.size() > 2 && tok[0] == 'c' && tok[1] == ':')
    return Term::constant(intern(tok.substr(2)));
  throw ParseError("canonical term: bad token '" + std::string(tok) + "'");
}

}  // namespace

TermPtr parse_canonical(std::string_view s) {
  std::vector<std::string_view> toks;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) toks.push_back(s.substr(i, j - i));
    i = j;
  }
  if (toks.empty()) throw ParseError("canonical term: empty input");
  size_t pos = 0;
  TermPtr t = parse_tokens(toks, pos);
  if (pos != toks.size())
    throw ParseError("canonical term: trailing tokens after term");
  return t;
}

TermPtr shift(const TermPtr& t, int32_t delta, uint32_t cutoff) {
  if (delta == 0 || t->free_above() <= cutoff) return t;
  switch (t->kind()) {
    case TermKind::Const:
      return t;
    case TermKind::Bound: {
      uint32_t idx = t->index();
      if (idx < cutoff) return t;
      int64_t moved = static_cast<int64_t>(idx) + delta;
      if (moved < static_cast<int64_t>(cutoff))
        throw UnboundVariableError("shift: index b" + std::to_string(idx) +
                                   " crosses cutoff");
      return Term::bound(static_cast<uint32_t>(moved));
    }
    case TermKind::Abs: {
      TermPtr b = shift(t->body(), delta, cutoff + 1);
      return b.get() == t->body().get() ? t : Term::abs(std::move(b));
    }
    case TermKind::App: {
      TermPtr f = shift(t->fun(), delta, cutoff);
      TermPtr a = shift(t->arg(), delta, cutoff);
      if (f.get() == t->fun().get() && a.get() == t->arg().get()) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

TermPtr subst_const(const TermPtr& t, Symbol from, Symbol to) {
  switch (t->kind()) {
    case TermKind::Const:
      return t->sym() == from ? Term::constant(to) : t;
    case TermKind::Bound:
      return t;
    case TermKind::Abs: {
      TermPtr b = subst_const(t->body(), from, to);
      return b.get() == t->body().get() ? t : Term::abs(std::move(b));
    }
    case TermKind::App: {
      TermPtr f = subst_const(t->fun(), from, to);
      TermPtr a = subst_const(t->arg(), from, to);
      if (f.get() == t->fun().get() && a.get() == t->arg().get()) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

std::vector<Symbol> constants_in_order(const TermPtr& t) {
  std::vector<Symbol> out;
  std::vector<const Term*> stack{t.get()};
  while (!stack.empty()) {
    const Term* n = stack.back();
    stack.pop_back();
    switch (n->kind()) {
      case TermKind::Const:
        if (std::find(out.begin(), out.end(), n->sym()) == out.end())
          out.push_back(n->sym());
        break;
      case TermKind::Bound:
        break;
      case TermKind::Abs:
        stack.push_back(n->body().get());
        break;
      case TermKind::App:
        stack.push_back(n->arg().get());
        stack.push_back(n->fun().get());
        break;
    }
  }
  return out;
}

namespace {

void collect_free(const Term* t, uint32_t cutoff, std::vector<uint32_t>& out) {
  if (t->free_above() <= cutoff) return;
  switch (t->kind()) {
    case TermKind::Const:
      break;
    case TermKind::Bound:
      if (t->index() >= cutoff) out.push_back(t->index() - cutoff);
      break;
    case TermKind::Abs:
      collect_free(t->body().get(), cutoff + 1, out);
      break;
    case TermKind::App:
      collect_free(t->fun().get(), cutoff, out);
      collect_free(t->arg().get(), cutoff, out);
      break;
  }
}

TermPtr remap_rec(const TermPtr& t, uint32_t cutoff,
                  const std::vector<std::pair<uint32_t, uint32_t>>& map) {
  if (t->free_above() <= cutoff) return t;
  switch (t->kind()) {
    case TermKind::Const:
      return t;
    case TermKind::Bound: {
      if (t->index() < cutoff) return t;
      uint32_t rel = t->index() - cutoff;
      for (const auto& [from, to] : map)
        if (from == rel)
          return to == rel ? t : Term::bound(to + cutoff);
      throw Error("remap_free: unmapped index b" + std::to_string(t->index()));
    }
    case TermKind::Abs: {
      TermPtr b = remap_rec(t->body(), cutoff + 1, map);
      return b.get() == t->body().get() ? t : Term::abs(std::move(b));
    }
    case TermKind::App: {
      TermPtr f = remap_rec(t->fun(), cutoff, map);
      TermPtr a = remap_rec(t->arg(), cutoff, map);
      if (f.get() == t->fun().get() && a.get() == t->arg().get()) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

}  // namespace

std::vector<uint32_t> free_vars(const TermPtr& t) {
  std::vector<uint32_t> out;
  collect_free(t.get(), 0, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TermPtr remap_free(const TermPtr& t,
                   const std::vector<std::pair<uint32_t, uint32_t>>& map) {
  return remap_rec(t, 0, map);
}

std::pair<TermPtr, std::vector<TermPtr>> spine(const TermPtr& t) {
  std::vector<TermPtr> args;
  TermPtr head = t;
  while (head->kind() == TermKind::App) {
    args.push_back(head->arg());
    head = head->fun();
  }
  std::reverse(args.begin(), args.end());
  return {head, std::move(args)};
}

TermPtr make_app(TermPtr head, const std::vector<TermPtr>& args) {
  for (const TermPtr& a : args) head = Term::app(std::move(head), a);
  return head;
}

namespace {

void display_rec(const Term* t, uint32_t depth, std::string& out) {
  switch (t->kind()) {
    case TermKind::Const:
      out += sym_name(t->sym());
      break;
    case TermKind::Bound:
      if (t->index() < depth) {
        out += 'x';
        out += std::to_string(depth - 1 - t->index());
      } else {
        out += "?b";
        out += std::to_string(t->index());
      }
      break;
    case TermKind::Abs:
      out += "(\\x";
      out += std::to_string(depth);
      out += ". ";
      display_rec(t->body().get(), depth + 1, out);
      out += ')';
      break;
    case TermKind::App:
      out += '(';
      display_rec(t->fun().get(), depth, out);
      out += ' ';
      display_rec(t->arg().get(), depth, out);
      out += ')';
      break;
  }
}

}  // namespace

std::string to_display(const TermPtr& t) {
  std::string out;
  display_rec(t.get(), 0, out);
  return out;
}

}  // namespace holmatch
