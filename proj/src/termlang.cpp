#include "lgrp/termlang.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace lgrp {

// ---------------------------------------------------------------------------
// term construction

TermPtr Term::make(Kind k, std::string name, TermPtr l, TermPtr r) {
  if ((k == Kind::Mul || k == Kind::Join || k == Kind::Meet) && (!l || !r))
    throw StructuralError("term: binary node with missing child");
  if ((k == Kind::Inv || k == Kind::Abs || k == Kind::Pos || k == Kind::Neg) && !l)
    throw StructuralError("term: unary node with missing child");
  Term t;
  t.kind_ = k;
  t.name_ = std::move(name);
  t.left_ = std::move(l);
  t.right_ = std::move(r);
  return std::make_shared<const Term>(std::move(t));
}

TermPtr Term::unit() {
  static TermPtr u = make(Kind::Unit, "", nullptr, nullptr);
  return u;
}
TermPtr Term::var(std::string name) {
  if (name.empty()) throw StructuralError("var: empty name");
  return make(Kind::Var, std::move(name), nullptr, nullptr);
}
TermPtr Term::mul(TermPtr a, TermPtr b) { return make(Kind::Mul, "", std::move(a), std::move(b)); }
TermPtr Term::inverse(TermPtr a) { return make(Kind::Inv, "", std::move(a), nullptr); }
TermPtr Term::join(TermPtr a, TermPtr b) { return make(Kind::Join, "", std::move(a), std::move(b)); }
TermPtr Term::meet(TermPtr a, TermPtr b) { return make(Kind::Meet, "", std::move(a), std::move(b)); }
TermPtr Term::abs(TermPtr a) { return make(Kind::Abs, "", std::move(a), nullptr); }
TermPtr Term::pos(TermPtr a) { return make(Kind::Pos, "", std::move(a), nullptr); }
TermPtr Term::neg(TermPtr a) { return make(Kind::Neg, "", std::move(a), nullptr); }

std::size_t Term::node_count() const {
  std::size_t n = 1;
  if (left_) n += left_->node_count();
  if (right_) n += right_->node_count();
  return n;
}

bool Term::same_term(const Term& other) const {
  if (kind_ != other.kind_ || name_ != other.name_) return false;
  if (!!left_ != !!other.left_ || !!right_ != !!other.right_) return false;
  if (left_ && !left_->same_term(*other.left_)) return false;
  if (right_ && !right_->same_term(*other.right_)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// lexer

namespace {

enum class Tok { End, Ident, Unit, Join, Meet, Star, Inv, LParen, RParen, AbsL, PosL, NegL };

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Unit: return "'e'";
    case Tok::Join: return "'\\/'";
    case Tok::Meet: return "'/\\'";
    case Tok::Star: return "'*'";
    case Tok::Inv: return "'^-1'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::AbsL: return "'abs('";
    case Tok::PosL: return "'pos('";
    case Tok::NegL: return "'neg('";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    std::size_t tl = line, tc = col;
    if (c == '(') {
      out.push_back({Tok::LParen, "(", tl, tc});
      advance(1);
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", tl, tc});
      advance(1);
    } else if (c == '*') {
      out.push_back({Tok::Star, "*", tl, tc});
      advance(1);
    } else if (c == '\\') {
      if (i + 1 < src.size() && src[i + 1] == '/') {
        out.push_back({Tok::Join, "\\/", tl, tc});
        advance(2);
      } else {
        throw SyntaxError(tl, tc, std::string(1, c), {"'\\/'"});
      }
    } else if (c == '/') {
      if (i + 1 < src.size() && src[i + 1] == '\\') {
        out.push_back({Tok::Meet, "/\\", tl, tc});
        advance(2);
      } else {
        throw SyntaxError(tl, tc, std::string(1, c), {"'/\\'"});
      }
    } else if (c == '^') {
      if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '1') {
        out.push_back({Tok::Inv, "^-1", tl, tc});
        advance(3);
      } else {
        throw SyntaxError(tl, tc, std::string(1, c), {"'^-1'"});
      }
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      advance(j - i);
      // The sugar heads are single tokens including their parenthesis, so the
      // '(' must follow immediately, with no whitespace.
      if ((word == "abs" || word == "pos" || word == "neg") && i < src.size() &&
          src[i] == '(') {
        Tok k = word == "abs" ? Tok::AbsL : word == "pos" ? Tok::PosL : Tok::NegL;
        out.push_back({k, word + "(", tl, tc});
        advance(1);
      } else if (word == "e") {
        out.push_back({Tok::Unit, "e", tl, tc});
      } else {
        out.push_back({Tok::Ident, word, tl, tc});
      }
    } else {
      throw SyntaxError(tl, tc, std::string(1, c),
                        {"'e'", "identifier", "'('", "'abs('", "'pos('", "'neg('"});
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// parser

struct Parser {
  const std::vector<Token>& toks;
  std::size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  bool at(Tok k) const { return toks[pos].kind == k; }
  Token take() { return toks[pos++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    throw SyntaxError(t.line, t.col, t.kind == Tok::End ? "end of input" : t.text,
                      std::move(expected));
  }

  TermPtr parse_join() {
    TermPtr t = parse_meet();
    while (at(Tok::Join)) {
      take();
      t = Term::join(t, parse_meet());
    }
    return t;
  }
  TermPtr parse_meet() {
    TermPtr t = parse_prod();
    while (at(Tok::Meet)) {
      take();
      t = Term::meet(t, parse_prod());
    }
    return t;
  }
  TermPtr parse_prod() {
    TermPtr t = parse_unary();
    while (at(Tok::Star)) {
      take();
      t = Term::mul(t, parse_unary());
    }
    return t;
  }
  TermPtr parse_unary() {
    TermPtr t = parse_atom();
    if (at(Tok::Inv)) {
      take();
      t = Term::inverse(t);
    }
    return t;
  }
  TermPtr parse_atom() {
    switch (peek().kind) {
      case Tok::Unit:
        take();
        return Term::unit();
      case Tok::Ident:
        return Term::var(take().text);
      case Tok::LParen: {
        take();
        TermPtr t = parse_join();
        if (!at(Tok::RParen)) fail({"')'", "'\\/'", "'/\\'", "'*'"});
        take();
        return t;
      }
      case Tok::AbsL:
      case Tok::PosL:
      case Tok::NegL: {
        Tok k = take().kind;
        TermPtr t = parse_join();
        if (!at(Tok::RParen)) fail({"')'", "'\\/'", "'/\\'", "'*'"});
        take();
        return k == Tok::AbsL ? Term::abs(t) : k == Tok::PosL ? Term::pos(t) : Term::neg(t);
      }
      default:
        fail({"'e'", "identifier", "'('", "'abs('", "'pos('", "'neg('"});
    }
  }
};

}  // namespace

SyntaxError::SyntaxError(std::size_t line_, std::size_t column_, const std::string& found_,
                         std::vector<std::string> expected_tokens)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << line_ << ":" << column_ << ": expected ";
        for (std::size_t i = 0; i < expected_tokens.size(); ++i) {
          if (i) os << (i + 1 == expected_tokens.size() ? " or " : ", ");
          os << expected_tokens[i];
        }
        os << ", found '" << found_ << "'";
        return os.str();
      }()),
      line(line_),
      column(column_),
      found(found_),
      expected(std::move(expected_tokens)) {}

TermPtr parse_term(const std::string& src) {
  auto toks = lex(src);
  Parser p{toks};
  TermPtr t = p.parse_join();
  if (!p.at(Tok::End)) p.fail({"'\\/'", "'/\\'", "'*'", "end of input"});
  return t;
}

// ---------------------------------------------------------------------------
// rendering

namespace {

// atom = 5, inverse = 4, product = 3, meet = 2, join = 1
int precedence(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Join: return 1;
    case Term::Kind::Meet: return 2;
    case Term::Kind::Mul: return 3;
    case Term::Kind::Inv: return 4;
    default: return 5;
  }
}

void render_into(const Term& t, int min_prec, std::string& out) {
  int p = precedence(t);
  bool parens = p < min_prec;
  if (parens) out += '(';
  switch (t.kind()) {
    case Term::Kind::Unit:
      out += 'e';
      break;
    case Term::Kind::Var:
      out += t.name();
      break;
    case Term::Kind::Abs:
      out += "abs(";
      render_into(*t.left(), 1, out);
      out += ')';
      break;
    case Term::Kind::Pos:
      out += "pos(";
      render_into(*t.left(), 1, out);
      out += ')';
      break;
    case Term::Kind::Neg:
      out += "neg(";
      render_into(*t.left(), 1, out);
      out += ')';
      break;
    case Term::Kind::Inv:
      render_into(*t.left(), 5, out);
      out += "^-1";
      break;
    case Term::Kind::Mul:
      render_into(*t.left(), 3, out);
      out += " * ";
      render_into(*t.right(), 4, out);
      break;
    case Term::Kind::Meet:
      render_into(*t.left(), 2, out);
      out += " /\\ ";
      render_into(*t.right(), 3, out);
      break;
    case Term::Kind::Join:
      render_into(*t.left(), 1, out);
      out += " \\/ ";
      render_into(*t.right(), 2, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string render_term(const TermPtr& t) {
  if (!t) throw StructuralError("render_term: null term");
  std::string out;
  render_into(*t, 1, out);
  return out;
}

std::vector<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> names;
  std::function<void(const Term&)> walk = [&](const Term& n) {
    if (n.kind() == Term::Kind::Var) names.insert(n.name());
    if (n.left()) walk(*n.left());
    if (n.right()) walk(*n.right());
  };
  walk(*t);
  return std::vector<std::string>(names.begin(), names.end());
}

// ---------------------------------------------------------------------------
// evaluation

Elem eval_term(const TermPtr& t, const Env& env, const DescriptorPtr& desc) {
  if (!t) throw StructuralError("eval_term: null term");
  switch (t->kind()) {
    case Term::Kind::Unit:
      return identity(desc);
    case Term::Kind::Var: {
      auto it = env.find(t->name());
      if (it == env.end())
        throw StructuralError("eval_term: unbound variable '" + t->name() + "'");
      if (!it->second.desc->same_as(*desc))
        throw StructuralError("eval_term: variable '" + t->name() + "' bound in " +
                              it->second.desc->name() + ", expected " + desc->name());
      return it->second;
    }
    case Term::Kind::Mul:
      return mul(eval_term(t->left(), env, desc), eval_term(t->right(), env, desc));
    case Term::Kind::Inv:
      return inv(eval_term(t->left(), env, desc));
    case Term::Kind::Join:
      return join(eval_term(t->left(), env, desc), eval_term(t->right(), env, desc));
    case Term::Kind::Meet:
      return meet(eval_term(t->left(), env, desc), eval_term(t->right(), env, desc));
    case Term::Kind::Abs:
      return abs_val(eval_term(t->left(), env, desc));
    case Term::Kind::Pos:
      return pos_part(eval_term(t->left(), env, desc));
    case Term::Kind::Neg:
      return neg_part(eval_term(t->left(), env, desc));
  }
  throw StructuralError("eval_term: unknown node kind");
}

// ---------------------------------------------------------------------------
// normal form

std::size_t NormalForm::node_count() const {
  std::size_t n = 0;
  for (const auto& m : joinands) {
    n += 1;
    for (const auto& w : m) n += 1 + w.size();
  }
  return n;
}

namespace {

using Word = NormalForm::Word;
using Meetand = NormalForm::Meetand;

[[noreturn]] void budget_blown(std::size_t budget) {
  throw ResourceError("normal form exceeded the " + std::to_string(budget) +
                      "-node budget");
}

// Concatenate and freely reduce: adjacent (v,+1)(v,-1) pairs cancel.
Word word_concat(const Word& a, const Word& b) {
  Word out = a;
  for (const auto& f : b) {
    if (!out.empty() && out.back().first == f.first && out.back().second == -f.second)
      out.pop_back();
    else
      out.push_back(f);
  }
  return out;
}

void push_unique(Meetand& m, Word w) {
  if (std::find(m.begin(), m.end(), w) == m.end()) m.push_back(std::move(w));
}

void push_unique(std::vector<Meetand>& js, Meetand m) {
  if (std::find(js.begin(), js.end(), m) == js.end()) js.push_back(std::move(m));
}

struct NfBuilder {
  std::size_t budget;

  void check(const NormalForm& nf) const {
    if (nf.node_count() > budget) budget_blown(budget);
  }

  NormalForm joined(const NormalForm& a, const NormalForm& b) const {
    NormalForm out = a;
    for (const auto& m : b.joinands) push_unique(out.joinands, m);
    check(out);
    return out;
  }

  // (V_i A_i) /\ (V_j B_j)  =  V_{i,j} (A_i /\ B_j): lattice distributivity
  // keeps joins outermost; meetands concatenate.
  NormalForm met(const NormalForm& a, const NormalForm& b) const {
    NormalForm out;
    std::size_t running = 0;
    for (const auto& ma : a.joinands)
      for (const auto& mb : b.joinands) {
        Meetand m = ma;
        for (const auto& w : mb) push_unique(m, w);
        running += m.size() + 1;
        if (running > budget) budget_blown(budget);
        push_unique(out.joinands, std::move(m));
      }
    check(out);
    return out;
  }

  // Products distribute over joins and meets on both sides, so the product of
  // two join-of-meet forms is the join over pairs of meetands of the meet
  // over pairs of concatenated words.
  NormalForm multiplied(const NormalForm& a, const NormalForm& b) const {
    NormalForm out;
    std::size_t running = 0;
    for (const auto& ma : a.joinands)
      for (const auto& mb : b.joinands) {
        Meetand m;
        for (const auto& u : ma)
          for (const auto& w : mb) {
            running += u.size() + w.size() + 1;
            if (running > budget) budget_blown(budget);
            push_unique(m, word_concat(u, w));
          }
        push_unique(out.joinands, std::move(m));
      }
    check(out);
    return out;
  }
};

TermPtr desugar(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Unit:
    case Term::Kind::Var:
      return t;
    case Term::Kind::Mul:
      return Term::mul(desugar(t->left()), desugar(t->right()));
    case Term::Kind::Inv:
      return Term::inverse(desugar(t->left()));
    case Term::Kind::Join:
      return Term::join(desugar(t->left()), desugar(t->right()));
    case Term::Kind::Meet:
      return Term::meet(desugar(t->left()), desugar(t->right()));
    case Term::Kind::Abs: {
      TermPtr s = desugar(t->left());
      return Term::join(s, Term::inverse(s));
    }
    case Term::Kind::Pos:
      return Term::join(desugar(t->left()), Term::unit());
    case Term::Kind::Neg:
      return Term::meet(desugar(t->left()), Term::unit());
  }
  throw StructuralError("desugar: unknown node kind");
}

// `inverted` pushes an enclosing ^-1 down: it swaps join with meet, reverses
// products, and flips the sign of variables, so no intermediate Inv nodes are
// ever materialized.
NormalForm nf_rec(const Term& t, bool inverted, const NfBuilder& nb) {
  switch (t.kind()) {
    case Term::Kind::Unit:
      return NormalForm{{Meetand{Word{}}}};
    case Term::Kind::Var:
      return NormalForm{{Meetand{Word{{t.name(), inverted ? -1 : +1}}}}};
    case Term::Kind::Inv:
      return nf_rec(*t.left(), !inverted, nb);
    case Term::Kind::Mul: {
      NormalForm l = nf_rec(*t.left(), inverted, nb);
      NormalForm r = nf_rec(*t.right(), inverted, nb);
      return inverted ? nb.multiplied(r, l) : nb.multiplied(l, r);
    }
    case Term::Kind::Join: {
      NormalForm l = nf_rec(*t.left(), inverted, nb);
      NormalForm r = nf_rec(*t.right(), inverted, nb);
      return inverted ? nb.met(l, r) : nb.joined(l, r);
    }
    case Term::Kind::Meet: {
      NormalForm l = nf_rec(*t.left(), inverted, nb);
      NormalForm r = nf_rec(*t.right(), inverted, nb);
      return inverted ? nb.joined(l, r) : nb.met(l, r);
    }
    default:
      throw StructuralError("normal_form: sugar survived desugaring");
  }
}

}  // namespace

NormalForm normal_form(const TermPtr& t, std::size_t node_budget) {
  if (!t) throw StructuralError("normal_form: null term");
  NfBuilder nb{node_budget};
  return nf_rec(*desugar(t), false, nb);
}

TermPtr NormalForm::to_term() const {
  if (joinands.empty()) throw StructuralError("normal form without joinands");
  auto word_term = [](const Word& w) {
    if (w.empty()) return Term::unit();
    TermPtr t;
    for (const auto& [name, sign] : w) {
      TermPtr f = Term::var(name);
      if (sign < 0) f = Term::inverse(f);
      t = t ? Term::mul(t, f) : f;
    }
    return t;
  };
  TermPtr out;
  for (const auto& m : joinands) {
    if (m.empty()) throw StructuralError("normal form with empty meetand");
    TermPtr mt;
    for (const auto& w : m) {
      TermPtr wt = word_term(w);
      mt = mt ? Term::meet(mt, wt) : wt;
    }
    out = out ? Term::join(out, mt) : mt;
  }
  return out;
}

std::string NormalForm::render() const { return render_term(to_term()); }

// ---------------------------------------------------------------------------
// refutation

namespace {
// Environments over a fixed variable list compare variable-by-variable by
// coordinate tuples; this is the order in which the smallest witness wins.
bool env_less(const Env& a, const Env& b, const std::vector<std::string>& vars) {
  for (const auto& v : vars) {
    const Elem& x = a.at(v);
    const Elem& y = b.at(v);
    if (coord_less(x, y)) return true;
    if (coord_less(y, x)) return false;
  }
  return false;
}
}  // namespace

std::optional<Refutation> refute_identity(const TermPtr& lhs, const TermPtr& rhs,
                                          const DescriptorPtr& desc,
                                          const SamplerConfig& cfg) {
  if (!lhs || !rhs) throw StructuralError("refute_identity: null term");
  std::set<std::string> names;
  for (const auto& v : free_vars(lhs)) names.insert(v);
  for (const auto& v : free_vars(rhs)) names.insert(v);
  std::vector<std::string> vars(names.begin(), names.end());

  SampleStream s = derived_stream(
      cfg, "refute:" + render_term(lhs) + "==" + render_term(rhs) + ":" + desc->name());
  std::optional<Refutation> best;
  // The whole budget is always exhausted and the lexicographically smallest
  // witness kept, so any partition of the stream reports the same result.
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Env env;
    for (const auto& v : vars) env.emplace(v, sample_elem(desc, s, cfg.box));
    Elem l = eval_term(lhs, env, desc);
    Elem r = eval_term(rhs, env, desc);
    if (l != r) {
      if (!best || env_less(env, best->witness, vars))
        best = Refutation{std::move(env), std::move(l), std::move(r)};
    }
  }
  return best;
}

LawReport check_protomodular_witness(const DescriptorPtr& desc, const SamplerConfig& cfg) {
  LawReport r;
  r.instance = desc->name();
  r.law = "protomodular.division-witness";
  r.samples = cfg.samples;
  SampleStream s = derived_stream(cfg, "protomodular:" + desc->name());
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Elem x = sample_elem(desc, s, cfg.box);
    Elem y = sample_elem(desc, s, cfg.box);
    // t1(x,y) = x^-1 y and t(x,z) = x z: t(x, t1(x,y)) recovers y ...
    Elem t1 = mul(inv(x), y);
    Elem back = mul(x, t1);
    if (back != y) r.record({{x, y}, back, y, "recover"});
    // ... and t1 vanishes on the diagonal.
    Elem diag = mul(inv(x), x);
    if (diag != identity(desc)) r.record({{x}, diag, identity(desc), "diagonal"});
  }
  r.finalize();
  return r;
}

}  // namespace lgrp
