#ifndef LGRP_TERMLANG_HPP
#define LGRP_TERMLANG_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lgrp/core.hpp"

// Terms over the lattice-group signature {*, e, ^-1, \/, /\} with sugar for
// absolute value and positive/negative parts, plus a normalizer and a sampled
// identity refuter.

namespace lgrp {

// Parse failure with position and the tokens that would have been accepted.
struct SyntaxError : std::runtime_error {
  SyntaxError(std::size_t line, std::size_t column, const std::string& found,
              std::vector<std::string> expected_tokens);
  std::size_t line;
  std::size_t column;
  std::string found;
  std::vector<std::string> expected;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
 public:
  enum class Kind { Unit, Var, Mul, Inv, Join, Meet, Abs, Pos, Neg };

  static TermPtr unit();
  static TermPtr var(std::string name);
  static TermPtr mul(TermPtr a, TermPtr b);
  static TermPtr inverse(TermPtr a);
  static TermPtr join(TermPtr a, TermPtr b);
  static TermPtr meet(TermPtr a, TermPtr b);
  static TermPtr abs(TermPtr a);   // sugar: t \/ t^-1
  static TermPtr pos(TermPtr a);   // sugar: t \/ e
  static TermPtr neg(TermPtr a);   // sugar: t /\ e

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }  // Var only
  const TermPtr& left() const { return left_; }      // first child
  const TermPtr& right() const { return right_; }    // second child (binary)

  std::size_t node_count() const;
  bool same_term(const Term& other) const;  // structural equality

 private:
  Term() = default;
  static TermPtr make(Kind k, std::string name, TermPtr l, TermPtr r);
  Kind kind_ = Kind::Unit;
  std::string name_;
  TermPtr left_, right_;
};

// Grammar (whitespace between tokens is ignored; "abs(" etc. are single
// tokens, so no space may separate the word from its parenthesis):
//
//   term  := join
//   join  := meet  { "\/" meet }
//   meet  := prod  { "/\" prod }
//   prod  := unary { "*" unary }
//   unary := atom [ "^-1" ]
//   atom  := "e" | ident | "(" term ")"
//          | "abs(" term ")" | "pos(" term ")" | "neg(" term ")"
//   ident := letter { letter | digit | "_" }    (except the keyword "e")
//
// Inverse binds tightest, then product, then meet, then join; the binary
// operators associate to the left.
TermPtr parse_term(const std::string& src);

// Concrete syntax with minimal parentheses; parse_term(render_term(t)) is
// structurally identical to t.
std::string render_term(const TermPtr& t);

// Distinct free variables, sorted ascending by name.
std::vector<std::string> free_vars(const TermPtr& t);

using Env = std::map<std::string, Elem>;

// Evaluate in the instance the environment's values live in.  Every free
// variable must be bound; all bindings must share one descriptor.
Elem eval_term(const TermPtr& t, const Env& env, const DescriptorPtr& desc);

// Join of meets of freely reduced group words: the canonical-shape result of
// pushing inverses to the leaves, distributing products over the lattice
// operations, and distributing joins outside meets.  No ordering of joinands
// or meetands is imposed beyond deduplication, so this is a normal *shape*,
// not a canonical form; it always evaluates like the source term.
struct NormalForm {
  // (variable, +1) or (variable, -1); adjacent inverse pairs are reduced
  using Word = std::vector<std::pair<std::string, int>>;
  using Meetand = std::vector<Word>;     // non-empty: meet of words
  std::vector<Meetand> joinands;         // non-empty: join of meetands

  std::size_t node_count() const;
  TermPtr to_term() const;
  std::string render() const;
};

inline constexpr std::size_t default_nf_budget = 100000;

// Throws ResourceError naming the budget when the intermediate node count
// would exceed it (meets under products nest exponentially in the worst case).
NormalForm normal_form(const TermPtr& t, std::size_t node_budget = default_nf_budget);

// Samples environments over `desc` and reports the lexicographically smallest
// refuting environment found in the whole budget (so any split of the sample
// stream reports the same witness), or nullopt if none was found.
struct Refutation {
  Env witness;
  Elem lhs;
  Elem rhs;
};
std::optional<Refutation> refute_identity(const TermPtr& lhs, const TermPtr& rhs,
                                          const DescriptorPtr& desc,
                                          const SamplerConfig& cfg);

// The division-style witness for the pointed protomodularity of these
// instances: t1(x,y) = x^-1 * y and t(x,z) = x * z satisfy t(x, t1(x,y)) = y
// and t1(x,x) = e.  Checked on samples.
LawReport check_protomodular_witness(const DescriptorPtr& desc, const SamplerConfig& cfg);

}  // namespace lgrp

#endif  // LGRP_TERMLANG_HPP
