#ifndef LGRP_CORE_HPP
#define LGRP_CORE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

// Exact computational models of lattice-ordered groups built from copies of
// the integers: finite powers of Z, finite direct products, lexicographic
// glueings, and coordinate quotients.  Every value is a tuple of exact
// arbitrary-size integers; there is no floating point anywhere.

namespace lgrp {

using Int = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// errors

// Ill-formed constructions and mismatched operands.
struct StructuralError : std::logic_error {
  explicit StructuralError(const std::string& what) : std::logic_error(what) {}
};

// A configured budget (node count, closure cardinality, ...) was exhausted.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// descriptors

class Descriptor;
using DescriptorPtr = std::shared_ptr<const Descriptor>;

// Shape of one instance.  Elements of every instance are flat integer tuples;
// the descriptor fixes the tuple length and how the lattice order reads the
// coordinates.  Descriptors are immutable and compared structurally.
class Descriptor {
 public:
  enum class Kind { Integers, Product, Lex, Quotient };

  static DescriptorPtr integers();
  static DescriptorPtr product(std::vector<DescriptorPtr> factors);
  static DescriptorPtr zpow(std::size_t n);  // product of n copies of Z
  // Lexicographic extension: `top` must be totally ordered.
  static DescriptorPtr lex(DescriptorPtr kernel, DescriptorPtr top);
  // Quotient of Z^n by the coordinate ideal on `killed` (indices into base).
  static DescriptorPtr quotient(DescriptorPtr base, std::set<std::size_t> killed);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }
  bool totally_ordered() const { return totally_ordered_; }
  // All kinds here have commutative group reducts.
  bool commutative() const { return true; }

  const std::vector<DescriptorPtr>& factors() const;    // Product
  const DescriptorPtr& lex_kernel() const;              // Lex
  const DescriptorPtr& lex_top() const;                 // Lex
  const DescriptorPtr& quotient_base() const;           // Quotient
  const std::set<std::size_t>& killed_support() const;  // Quotient

  // Canonical text form ("Z", "Z^3", "prod(Z^2,lex(Z,Z))", "quot(Z^3,{0})").
  const std::string& name() const { return name_; }
  bool same_as(const Descriptor& other) const { return name_ == other.name_; }

 private:
  Descriptor() = default;
  Kind kind_ = Kind::Integers;
  std::size_t dimension_ = 1;
  bool totally_ordered_ = true;
  std::vector<DescriptorPtr> factors_;
  DescriptorPtr lex_kernel_, lex_top_;
  DescriptorPtr quotient_base_;
  std::set<std::size_t> killed_;
  std::string name_;
};

// Parse the canonical descriptor syntax: Z | Z^n | prod(D,...) | lex(D,D) |
// quot(Z^n,{i,...}).  Throws StructuralError on malformed input.
DescriptorPtr parse_descriptor(const std::string& text);

// n such that the instance is literally Z^n (Z itself counts as n = 1);
// nullopt for lex and quotient shapes.
std::optional<std::size_t> zpow_arity(const Descriptor& d);

// ---------------------------------------------------------------------------
// elements

struct Elem {
  std::vector<Int> coords;
  DescriptorPtr desc;
};

Elem make_elem(DescriptorPtr desc, std::vector<Int> coords);
Elem identity(const DescriptorPtr& desc);

bool operator==(const Elem& a, const Elem& b);
bool operator!=(const Elem& a, const Elem& b);
// Lexicographic coordinate comparison; used for canonical ordering of
// witnesses and closure sets, not for the lattice order.
bool coord_less(const Elem& a, const Elem& b);

std::string to_string(const Elem& x);

Elem mul(const Elem& x, const Elem& y);
Elem inv(const Elem& x);
Elem join(const Elem& x, const Elem& y);
// Meet is always derived from join and inversion; no instance special-cases it.
Elem meet(const Elem& x, const Elem& y);
bool leq(const Elem& x, const Elem& y);  // x <= y  iff  join(x,y) == y

Elem pos_part(const Elem& x);            // x v e
Elem neg_part(const Elem& x);            // x ^ e
Elem abs_val(const Elem& x);             // x v x^-1
bool is_positive(const Elem& x);         // e <= x
bool is_orthogonal(const Elem& x, const Elem& y);  // |x| ^ |y| == e

// The group Mal'tsev operation x * y^-1 * z.
Elem maltsev(const Elem& x, const Elem& y, const Elem& z);

// Drop the killed coordinates of a base element (base = quotient's base).
Elem project_to_quotient(const DescriptorPtr& quot, const Elem& base_elem);

// ---------------------------------------------------------------------------
// deterministic sampling
//
// Streams must be byte-identical across platforms, so the generator is spelled
// out here rather than taken from <random>: splitmix64 (Steele-Lea-Flood
// update; state += 0x9E3779B97F4A7C15, output mixed by two xor-shift-multiply
// rounds).  Bounded draws use plain modulo, which is exactly reproducible; the
// bias is irrelevant for the tiny ranges used here.

class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);  // uniform-ish in [0, n)
  Int coordinate(std::int64_t box);      // uniform-ish in [-box, box]

 private:
  std::uint64_t state_;
};

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::int64_t box = 16;       // coordinates drawn from [-box, box]
  std::size_t samples = 10000;
};

// Independent per-purpose stream: seed xor FNV-1a(label), so adding one law
// never shifts the draws of another.
SampleStream derived_stream(const SamplerConfig& cfg, const std::string& label);

Elem sample_elem(const DescriptorPtr& desc, SampleStream& s, std::int64_t box);

// ---------------------------------------------------------------------------
// reports

enum class Status { pass, fail, inconclusive };
std::string to_string(Status s);

struct Violation {
  std::vector<Elem> inputs;
  Elem lhs;
  std::optional<Elem> rhs;
  std::string note;  // empty, or which sub-check tripped
};

// Outcome of one sampled (or exhaustive) check.  `status` is fail exactly
// when a definite violation was recorded; inconclusive only when bounded
// membership queries ran out of depth and nothing failed outright.
struct LawReport {
  std::string instance;
  std::string law;
  std::size_t samples = 0;
  Status status = Status::pass;
  std::vector<Violation> violations;  // at most max_stored, canonical order
  std::size_t violation_total = 0;
  std::size_t inconclusive = 0;

  static constexpr std::size_t max_stored = 8;

  void record(Violation v);
  void finalize();  // settles status from the recorded counts
  bool passed() const { return status == Status::pass; }

  // Serialized form: every integer is a decimal string so arbitrary-size
  // values survive any JSON consumer.
  std::string to_json() const;
};

std::string reports_to_json(const std::vector<LawReport>& reports);

// ---------------------------------------------------------------------------
// morphisms (evaluable view)

struct Morphism {
  DescriptorPtr domain;
  DescriptorPtr codomain;
  std::function<Elem(const Elem&)> fn;
  std::string label;
};

// A map of these instances is a full lattice-group morphism as soon as it
// preserves products and positive parts; this checks exactly those two on
// sampled inputs.
LawReport check_morphism(const Morphism& f, const SamplerConfig& cfg);

// Direct sampled check of join preservation (the conclusion the positive-part
// test is a shortcut for).
LawReport check_join_preservation(const Morphism& f, const SamplerConfig& cfg);

// ---------------------------------------------------------------------------
// law suite

// One report per law: group axioms, join-semilattice axioms, derived-meet
// lattice axioms with absorption and distributivity, two-sided product
// distributivity over join and meet, and the element-level identities
// relating products, meets, joins, positive/negative parts and absolute
// values.  The product = join * meet identity is only emitted for instances
// with commutative group reduct.
std::vector<LawReport> law_suite(const DescriptorPtr& desc, const SamplerConfig& cfg);

// Searches for a quadruple witnessing that multiplication is not a lattice
// morphism on the square, i.e. mul(join(a,c), join(b,d)) != join(mul(a,b),
// mul(c,d)).  Probes a small deterministic {0,1}-coordinate grid first (so
// the reported witness is stable), then random samples.  The only instance
// with no witness is the one-element one.
LawReport internal_group_refuter(const DescriptorPtr& desc, const SamplerConfig& cfg);

}  // namespace lgrp

#endif  // LGRP_CORE_HPP
