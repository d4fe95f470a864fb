#ifndef LGRP_SUBOBJECTS_HPP
#define LGRP_SUBOBJECTS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "lgrp/core.hpp"

// Subalgebras of the stock instances, membership with honest "don't know",
// sampled convexity/ideal/orthogonality tests, polars, and the commutator of
// coordinate ideals together with its brute-force oracle.

namespace lgrp {

enum class Membership { yes, no, inconclusive };
std::string to_string(Membership m);

// Either an explicitly generated subalgebra (membership decided through a
// depth- and box-bounded closure, so "no" is never definite unless the caller
// supplies an invariant the whole subalgebra satisfies) or the exact ideal of
// elements supported on a coordinate set of Z^n.
class Subalgebra {
 public:
  // (Defaults for the depth and box fields are supplied by the factories; in
  // a nested class a default member initializer would be parsed too late for
  // the std::variant member below.)
  struct Generated {
    std::vector<Elem> generators;
    int closure_depth;
    std::int64_t closure_box;
    // Optional exact invariant: must hold on every member.  When present,
    // elements violating it are definite non-members.
    std::function<bool(const Elem&)> invariant;
  };
  struct CoordinateIdeal {
    std::set<std::size_t> support;
    std::int64_t closure_box;  // only relevant when materializing members
  };

  static Subalgebra generated(DescriptorPtr ambient, std::vector<Elem> generators,
                              int closure_depth = 4, std::int64_t closure_box = 16);
  // Ambient must be Z^n; membership is exact.
  static Subalgebra coordinate_ideal(DescriptorPtr ambient, std::set<std::size_t> support,
                                     std::int64_t closure_box = 16);

  // Copy with an exact invariant attached (generated subalgebras only;
  // coordinate ideals already decide membership exactly).
  Subalgebra with_invariant(std::function<bool(const Elem&)> invariant) const;

  const DescriptorPtr& ambient() const { return ambient_; }
  bool is_coordinate_ideal() const;
  const std::set<std::size_t>& support() const;        // CoordinateIdeal only
  const Generated& generated_rep() const;              // Generated only
  std::int64_t closure_box() const;                    // either representation
  // Depth at which a closure round first added nothing (set lazily once a
  // bounded closure computation observes it); deeper closures are equal.
  std::optional<int> closure_fixpoint() const;
  std::string description() const;

  // All generators, materialized: unit vectors of the support for coordinate
  // ideals, the given list otherwise.
  std::vector<Elem> generator_list() const;

 private:
  Subalgebra() = default;
  DescriptorPtr ambient_;
  std::variant<Generated, CoordinateIdeal> rep_;
  // cache of closure sets per depth, grown lazily; shared across copies
  struct Cache;
  std::shared_ptr<Cache> cache_;
  friend std::vector<Elem> bounded_closure_at(const Subalgebra&, int);
};

inline constexpr std::size_t closure_cardinality_budget = 200000;
inline constexpr int max_membership_depth = 6;

// Elements reachable from the generators (plus the identity) by
// `closure_depth` rounds of products, inverses, joins and meets, discarding
// anything with a coordinate outside the closure box.  Sorted canonically.
// Throws ResourceError past the cardinality budget.
std::vector<Elem> bounded_closure(const Subalgebra& s);
std::vector<Elem> bounded_closure_at(const Subalgebra& s, int depth);

// Exact for coordinate ideals.  For generated subalgebras: yes when the
// element appears in the closure, deepening the search up to
// max_membership_depth; definite no only through the invariant; otherwise
// inconclusive.
Membership contains(const Subalgebra& s, const Elem& x);

// Uniform draw from the subalgebra, coordinates bounded by `box`.
Elem sample_member(const Subalgebra& s, SampleStream& stream, std::int64_t box);

// Sampled convexity: (a1 x v a2 y)(x v y)^-1 must land back in the
// subalgebra for members a1, a2 and ambient x, y.  A small deterministic
// probe grid over generators and unit vectors runs first so that canonical
// witnesses are found reproducibly.
LawReport convexity_test(const Subalgebra& s, const SamplerConfig& cfg);

// Convexity plus closure under conjugation z^-1 a z.
LawReport ideal_test(const Subalgebra& s, const SamplerConfig& cfg);

// Exact polar of a coordinate ideal: the ideal on the complementary support.
// Anything else is unsupported here; use polar_test for sampled evidence.
Subalgebra polar(const Subalgebra& s);

// Sampled cooperation test for two subalgebras of one ambient instance:
// members must be orthogonal, commute, and satisfy pos(ab) = pos(a) pos(b).
// Any sample where orthogonality disagrees with the other two checks is
// reported separately (note "orthogonality-mismatch"): no such sample can
// exist over these instances.
LawReport polar_test(const Subalgebra& a, const Subalgebra& b, const SamplerConfig& cfg);

// The smallest coordinate ideal N such that the images of h and k in the
// quotient by N cooperate; for coordinate ideals that is exactly the ideal
// on the intersection of supports.
Subalgebra huq_commutator_ideals(const Subalgebra& h, const Subalgebra& k);

// Independent oracle: enumerate all coordinate ideals N of Z^n (n <= 8),
// test disjointness of the quotient images directly, and return the unique
// minimal N; throws StructuralError if the minimum is not unique.
Subalgebra huq_bruteforce(const Subalgebra& h, const Subalgebra& k);

// All 2^n coordinate ideals of Z^n, as supports in canonical order.
std::vector<std::set<std::size_t>> ideal_lattice(std::size_t n);

// Exhaustive distributivity of the coordinate-ideal lattice (meet =
// intersection, join = union); n <= 5.
LawReport distributivity_check(std::size_t n);

// Congruence on Z^n determined by a coordinate ideal: x ~ y iff x y^-1 is
// supported on the ideal.
struct CongruenceOnZn {
  DescriptorPtr ambient;
  Subalgebra ideal;
  bool related(const Elem& x, const Elem& y) const;
};

// The centralizing congruence: the one whose ideal is the polar of the
// given congruence's ideal.
CongruenceOnZn congruence_centralizer(const CongruenceOnZn& r);

// Helper for the working assumption behind coordinate ideals: closure under
// the algebra operations *and* order-betweenness (every z with
// meet(a,b) <= z <= join(a,b) for members a, b), iterated to a fixpoint
// inside the box.  Z^n ambients only: there the order interval is exactly a
// coordinate box, so it can be enumerated.
std::vector<Elem> bounded_convex_closure(const Subalgebra& s);

}  // namespace lgrp

#endif  // LGRP_SUBOBJECTS_HPP
