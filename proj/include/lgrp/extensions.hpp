#ifndef LGRP_EXTENSIONS_HPP
#define LGRP_EXTENSIONS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lgrp/core.hpp"
#include "lgrp/subobjects.hpp"

// Split extensions K >--k--> A <==p/s==> B over the stock instances, the
// semidirect reconstruction of the total algebra from pairs (kernel, base),
// section/polar interaction tests, points-category centralizers and
// cooperators, the join-closure condition behind algebraic coherence, and the
// composite-ideal test behind strong protomodularity.

namespace lgrp {

// ---------------------------------------------------------------------------
// linear maps
//
// Every morphism used by the extension machinery acts linearly on flattened
// coordinates, so one exact integer matrix covers identities, inclusions,
// projections, scalings and their composites.  Linearity guarantees a group
// homomorphism on these instances; whether the lattice structure is also
// preserved is exactly what check_morphism decides, and constructions below
// validate their maps before use.

struct LinearMap {
  DescriptorPtr domain;
  DescriptorPtr codomain;
  std::vector<std::vector<Int>> matrix;  // codomain dimension x domain dimension
  std::string label;

  Elem apply(const Elem& x) const;
  Morphism as_morphism() const;  // evaluable view for check_morphism etc.
};

LinearMap coordinate_map(DescriptorPtr domain, DescriptorPtr codomain,
                         std::vector<std::vector<Int>> matrix, std::string label);
LinearMap identity_map(DescriptorPtr d);
LinearMap zero_map(DescriptorPtr domain, DescriptorPtr codomain);
LinearMap compose(const LinearMap& f, const LinearMap& g);  // f after g

// ---------------------------------------------------------------------------
// split extensions

struct SplitExtension {
  DescriptorPtr kernel, total, base;
  LinearMap k;      // kernel inclusion          K -> A
  LinearMap p;      // split projection          A -> B
  LinearMap s;      // section of p              B -> A
  LinearMap kproj;  // kernel retraction         A -> K (group level only; on a
                    // lex total this is not a lattice morphism, and nothing
                    // below requires it to be one)
  std::string label;
};

// One report per structural requirement: k, p, s pass the morphism check;
// p(s(b)) = b; p(k(x)) = e; kproj(k(x)) = x; kproj preserves products; and
// every a decomposes as k(kproj(a s(p(a))^-1)) s(p(a)) (which also makes
// every p-kernel element an exact k-image).
std::vector<LawReport> validate_split_extension(const SplitExtension& e,
                                                const SamplerConfig& cfg);

// Builds and validates; throws StructuralError naming the failed checks.
SplitExtension make_split_extension(DescriptorPtr kernel, DescriptorPtr total,
                                    DescriptorPtr base, LinearMap k, LinearMap p,
                                    LinearMap s, LinearMap kproj, std::string label,
                                    const SamplerConfig& cfg = {});

// K >--> lex(K,B) <==> B with axis inclusions and projections.
SplitExtension make_lex_extension(DescriptorPtr kernel = Descriptor::integers(),
                                  DescriptorPtr base = Descriptor::integers(),
                                  const SamplerConfig& cfg = {});

// K >--> K x B <==> B with axis inclusions and projections; the total is
// flattened to Z^(m+n) when both factors are integer powers.
SplitExtension make_product_extension(DescriptorPtr kernel = Descriptor::integers(),
                                      DescriptorPtr base = Descriptor::integers(),
                                      const SamplerConfig& cfg = {});

// ---------------------------------------------------------------------------
// semidirect view
//
// The total algebra rebuilt on pairs (kernel part, base part).  phi glues a
// pair back into the total algebra; psi splits a total element.  Product and
// join of pairs are computed by the split-off formulas
//     (k1, b1)(k2, b2)      = (k1 * (b1 k2 b1^-1), b1 b2)
//     (k1, b1) v (k2, b2)   = ((k1 b1 v k2 b2)(b1 v b2)^-1, b1 v b2)
// where every mixed expression is evaluated inside the total algebra through
// k and s, and pulled back to the kernel through kproj.

struct PairElem {
  Elem kpart;
  Elem bpart;
};

bool operator==(const PairElem& a, const PairElem& b);
bool operator!=(const PairElem& a, const PairElem& b);
std::string to_string(const PairElem& q);

class SemidirectView {
 public:
  explicit SemidirectView(SplitExtension e);

  const SplitExtension& extension() const { return ext_; }

  Elem to_total(const PairElem& q) const;    // phi(k, b) = k(k) s(b)
  PairElem from_total(const Elem& a) const;  // psi(a) = (kproj(a s(p(a))^-1), p(a))

  PairElem identity_pair() const;
  PairElem mul(const PairElem& a, const PairElem& b) const;
  PairElem inv(const PairElem& a) const;
  PairElem join(const PairElem& a, const PairElem& b) const;
  // Derived from join and inversion, mirroring the element-level definition.
  PairElem meet(const PairElem& a, const PairElem& b) const;

 private:
  SplitExtension ext_;
};

// Samples pairs and total elements and checks that phi sends pair product and
// pair join to the total algebra's product and join, and that psi inverts phi
// in both directions (which makes phi injective on every sample).
LawReport verify_phi_iso(const SplitExtension& e, const SamplerConfig& cfg);

// ---------------------------------------------------------------------------
// self-maps of a split extension

// A pair (g on the total algebra, f on the base) intended to commute with
// the extension structure: g k = k, p g = f p, g s = s f.
struct ExtensionEndomorphism {
  LinearMap on_total;
  LinearMap on_base;
  std::string label;
};

// Sampled check of the three commuting squares above (notes "fix-kernel",
// "over-base", "section-compat") plus the morphism check for both maps.
LawReport check_extension_endomorphism(const SplitExtension& e,
                                       const ExtensionEndomorphism& endo,
                                       const SamplerConfig& cfg);

// Two distinct self-maps of the lex extension that agree on the kernel and
// pass every commuting check: (identity, identity) and (top-doubling with
// base doubling).  They differ already at (0,1).  This witnesses that a
// split extension over these instances can map to itself in more than one
// way without disturbing the kernel.
std::pair<ExtensionEndomorphism, ExtensionEndomorphism> non_faithfulness_witness();

// ---------------------------------------------------------------------------
// section vs. polar of the kernel

// Membership in { a in s(B) : a orthogonal to the whole kernel image }.
// Exact: a = s(p(a)) decides the section image, and orthogonality to k(X) is
// decided against the kernel's coordinate generators.
bool polar_section_contains(const SplitExtension& e, const Elem& a);

// Runs the convexity probe and conjugation closure for that subset inside
// the total algebra.  Membership is exact, so the report is never
// inconclusive.
LawReport polar_section_ideal_test(const SplitExtension& e, const SamplerConfig& cfg);

// ---------------------------------------------------------------------------
// points over a base

// A subalgebra of the kernel, considered as the kernel-trace of a subobject
// X̄ x B of the point (A, p, s).
struct PointSubobject {
  SplitExtension extension;
  Subalgebra xbar;  // lives in extension.kernel
};

PointSubobject make_point_subobject(SplitExtension e, Subalgebra xbar);

// The two closure conditions for being stable under the base action, checked
// inside the total algebra and pulled back to the kernel:
//   conjugation    s(b)^-1 k(l) s(b)            stays in xbar
//   join-difference (k(l1)s(b1) v k(l2)s(b2)) s(b1 v b2)^-1   stays in xbar
// (with l2 = e, b2 = e the second term specializes to the positive-part form
// (l b v e)(b v e)^-1, which the probe grid always exercises).
LawReport closed_under_action_test(const PointSubobject& ps, const SamplerConfig& cfg);

// The centralizing point subobject: xbar replaced by its polar.  Exact
// coordinate-ideal representations only.
PointSubobject point_centralizer(const PointSubobject& ps);

// Samples pairs of the fibered product (equal base components) and checks
// that the candidate cooperator ((x,b),(y,b)) |-> (x y, b) preserves pair
// product and pair join.  Join preservation holds exactly when the two
// kernel traces are orthogonal.
LawReport pt_product_cooperator_test(const PointSubobject& a, const PointSubobject& b,
                                     const SamplerConfig& cfg);

// ---------------------------------------------------------------------------
// join closure behind coherence

// For subalgebras K, H of the kernel (each assumed stable under the base
// action), forms their join K v H (union of generators; exact union ideal
// when both are coordinate ideals) and checks that both the final term
//     (k h b v e)(b v e)^-1
// and the intermediate term
//     ((k v h) b v (k ^ h)^-1)(b v e)^-1
// land back in K v H, evaluating in the total algebra and deciding
// membership by bounded closure.  Fails only on definite non-membership.
LawReport coherence_join_closure_test(const SplitExtension& e, const Subalgebra& K,
                                      const Subalgebra& H, const SamplerConfig& cfg);

// ---------------------------------------------------------------------------
// composite ideals

// inner:  X >--> Y' <==> B'   outer:  Y >--> C <==> B   with Y' = Y, and
// m : X -> Y an embedding whose image is an ideal of Y.  The test pushes the
// image through outer's kernel inclusion and runs the ideal test inside C;
// a pass certifies that an ideal of an ideal is still an ideal of the total.
// Precondition failures (m not a morphism, image not validated as an ideal
// of Y, mismatched shapes) throw StructuralError.  The optional invariants
// give the bounded membership checks a definite "no" inside Y and C.
LawReport strong_proto_composite_test(
    const SplitExtension& outer, const SplitExtension& inner, const LinearMap& m,
    const SamplerConfig& cfg,
    std::function<bool(const Elem&)> kernel_image_invariant = nullptr,
    std::function<bool(const Elem&)> total_image_invariant = nullptr);

}  // namespace lgrp

#endif  // LGRP_EXTENSIONS_HPP
