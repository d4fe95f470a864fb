#include "lgrp/extensions.hpp"

#include <algorithm>
#include <utility>

namespace lgrp {
namespace {

std::vector<Elem> axis_probes(const DescriptorPtr& d, bool with_negatives) {
  std::vector<Elem> out;
  out.push_back(identity(d));
  const std::size_t n = d->dimension();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> c(n, Int(0));
    c[i] = 1;
    out.push_back(make_elem(d, c));
    if (with_negatives) {
      c[i] = -1;
      out.push_back(make_elem(d, c));
    }
  }
  return out;
}

std::vector<Elem> member_probes(const Subalgebra& s) {
  std::vector<Elem> out = s.generator_list();
  Elem e = identity(s.ambient());
  if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  return out;
}

// Records a bounded-membership outcome into a report: definite non-members
// are violations, out-of-depth lookups only bump the inconclusive counter.
void record_membership(LawReport& r, Membership m, std::vector<Elem> inputs, Elem value,
                       const char* note) {
  switch (m) {
    case Membership::yes:
      return;
    case Membership::no:
      r.record({std::move(inputs), std::move(value), std::nullopt, note});
      return;
    case Membership::inconclusive:
      ++r.inconclusive;
      return;
  }
}

std::vector<std::vector<Int>> identity_matrix(std::size_t n) {
  std::vector<std::vector<Int>> m(n, std::vector<Int>(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Block matrix for an axis inclusion/projection between K (m dims), B (n
// dims) and a total with the kernel coordinates first.
std::vector<std::vector<Int>> block_matrix(std::size_t rows, std::size_t cols,
                                           std::size_t row_off, std::size_t col_off,
                                           std::size_t ones) {
  std::vector<std::vector<Int>> m(rows, std::vector<Int>(cols, Int(0)));
  for (std::size_t i = 0; i < ones; ++i) m[row_off + i][col_off + i] = 1;
  return m;
}

bool is_signed_unit_vector(const Elem& x, std::size_t* index) {
  std::size_t hits = 0, at = 0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (x.coords[i] == 0) continue;
    if (x.coords[i] != 1 && x.coords[i] != -1) return false;
    ++hits;
    at = i;
  }
  if (hits != 1) return false;
  *index = at;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// linear maps

Elem LinearMap::apply(const Elem& x) const {
  if (!x.desc->same_as(*domain)) {
    throw StructuralError("linear map '" + label + "' applied to an element of " +
                          x.desc->name() + ", expected " + domain->name());
  }
  const std::size_t rows = codomain->dimension();
  const std::size_t cols = domain->dimension();
  std::vector<Int> out(rows, Int(0));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (matrix[r][c] != 0) out[r] += matrix[r][c] * x.coords[c];
    }
  }
  return make_elem(codomain, std::move(out));
}

Morphism LinearMap::as_morphism() const {
  LinearMap copy = *this;
  return Morphism{domain, codomain, [copy](const Elem& x) { return copy.apply(x); }, label};
}

LinearMap coordinate_map(DescriptorPtr domain, DescriptorPtr codomain,
                         std::vector<std::vector<Int>> matrix, std::string label) {
  const std::size_t rows = codomain->dimension();
  const std::size_t cols = domain->dimension();
  if (matrix.size() != rows) {
    throw StructuralError("linear map '" + label + "': expected " + std::to_string(rows) +
                          " rows, got " + std::to_string(matrix.size()));
  }
  for (const auto& row : matrix) {
    if (row.size() != cols) {
      throw StructuralError("linear map '" + label + "': expected " + std::to_string(cols) +
                            " columns in every row");
    }
  }
  return LinearMap{std::move(domain), std::move(codomain), std::move(matrix), std::move(label)};
}

LinearMap identity_map(DescriptorPtr d) {
  auto m = identity_matrix(d->dimension());
  return LinearMap{d, d, std::move(m), "id[" + d->name() + "]"};
}

LinearMap zero_map(DescriptorPtr domain, DescriptorPtr codomain) {
  std::vector<std::vector<Int>> m(codomain->dimension(),
                                  std::vector<Int>(domain->dimension(), Int(0)));
  std::string label = "zero[" + domain->name() + "->" + codomain->name() + "]";
  return LinearMap{std::move(domain), std::move(codomain), std::move(m), std::move(label)};
}

LinearMap compose(const LinearMap& f, const LinearMap& g) {
  if (!g.codomain->same_as(*f.domain)) {
    throw StructuralError("compose: '" + f.label + "' does not follow '" + g.label + "'");
  }
  const std::size_t rows = f.codomain->dimension();
  const std::size_t mid = f.domain->dimension();
  const std::size_t cols = g.domain->dimension();
  std::vector<std::vector<Int>> m(rows, std::vector<Int>(cols, Int(0)));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < mid; ++k) {
      if (f.matrix[r][k] == 0) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (g.matrix[k][c] != 0) m[r][c] += f.matrix[r][k] * g.matrix[k][c];
      }
    }
  }
  return LinearMap{g.domain, f.codomain, std::move(m), f.label + "." + g.label};
}

// ---------------------------------------------------------------------------
// split extensions

namespace {

// Shared driver for the sampled structural identities of an extension.
template <typename Draw, typename Check>
LawReport run_structural_check(const SplitExtension& e, const std::string& law,
                               const SamplerConfig& cfg, Draw draw, Check check) {
  LawReport r;
  r.instance = e.label;
  r.law = law;
  SampleStream st = derived_stream(cfg, "ext:" + law + ":" + e.label);
  for (std::size_t i = 0; i < cfg.samples; ++i) check(r, draw(st));
  r.samples = cfg.samples;
  r.finalize();
  return r;
}

}  // namespace

std::vector<LawReport> validate_split_extension(const SplitExtension& e,
                                                const SamplerConfig& cfg) {
  std::vector<LawReport> out;
  out.push_back(check_morphism(e.k.as_morphism(), cfg));
  out.push_back(check_morphism(e.p.as_morphism(), cfg));
  out.push_back(check_morphism(e.s.as_morphism(), cfg));

  out.push_back(run_structural_check(
      e, "ext.split-identity", cfg,
      [&](SampleStream& st) { return sample_elem(e.base, st, cfg.box); },
      [&](LawReport& r, const Elem& b) {
        Elem back = e.p.apply(e.s.apply(b));
        if (back != b) r.record({{b}, back, b, ""});
      }));

  out.push_back(run_structural_check(
      e, "ext.kernel-zero", cfg,
      [&](SampleStream& st) { return sample_elem(e.kernel, st, cfg.box); },
      [&](LawReport& r, const Elem& x) {
        Elem img = e.p.apply(e.k.apply(x));
        if (img != identity(e.base)) r.record({{x}, img, identity(e.base), ""});
      }));

  out.push_back(run_structural_check(
      e, "ext.kernel-retract", cfg,
      [&](SampleStream& st) { return sample_elem(e.kernel, st, cfg.box); },
      [&](LawReport& r, const Elem& x) {
        Elem back = e.kproj.apply(e.k.apply(x));
        if (back != x) r.record({{x}, back, x, ""});
      }));

  out.push_back(run_structural_check(
      e, "ext.kproj-product", cfg,
      [&](SampleStream& st) {
        return std::pair{sample_elem(e.total, st, cfg.box), sample_elem(e.total, st, cfg.box)};
      },
      [&](LawReport& r, const std::pair<Elem, Elem>& ab) {
        Elem lhs = e.kproj.apply(mul(ab.first, ab.second));
        Elem rhs = mul(e.kproj.apply(ab.first), e.kproj.apply(ab.second));
        if (lhs != rhs) r.record({{ab.first, ab.second}, lhs, rhs, ""});
      }));

  out.push_back(run_structural_check(
      e, "ext.decompose", cfg,
      [&](SampleStream& st) { return sample_elem(e.total, st, cfg.box); },
      [&](LawReport& r, const Elem& a) {
        Elem sb = e.s.apply(e.p.apply(a));
        Elem kpart = e.kproj.apply(mul(a, inv(sb)));
        Elem rebuilt = mul(e.k.apply(kpart), sb);
        if (rebuilt != a) r.record({{a}, rebuilt, a, ""});
      }));

  return out;
}

SplitExtension make_split_extension(DescriptorPtr kernel, DescriptorPtr total,
                                    DescriptorPtr base, LinearMap k, LinearMap p, LinearMap s,
                                    LinearMap kproj, std::string label,
                                    const SamplerConfig& cfg) {
  auto expect = [&](const DescriptorPtr& got, const DescriptorPtr& want, const char* what) {
    if (!got->same_as(*want)) {
      throw StructuralError("split extension '" + label + "': " + what + " expected " +
                            want->name() + ", got " + got->name());
    }
  };
  expect(k.domain, kernel, "kernel inclusion domain");
  expect(k.codomain, total, "kernel inclusion codomain");
  expect(p.domain, total, "projection domain");
  expect(p.codomain, base, "projection codomain");
  expect(s.domain, base, "section domain");
  expect(s.codomain, total, "section codomain");
  expect(kproj.domain, total, "kernel retraction domain");
  expect(kproj.codomain, kernel, "kernel retraction codomain");

  SplitExtension e{std::move(kernel), std::move(total), std::move(base),
                   std::move(k),      std::move(p),     std::move(s),
                   std::move(kproj),  std::move(label)};
  std::vector<LawReport> reports = validate_split_extension(e, cfg);
  std::string failed;
  for (const LawReport& r : reports) {
    if (r.passed()) continue;
    if (!failed.empty()) failed += ", ";
    failed += r.law + " on " + r.instance;
  }
  if (!failed.empty()) {
    throw StructuralError("split extension '" + e.label + "' failed validation: " + failed);
  }
  return e;
}

SplitExtension make_lex_extension(DescriptorPtr kernel, DescriptorPtr base,
                                  const SamplerConfig& cfg) {
  DescriptorPtr total = Descriptor::lex(kernel, base);
  const std::size_t m = kernel->dimension();
  const std::size_t n = base->dimension();
  std::string label = "lex-ext(" + kernel->name() + "," + base->name() + ")";
  LinearMap k = coordinate_map(kernel, total, block_matrix(m + n, m, 0, 0, m), label + ".k");
  LinearMap p = coordinate_map(total, base, block_matrix(n, m + n, 0, m, n), label + ".p");
  LinearMap s = coordinate_map(base, total, block_matrix(m + n, n, m, 0, n), label + ".s");
  LinearMap kp = coordinate_map(total, kernel, block_matrix(m, m + n, 0, 0, m), label + ".kproj");
  return make_split_extension(kernel, total, base, std::move(k), std::move(p), std::move(s),
                              std::move(kp), std::move(label), cfg);
}

SplitExtension make_product_extension(DescriptorPtr kernel, DescriptorPtr base,
                                      const SamplerConfig& cfg) {
  const std::size_t m = kernel->dimension();
  const std::size_t n = base->dimension();
  DescriptorPtr total;
  if (zpow_arity(*kernel) && zpow_arity(*base)) {
    total = Descriptor::zpow(m + n);
  } else {
    total = Descriptor::product({kernel, base});
  }
  std::string label = "prod-ext(" + kernel->name() + "," + base->name() + ")";
  LinearMap k = coordinate_map(kernel, total, block_matrix(m + n, m, 0, 0, m), label + ".k");
  LinearMap p = coordinate_map(total, base, block_matrix(n, m + n, 0, m, n), label + ".p");
  LinearMap s = coordinate_map(base, total, block_matrix(m + n, n, m, 0, n), label + ".s");
  LinearMap kp = coordinate_map(total, kernel, block_matrix(m, m + n, 0, 0, m), label + ".kproj");
  return make_split_extension(kernel, total, base, std::move(k), std::move(p), std::move(s),
                              std::move(kp), std::move(label), cfg);
}

// ---------------------------------------------------------------------------
// semidirect view

bool operator==(const PairElem& a, const PairElem& b) {
  return a.kpart == b.kpart && a.bpart == b.bpart;
}

bool operator!=(const PairElem& a, const PairElem& b) { return !(a == b); }

std::string to_string(const PairElem& q) {
  return "(" + to_string(q.kpart) + " ; " + to_string(q.bpart) + ")";
}

SemidirectView::SemidirectView(SplitExtension e) : ext_(std::move(e)) {}

Elem SemidirectView::to_total(const PairElem& q) const {
  return lgrp::mul(ext_.k.apply(q.kpart), ext_.s.apply(q.bpart));
}

PairElem SemidirectView::from_total(const Elem& a) const {
  Elem b = ext_.p.apply(a);
  Elem kpart = ext_.kproj.apply(lgrp::mul(a, lgrp::inv(ext_.s.apply(b))));
  return PairElem{std::move(kpart), std::move(b)};
}

PairElem SemidirectView::identity_pair() const {
  return PairElem{identity(ext_.kernel), identity(ext_.base)};
}

PairElem SemidirectView::mul(const PairElem& a, const PairElem& b) const {
  Elem sb = ext_.s.apply(a.bpart);
  Elem conj = ext_.kproj.apply(lgrp::mul(lgrp::mul(sb, ext_.k.apply(b.kpart)), lgrp::inv(sb)));
  return PairElem{lgrp::mul(a.kpart, conj), lgrp::mul(a.bpart, b.bpart)};
}

PairElem SemidirectView::inv(const PairElem& a) const {
  Elem sb = ext_.s.apply(a.bpart);
  Elem kpart =
      ext_.kproj.apply(lgrp::mul(lgrp::mul(lgrp::inv(sb), lgrp::inv(ext_.k.apply(a.kpart))), sb));
  return PairElem{std::move(kpart), lgrp::inv(a.bpart)};
}

PairElem SemidirectView::join(const PairElem& a, const PairElem& b) const {
  Elem jt = lgrp::join(to_total(a), to_total(b));
  Elem bj = lgrp::join(a.bpart, b.bpart);
  Elem kpart = ext_.kproj.apply(lgrp::mul(jt, lgrp::inv(ext_.s.apply(bj))));
  return PairElem{std::move(kpart), std::move(bj)};
}

PairElem SemidirectView::meet(const PairElem& a, const PairElem& b) const {
  return inv(join(inv(a), inv(b)));
}

LawReport verify_phi_iso(const SplitExtension& e, const SamplerConfig& cfg) {
  LawReport r;
  r.instance = e.label;
  r.law = "ext.phi-iso";
  SemidirectView view(e);
  SampleStream st = derived_stream(cfg, "ext:phi-iso:" + e.label);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    PairElem q1{sample_elem(e.kernel, st, cfg.box), sample_elem(e.base, st, cfg.box)};
    PairElem q2{sample_elem(e.kernel, st, cfg.box), sample_elem(e.base, st, cfg.box)};
    Elem t1 = view.to_total(q1);
    Elem t2 = view.to_total(q2);

    Elem prod_view = view.to_total(view.mul(q1, q2));
    Elem prod_direct = mul(t1, t2);
    if (prod_view != prod_direct) {
      r.record({{q1.kpart, q1.bpart, q2.kpart, q2.bpart}, prod_view, prod_direct, "phi-product"});
    }

    Elem join_view = view.to_total(view.join(q1, q2));
    Elem join_direct = join(t1, t2);
    if (join_view != join_direct) {
      r.record({{q1.kpart, q1.bpart, q2.kpart, q2.bpart}, join_view, join_direct, "phi-join"});
    }

    PairElem round = view.from_total(t1);
    if (round != q1) {
      if (round.kpart != q1.kpart) {
        r.record({{q1.kpart, q1.bpart}, round.kpart, q1.kpart, "psi-phi"});
      } else {
        r.record({{q1.kpart, q1.bpart}, round.bpart, q1.bpart, "psi-phi"});
      }
    }

    Elem a = sample_elem(e.total, st, cfg.box);
    Elem back = view.to_total(view.from_total(a));
    if (back != a) r.record({{a}, back, a, "phi-psi"});
  }
  r.samples = cfg.samples;
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// self-maps

LawReport check_extension_endomorphism(const SplitExtension& e,
                                       const ExtensionEndomorphism& endo,
                                       const SamplerConfig& cfg) {
  LawReport r;
  r.instance = e.label + ":" + endo.label;
  r.law = "ext.endomorphism";
  const LinearMap& g = endo.on_total;
  const LinearMap& f = endo.on_base;
  if (!g.domain->same_as(*e.total) || !g.codomain->same_as(*e.total) ||
      !f.domain->same_as(*e.base) || !f.codomain->same_as(*e.base)) {
    throw StructuralError("extension self-map '" + endo.label +
                          "' does not act on the extension '" + e.label + "'");
  }
  SampleStream st = derived_stream(cfg, "ext:endo:" + r.instance);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Elem x = sample_elem(e.kernel, st, cfg.box);
    Elem b = sample_elem(e.base, st, cfg.box);
    Elem a1 = sample_elem(e.total, st, cfg.box);
    Elem a2 = sample_elem(e.total, st, cfg.box);

    Elem kx = e.k.apply(x);
    Elem fixed = g.apply(kx);
    if (fixed != kx) r.record({{x}, fixed, kx, "fix-kernel"});

    Elem over_lhs = e.p.apply(g.apply(a1));
    Elem over_rhs = f.apply(e.p.apply(a1));
    if (over_lhs != over_rhs) r.record({{a1}, over_lhs, over_rhs, "over-base"});

    Elem sec_lhs = g.apply(e.s.apply(b));
    Elem sec_rhs = e.s.apply(f.apply(b));
    if (sec_lhs != sec_rhs) r.record({{b}, sec_lhs, sec_rhs, "section-compat"});

    Elem gm_lhs = g.apply(mul(a1, a2));
    Elem gm_rhs = mul(g.apply(a1), g.apply(a2));
    if (gm_lhs != gm_rhs) r.record({{a1, a2}, gm_lhs, gm_rhs, "total-morphism"});
    Elem gj_lhs = g.apply(join(a1, a2));
    Elem gj_rhs = join(g.apply(a1), g.apply(a2));
    if (gj_lhs != gj_rhs) r.record({{a1, a2}, gj_lhs, gj_rhs, "total-morphism"});

    Elem b2 = sample_elem(e.base, st, cfg.box);
    Elem fm_lhs = f.apply(mul(b, b2));
    Elem fm_rhs = mul(f.apply(b), f.apply(b2));
    if (fm_lhs != fm_rhs) r.record({{b, b2}, fm_lhs, fm_rhs, "base-morphism"});
    Elem fj_lhs = f.apply(join(b, b2));
    Elem fj_rhs = join(f.apply(b), f.apply(b2));
    if (fj_lhs != fj_rhs) r.record({{b, b2}, fj_lhs, fj_rhs, "base-morphism"});
  }
  r.samples = cfg.samples;
  r.finalize();
  return r;
}

std::pair<ExtensionEndomorphism, ExtensionEndomorphism> non_faithfulness_witness() {
  DescriptorPtr z = Descriptor::integers();
  DescriptorPtr total = Descriptor::lex(z, z);
  ExtensionEndomorphism one{identity_map(total), identity_map(z), "n=1"};
  ExtensionEndomorphism two{
      coordinate_map(total, total, {{Int(1), Int(0)}, {Int(0), Int(2)}}, "top-double"),
      coordinate_map(z, z, {{Int(2)}}, "double"), "n=2"};
  return {std::move(one), std::move(two)};
}

// ---------------------------------------------------------------------------
// section vs. polar of the kernel

bool polar_section_contains(const SplitExtension& e, const Elem& a) {
  if (!a.desc->same_as(*e.total)) {
    throw StructuralError("polar_section_contains: element of " + a.desc->name() +
                          " is not in the total algebra " + e.total->name());
  }
  if (e.s.apply(e.p.apply(a)) != a) return false;  // not in the section image
  const std::size_t m = e.kernel->dimension();
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Int> c(m, Int(0));
    c[i] = 1;
    if (!is_orthogonal(a, e.k.apply(make_elem(e.kernel, c)))) return false;
  }
  return true;
}

LawReport polar_section_ideal_test(const SplitExtension& e, const SamplerConfig& cfg) {
  LawReport r;
  r.instance = e.label;
  r.law = "ext.polar-section-ideal";
  SampleStream st = derived_stream(cfg, "ext:polar-section:" + e.label);

  auto draw_member = [&]() -> Elem {
    for (int t = 0; t < 32; ++t) {
      Elem a = e.s.apply(sample_elem(e.base, st, cfg.box));
      if (polar_section_contains(e, a)) return a;
    }
    return identity(e.total);  // always a member
  };

  std::vector<Elem> members;
  for (const Elem& b : axis_probes(e.base, true)) {
    Elem a = e.s.apply(b);
    if (polar_section_contains(e, a) &&
        std::find(members.begin(), members.end(), a) == members.end()) {
      members.push_back(a);
    }
  }
  std::vector<Elem> ambient = axis_probes(e.total, true);

  std::size_t tried = 0;
  auto check = [&](const Elem& a1, const Elem& a2, const Elem& x, const Elem& y) {
    Elem v = mul(join(mul(a1, x), mul(a2, y)), inv(join(x, y)));
    if (!polar_section_contains(e, v)) r.record({{a1, a2, x, y}, v, std::nullopt, "convexity"});
    Elem conj = mul(mul(inv(x), a1), x);
    if (!polar_section_contains(e, conj)) {
      r.record({{a1, x}, conj, std::nullopt, "conjugation"});
    }
  };

  for (const Elem& a1 : members) {
    for (const Elem& a2 : members) {
      for (const Elem& x : ambient) {
        for (const Elem& y : ambient) {
          if (tried >= cfg.samples) break;
          ++tried;
          check(a1, a2, x, y);
        }
      }
    }
  }
  while (tried < cfg.samples) {
    ++tried;
    Elem a1 = draw_member();
    Elem a2 = draw_member();
    Elem x = sample_elem(e.total, st, cfg.box);
    Elem y = sample_elem(e.total, st, cfg.box);
    check(a1, a2, x, y);
  }
  r.samples = tried;
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// points over a base

PointSubobject make_point_subobject(SplitExtension e, Subalgebra xbar) {
  if (!xbar.ambient()->same_as(*e.kernel)) {
    throw StructuralError("point subobject: kernel trace lives in " + xbar.ambient()->name() +
                          ", extension kernel is " + e.kernel->name());
  }
  return PointSubobject{std::move(e), std::move(xbar)};
}

LawReport closed_under_action_test(const PointSubobject& ps, const SamplerConfig& cfg) {
  const SplitExtension& e = ps.extension;
  LawReport r;
  r.instance = e.label + ":" + ps.xbar.description();
  r.law = "pt.closed-under-action";
  SampleStream st = derived_stream(cfg, "pt:action:" + r.instance);

  auto check_conj = [&](const Elem& l, const Elem& b) {
    Elem sb = e.s.apply(b);
    Elem w = e.kproj.apply(mul(mul(inv(sb), e.k.apply(l)), sb));
    record_membership(r, contains(ps.xbar, w), {l, b}, w, "conjugation");
  };
  auto check_pair = [&](const Elem& l1, const Elem& l2, const Elem& b1, const Elem& b2) {
    Elem t1 = mul(e.k.apply(l1), e.s.apply(b1));
    Elem t2 = mul(e.k.apply(l2), e.s.apply(b2));
    Elem v = mul(join(t1, t2), inv(e.s.apply(join(b1, b2))));
    if (e.p.apply(v) != identity(e.base)) {
      r.record({{l1, l2, b1, b2}, v, std::nullopt, "left-kernel"});
      return;
    }
    Elem w = e.kproj.apply(v);
    record_membership(r, contains(ps.xbar, w), {l1, l2, b1, b2}, w, "join-difference");
  };

  std::vector<Elem> lp = member_probes(ps.xbar);
  std::vector<Elem> bp = axis_probes(e.base, true);
  std::size_t tried = 0;
  for (const Elem& l : lp) {
    for (const Elem& b : bp) {
      if (tried >= cfg.samples) break;
      ++tried;
      check_conj(l, b);
    }
  }
  for (const Elem& l1 : lp) {
    for (const Elem& l2 : lp) {
      for (const Elem& b1 : bp) {
        for (const Elem& b2 : bp) {
          if (tried >= cfg.samples) break;
          ++tried;
          check_pair(l1, l2, b1, b2);
        }
      }
    }
  }
  while (tried < cfg.samples) {
    ++tried;
    Elem l1 = sample_member(ps.xbar, st, cfg.box);
    Elem l2 = sample_member(ps.xbar, st, cfg.box);
    // every fourth draw pins the first base input to the identity, which
    // turns the join-difference into the positive-part form (l b v e)(b v e)^-1
    Elem b1 = (tried % 4 == 0) ? identity(e.base) : sample_elem(e.base, st, cfg.box);
    Elem b2 = sample_elem(e.base, st, cfg.box);
    check_conj(l1, b1);
    check_pair(l1, l2, b1, b2);
  }
  r.samples = tried;
  r.finalize();
  return r;
}

PointSubobject point_centralizer(const PointSubobject& ps) {
  if (!ps.xbar.is_coordinate_ideal()) {
    throw StructuralError(
        "point_centralizer: exact answers need a coordinate-ideal kernel trace, got " +
        ps.xbar.description());
  }
  return PointSubobject{ps.extension, polar(ps.xbar)};
}

LawReport pt_product_cooperator_test(const PointSubobject& a, const PointSubobject& b,
                                     const SamplerConfig& cfg) {
  const SplitExtension& e = a.extension;
  if (e.label != b.extension.label || !e.total->same_as(*b.extension.total) ||
      !e.kernel->same_as(*b.extension.kernel) || !e.base->same_as(*b.extension.base)) {
    throw StructuralError("pt_product_cooperator_test: the two points live over "
                          "different extensions");
  }
  LawReport r;
  r.instance = e.label + ":" + a.xbar.description() + "|" + b.xbar.description();
  r.law = "pt.cooperator";
  SemidirectView view(e);
  SampleStream st = derived_stream(cfg, "pt:cooperator:" + r.instance);

  // One fibered element is (x, y, b): the pair ((x,b),(y,b)) with equal base
  // component; the candidate cooperator sends it to (x y, b).
  auto check = [&](const Elem& x1, const Elem& y1, const Elem& b1, const Elem& x2,
                   const Elem& y2, const Elem& b2) {
    PairElem px1{x1, b1}, py1{y1, b1}, px2{x2, b2}, py2{y2, b2};
    PairElem c1{mul(x1, y1), b1};
    PairElem c2{mul(x2, y2), b2};

    PairElem prod_x = view.mul(px1, px2);
    PairElem prod_y = view.mul(py1, py2);
    if (prod_x.bpart != prod_y.bpart) {
      r.record({{x1, y1, b1, x2, y2, b2}, prod_x.bpart, prod_y.bpart, "fiber-product"});
      return;
    }
    Elem prod_lhs = view.to_total(PairElem{mul(prod_x.kpart, prod_y.kpart), prod_x.bpart});
    Elem prod_rhs = view.to_total(view.mul(c1, c2));
    if (prod_lhs != prod_rhs) {
      r.record({{x1, y1, b1, x2, y2, b2}, prod_lhs, prod_rhs, "product"});
    }

    PairElem join_x = view.join(px1, px2);
    PairElem join_y = view.join(py1, py2);
    if (join_x.bpart != join_y.bpart) {
      r.record({{x1, y1, b1, x2, y2, b2}, join_x.bpart, join_y.bpart, "fiber-join"});
      return;
    }
    Elem join_lhs = view.to_total(PairElem{mul(join_x.kpart, join_y.kpart), join_x.bpart});
    Elem join_rhs = view.to_total(view.join(c1, c2));
    if (join_lhs != join_rhs) {
      r.record({{x1, y1, b1, x2, y2, b2}, join_lhs, join_rhs, "join"});
    }
  };

  std::vector<Elem> xp = member_probes(a.xbar);
  std::vector<Elem> yp = member_probes(b.xbar);
  std::vector<Elem> bp = axis_probes(e.base, false);
  std::size_t tried = 0;
  for (const Elem& x1 : xp) {
    for (const Elem& y1 : yp) {
      for (const Elem& x2 : xp) {
        for (const Elem& y2 : yp) {
          for (const Elem& b1 : bp) {
            for (const Elem& b2 : bp) {
              if (tried >= cfg.samples) break;
              ++tried;
              check(x1, y1, b1, x2, y2, b2);
            }
          }
        }
      }
    }
  }
  while (tried < cfg.samples) {
    ++tried;
    Elem x1 = sample_member(a.xbar, st, cfg.box);
    Elem x2 = sample_member(a.xbar, st, cfg.box);
    Elem y1 = sample_member(b.xbar, st, cfg.box);
    Elem y2 = sample_member(b.xbar, st, cfg.box);
    Elem b1 = sample_elem(e.base, st, cfg.box);
    Elem b2 = sample_elem(e.base, st, cfg.box);
    check(x1, y1, b1, x2, y2, b2);
  }
  r.samples = tried;
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// join closure behind coherence

LawReport coherence_join_closure_test(const SplitExtension& e, const Subalgebra& K,
                                      const Subalgebra& H, const SamplerConfig& cfg) {
  if (!K.ambient()->same_as(*e.kernel) || !H.ambient()->same_as(*e.kernel)) {
    throw StructuralError("coherence_join_closure_test: both subalgebras must live in "
                          "the kernel " + e.kernel->name());
  }
  Subalgebra joined = [&] {
    if (K.is_coordinate_ideal() && H.is_coordinate_ideal()) {
      std::set<std::size_t> support = K.support();
      support.insert(H.support().begin(), H.support().end());
      return Subalgebra::coordinate_ideal(e.kernel, std::move(support),
                                          std::max(K.closure_box(), H.closure_box()));
    }
    std::vector<Elem> gens = K.generator_list();
    for (Elem g : H.generator_list()) {
      if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(std::move(g));
    }
    return Subalgebra::generated(e.kernel, std::move(gens), 4,
                                 K.closure_box() + H.closure_box() + 4);
  }();

  LawReport r;
  r.instance = e.label + ":" + K.description() + "v" + H.description();
  r.law = "ext.coherence-join-closure";
  SampleStream st = derived_stream(cfg, "ext:coherence:" + r.instance);

  Elem unit_total = identity(e.total);
  auto check = [&](const Elem& l, const Elem& h, const Elem& b) {
    Elem kl = e.k.apply(l);
    Elem kh = e.k.apply(h);
    Elem sb = e.s.apply(b);
    Elem sb_pos_inv = inv(join(sb, unit_total));

    Elem v1 = mul(join(mul(mul(kl, kh), sb), unit_total), sb_pos_inv);
    if (e.p.apply(v1) != identity(e.base)) {
      r.record({{l, h, b}, v1, std::nullopt, "left-kernel"});
    } else {
      Elem w1 = e.kproj.apply(v1);
      record_membership(r, contains(joined, w1), {l, h, b}, w1, "final-term");
    }

    Elem v2 = mul(join(mul(join(kl, kh), sb), inv(meet(kl, kh))), sb_pos_inv);
    if (e.p.apply(v2) != identity(e.base)) {
      r.record({{l, h, b}, v2, std::nullopt, "left-kernel"});
    } else {
      Elem w2 = e.kproj.apply(v2);
      record_membership(r, contains(joined, w2), {l, h, b}, w2, "intermediate-term");
    }
  };

  std::vector<Elem> lp = member_probes(K);
  std::vector<Elem> hp = member_probes(H);
  std::vector<Elem> bp = axis_probes(e.base, true);
  std::size_t tried = 0;
  for (const Elem& l : lp) {
    for (const Elem& h : hp) {
      for (const Elem& b : bp) {
        if (tried >= cfg.samples) break;
        ++tried;
        check(l, h, b);
      }
    }
  }
  while (tried < cfg.samples) {
    ++tried;
    Elem l = sample_member(K, st, cfg.box);
    Elem h = sample_member(H, st, cfg.box);
    Elem b = (tried % 4 == 0) ? identity(e.base) : sample_elem(e.base, st, cfg.box);
    check(l, h, b);
  }
  r.samples = tried;
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// composite ideals

LawReport strong_proto_composite_test(const SplitExtension& outer, const SplitExtension& inner,
                                      const LinearMap& m, const SamplerConfig& cfg,
                                      std::function<bool(const Elem&)> kernel_image_invariant,
                                      std::function<bool(const Elem&)> total_image_invariant) {
  if (!inner.total->same_as(*outer.kernel)) {
    throw StructuralError("strong_proto_composite_test: inner total " + inner.total->name() +
                          " must be the outer kernel " + outer.kernel->name());
  }
  if (!m.domain->same_as(*inner.kernel) || !m.codomain->same_as(*outer.kernel)) {
    throw StructuralError("strong_proto_composite_test: embedding '" + m.label +
                          "' must map the inner kernel into the outer kernel");
  }
  std::optional<std::size_t> inner_arity = zpow_arity(*inner.kernel);
  if (!inner_arity) {
    throw StructuralError("strong_proto_composite_test: inner kernel must be an integer "
                          "power, got " + inner.kernel->name());
  }
  LawReport mr = check_morphism(m.as_morphism(), cfg);
  if (!mr.passed()) {
    throw StructuralError("strong_proto_composite_test: embedding '" + m.label +
                          "' failed the morphism check");
  }

  auto image_subalgebra = [&](const DescriptorPtr& ambient, const LinearMap& map,
                              const std::function<bool(const Elem&)>& invariant) {
    std::vector<Elem> gens;
    for (std::size_t i = 0; i < *inner_arity; ++i) {
      std::vector<Int> c(*inner_arity, Int(0));
      c[i] = 1;
      gens.push_back(map.apply(make_elem(inner.kernel, c)));
    }
    if (zpow_arity(*ambient)) {
      std::set<std::size_t> support;
      bool coordinate = true;
      for (const Elem& g : gens) {
        std::size_t at = 0;
        if (!is_signed_unit_vector(g, &at)) {
          coordinate = false;
          break;
        }
        support.insert(at);
      }
      if (coordinate) {
        return Subalgebra::coordinate_ideal(ambient, std::move(support), 4 * cfg.box + 8);
      }
    }
    Subalgebra s = Subalgebra::generated(ambient, std::move(gens), 4, 4 * cfg.box + 8);
    return invariant ? s.with_invariant(invariant) : s;
  };

  Subalgebra image_in_kernel = image_subalgebra(outer.kernel, m, kernel_image_invariant);
  LawReport rk = ideal_test(image_in_kernel, cfg);
  if (!rk.passed()) {
    throw StructuralError("strong_proto_composite_test: image of the inner kernel in " +
                          outer.kernel->name() + " did not validate as an ideal (status " +
                          to_string(rk.status) + ")");
  }

  LinearMap into_total = compose(outer.k, m);
  LawReport rc = check_morphism(into_total.as_morphism(), cfg);
  if (!rc.passed()) {
    throw StructuralError("strong_proto_composite_test: composite inclusion '" +
                          into_total.label + "' failed the morphism check");
  }

  Subalgebra image_in_total = image_subalgebra(outer.total, into_total, total_image_invariant);
  LawReport r = ideal_test(image_in_total, cfg);
  r.law = "ext.strong-proto-composite";
  r.instance = outer.label + ":" + inner.label + ":" + m.label;
  return r;
}

}  // namespace lgrp
