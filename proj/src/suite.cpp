#include "lgrp/suite.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "lgrp/extensions.hpp"
#include "lgrp/subobjects.hpp"
#include "lgrp/termlang.hpp"

namespace lgrp {
namespace {

using json = nlohmann::ordered_json;

SamplerConfig capped(const SamplerConfig& cfg, std::size_t cap) {
  SamplerConfig c = cfg;
  c.samples = std::min(cfg.samples, cap);
  return c;
}

SamplerConfig boxed(const SamplerConfig& cfg, std::int64_t box) {
  SamplerConfig c = cfg;
  c.box = std::min(cfg.box, box);
  return c;
}

Elem zn(const DescriptorPtr& d, std::vector<long> coords) {
  std::vector<Int> c(coords.begin(), coords.end());
  return make_elem(d, std::move(c));
}

// Characteristic vector of a coordinate support, as an element of Z^n.
Elem support_char(const DescriptorPtr& d, const std::set<std::size_t>& support) {
  std::vector<Int> c(d->dimension(), 0);
  for (std::size_t i : support) c[i] = 1;
  return make_elem(d, std::move(c));
}

// A random map whose matrix has at most one nonzero entry per output row.
// With nonnegative scales these are exactly the full morphisms between
// integer-power instances; flipping one scale negative breaks the
// positive-part law (and with it join preservation).
LinearMap random_axis_map(SampleStream& st, int index, bool violator) {
  const std::size_t n = 1 + static_cast<std::size_t>(st.below(3));
  const std::size_t m = 1 + static_cast<std::size_t>(st.below(3));
  std::vector<std::vector<Int>> rows(m, std::vector<Int>(n, Int(0)));
  const std::size_t flipped_row = static_cast<std::size_t>(st.below(m));
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t col = static_cast<std::size_t>(st.below(n));
    Int scale = static_cast<long>(st.below(5));  // 0..4
    if (violator && r == flipped_row) {
      scale = -static_cast<long>(1 + st.below(4));  // -4..-1
    }
    rows[r][col] = scale;
  }
  std::string label =
      (violator ? "axis-violator-" : "axis-map-") + std::to_string(index);
  return coordinate_map(Descriptor::zpow(n), Descriptor::zpow(m), std::move(rows),
                        std::move(label));
}

std::vector<LawReport> run_random_morphism_checks(const SamplerConfig& cfg,
                                                  bool violators) {
  const std::string stream_label =
      violators ? "suite:morphism-violators" : "suite:morphism-valid";
  SampleStream st = derived_stream(cfg, stream_label);
  std::vector<LawReport> reports;
  reports.reserve(40);
  for (int i = 0; i < 20; ++i) {
    LinearMap map = random_axis_map(st, i, violators);
    Morphism m = map.as_morphism();
    reports.push_back(check_morphism(m, cfg));
    reports.push_back(check_join_preservation(m, cfg));
  }
  return reports;
}

// Random term over variables x, y, z with bounded depth.  Meets are drawn
// with lower weight because meets under products are what blow up normal
// forms; the normal-form budget still guards the worst case.
TermPtr random_term(SampleStream& st, int depth) {
  if (depth == 0 || st.below(5) == 0) {
    switch (st.below(4)) {
      case 0: return Term::unit();
      case 1: return Term::var("x");
      case 2: return Term::var("y");
      default: return Term::var("z");
    }
  }
  switch (st.below(8)) {
    case 0:
    case 1: return Term::mul(random_term(st, depth - 1), random_term(st, depth - 1));
    case 2:
    case 3: return Term::join(random_term(st, depth - 1), random_term(st, depth - 1));
    case 4: return Term::meet(random_term(st, depth - 1), random_term(st, depth - 1));
    case 5: return Term::inverse(random_term(st, depth - 1));
    case 6: return Term::abs(random_term(st, depth - 1));
    default:
      return st.below(2) == 0 ? Term::pos(random_term(st, depth - 1))
                              : Term::neg(random_term(st, depth - 1));
  }
}

std::size_t nf_term_count(const SamplerConfig& cfg) {
  return std::max<std::size_t>(1, std::min<std::size_t>(1000, cfg.samples / 10));
}

std::size_t nf_env_count(const SamplerConfig& cfg) {
  return std::max<std::size_t>(1, std::min<std::size_t>(100, cfg.samples / 100));
}

// Normal-form soundness: random terms must evaluate exactly like their
// normal forms on random environments.  Terms whose normal form would blow
// the node budget are redrawn (the redraw policy is part of the row's
// documented parameters).
LawReport nf_soundness_report(const SamplerConfig& cfg) {
  const auto desc = Descriptor::zpow(2);
  const std::size_t term_target = nf_term_count(cfg);
  const std::size_t env_target = nf_env_count(cfg);

  LawReport r;
  r.instance = desc->name();
  r.law = "nf.eval-agreement";

  SampleStream term_stream = derived_stream(cfg, "suite:nf-term");
  SampleStream env_stream = derived_stream(cfg, "suite:nf-env");

  std::size_t made = 0;
  std::size_t attempts_left = term_target * 50 + 100;
  while (made < term_target) {
    if (attempts_left-- == 0) {
      throw ResourceError("normal-form soundness row exhausted its redraw budget");
    }
    const int depth = 1 + static_cast<int>(term_stream.below(6));
    TermPtr term = random_term(term_stream, depth);
    TermPtr flattened;
    try {
      flattened = normal_form(term).to_term();
    } catch (const ResourceError&) {
      continue;  // oversized normal form: redraw
    }
    ++made;
    for (std::size_t e = 0; e < env_target; ++e) {
      Env env;
      env["x"] = sample_elem(desc, env_stream, cfg.box);
      env["y"] = sample_elem(desc, env_stream, cfg.box);
      env["z"] = sample_elem(desc, env_stream, cfg.box);
      const Elem lhs = eval_term(term, env, desc);
      const Elem rhs = eval_term(flattened, env, desc);
      ++r.samples;
      if (lhs != rhs) {
        std::string note = render_term(term);
        if (note.size() > 120) note = note.substr(0, 117) + "...";
        r.record(Violation{{env["x"], env["y"], env["z"]}, lhs, rhs, std::move(note)});
      }
    }
  }
  r.finalize();
  return r;
}

struct NamedIdentity {
  std::string name;
  std::string lhs;
  std::string rhs;
};

const std::vector<NamedIdentity>& surviving_identities() {
  static const std::vector<NamedIdentity> identities = {
      {"translate-meet-inv", "a * (x /\\ y)^-1 * b", "(a * x^-1 * b) \\/ (a * y^-1 * b)"},
      {"join-from-meet", "x * (x /\\ y)^-1 * y", "x \\/ y"},
      {"decompose-join-meet", "x", "(x \\/ y) * y^-1 * (x /\\ y)"},
      {"pos-neg-parts", "x", "pos(x) * neg(x)"},
      {"abs-from-parts", "abs(x)", "pos(x) * neg(x)^-1"},
      {"product-join-meet", "x * y", "(x \\/ y) * (x /\\ y)"},
  };
  return identities;
}

std::vector<LawReport> identity_survival_reports(const SamplerConfig& cfg) {
  const auto desc = Descriptor::zpow(2);
  std::vector<LawReport> reports;
  for (const NamedIdentity& id : surviving_identities()) {
    LawReport r;
    r.instance = desc->name() + ":" + id.name;
    r.law = "nf.identity-survives";
    r.samples = cfg.samples;
    auto refutation = refute_identity(parse_term(id.lhs), parse_term(id.rhs), desc, cfg);
    if (refutation) {
      std::vector<Elem> inputs;
      for (const auto& [var, value] : refutation->witness) inputs.push_back(value);
      r.record(Violation{std::move(inputs), refutation->lhs, refutation->rhs,
                         "refuted:" + id.name});
    }
    r.finalize();
    reports.push_back(std::move(r));
  }
  return reports;
}

// Exhaustive fast-vs-bruteforce agreement for the commutator of coordinate
// ideals, over every support pair of Z^1..Z^4.
LawReport commutator_agreement_report(const SamplerConfig&) {
  LawReport r;
  r.instance = "Z^1..Z^4";
  r.law = "huq.oracle-agreement";
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto desc = Descriptor::zpow(n);
    const auto lattice = ideal_lattice(n);
    for (const auto& hs : lattice) {
      for (const auto& ks : lattice) {
        const auto h = Subalgebra::coordinate_ideal(desc, hs);
        const auto k = Subalgebra::coordinate_ideal(desc, ks);
        const Subalgebra fast = huq_commutator_ideals(h, k);
        const Subalgebra slow = huq_bruteforce(h, k);
        ++r.samples;
        if (fast.support() != slow.support()) {
          r.record(Violation{{support_char(desc, hs), support_char(desc, ks)},
                             support_char(desc, fast.support()),
                             support_char(desc, slow.support()),
                             "fast-vs-bruteforce"});
        }
      }
    }
  }
  r.finalize();
  return r;
}

// The two commuting self-maps of the lex extension must differ somewhere:
// at the probe (0, 1) on the total algebra and at 3 on the base.
LawReport self_maps_differ_report(const SamplerConfig& cfg) {
  auto ext = make_lex_extension(Descriptor::integers(), Descriptor::integers(),
                                capped(cfg, 2000));
  auto [first, second] = non_faithfulness_witness();

  LawReport r;
  r.instance = ext.label;
  r.law = "ext.self-maps-differ";
  r.samples = 2;

  const Elem total_probe = zn(ext.total, {0, 1});
  const Elem g1 = first.on_total.apply(total_probe);
  const Elem g2 = second.on_total.apply(total_probe);
  if (g1 == g2) {
    r.record(Violation{{total_probe}, g1, g2, "total-maps-agree-at-probe"});
  }
  const Elem base_probe = zn(ext.base, {3});
  const Elem f1 = first.on_base.apply(base_probe);
  const Elem f2 = second.on_base.apply(base_probe);
  if (f1 == f2) {
    r.record(Violation{{base_probe}, f1, f2, "base-maps-agree-at-probe"});
  }
  r.finalize();
  return r;
}

// For every pair of coordinate-ideal kernel traces of Z^3 over base Z, the
// product-pair cooperator check must agree with the sampled polar check, and
// both must agree with exact support disjointness.
LawReport cooperator_agreement_report(const SamplerConfig& cfg) {
  const auto kernel = Descriptor::zpow(3);
  const auto ext = make_product_extension(kernel, Descriptor::integers(),
                                          capped(cfg, 2000));
  const SamplerConfig per_pair = capped(cfg, 1500);
  const auto lattice = ideal_lattice(3);

  LawReport r;
  r.instance = ext.label;
  r.law = "pt.cooperator-vs-polar";
  for (const auto& sa : lattice) {
    for (const auto& sb : lattice) {
      const auto ia = Subalgebra::coordinate_ideal(kernel, sa);
      const auto ib = Subalgebra::coordinate_ideal(kernel, sb);
      const auto pa = make_point_subobject(ext, ia);
      const auto pb = make_point_subobject(ext, ib);
      const LawReport coop = pt_product_cooperator_test(pa, pb, per_pair);
      const LawReport pol = polar_test(ia, ib, per_pair);
      std::set<std::size_t> overlap;
      std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                            std::inserter(overlap, overlap.begin()));
      const bool expect_cooperate = overlap.empty();
      ++r.samples;
      if (coop.passed() != expect_cooperate || pol.passed() != expect_cooperate) {
        r.record(Violation{{support_char(kernel, sa), support_char(kernel, sb)},
                           support_char(kernel, sa), support_char(kernel, sb),
                           "coop=" + to_string(coop.status) +
                               ",polar=" + to_string(pol.status) + ",disjoint=" +
                               (expect_cooperate ? "yes" : "no")});
      }
    }
  }
  r.finalize();
  return r;
}

// Serialized reports must be byte-identical when the same checks run twice
// with the same configuration.
LawReport report_replay_report(const SamplerConfig& cfg) {
  LawReport r;
  r.instance = "lex(Z,Z)+Z";
  r.law = "suite.report-replay";
  r.samples = 2;

  const auto ext = make_lex_extension(Descriptor::integers(), Descriptor::integers(),
                                      capped(cfg, 2000));
  const std::string phi_first = verify_phi_iso(ext, cfg).to_json();
  const std::string phi_second = verify_phi_iso(ext, cfg).to_json();
  if (phi_first != phi_second) {
    r.record(Violation{{}, identity(ext.total), std::nullopt, "phi-iso-replay-differs"});
  }
  const SamplerConfig rcfg = capped(cfg, 1000);
  const std::string ref_first = internal_group_refuter(Descriptor::integers(), rcfg).to_json();
  const std::string ref_second = internal_group_refuter(Descriptor::integers(), rcfg).to_json();
  if (ref_first != ref_second) {
    r.record(Violation{{}, identity(Descriptor::integers()), std::nullopt,
                       "refuter-replay-differs"});
  }
  r.finalize();
  return r;
}

SuiteRow law_row(const std::string& descriptor_text) {
  SuiteRow row;
  row.id = "laws." + descriptor_text;
  row.module = "core";
  row.parameters = "full law table on " + descriptor_text;
  row.expected = SuiteExpectation::pass;
  row.run = [descriptor_text](const SamplerConfig& cfg) {
    return law_suite(parse_descriptor(descriptor_text), cfg);
  };
  return row;
}

}  // namespace

std::string to_string(SuiteExpectation e) {
  return e == SuiteExpectation::pass ? "pass" : "fail-with-witness";
}

SuiteManifest SuiteManifest::standard(SamplerConfig cfg) {
  SuiteManifest m;
  m.sampler = cfg;
  auto add = [&m](SuiteRow row) { m.rows.push_back(std::move(row)); };

  // ---- core: the law table on the six stock instances -----------------
  for (const char* name :
       {"Z", "Z^2", "Z^3", "lex(Z,Z)", "lex(Z^2,Z)", "quot(Z^3,{0})"}) {
    add(law_row(name));
  }

  // ---- core: morphism shortcut spot checks --------------------------------
  {
    SuiteRow row;
    row.id = "morphism.random-valid";
    row.module = "core";
    row.parameters =
        "20 random single-source-per-row nonnegative integer maps; "
        "product/pos-part check plus independent join-preservation check each";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      return run_random_morphism_checks(cfg, /*violators=*/false);
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "morphism.random-violators";
    row.module = "core";
    row.parameters =
        "20 random maps with one negated row entry; both checks must find "
        "witnesses";
    row.expected = SuiteExpectation::fail_with_witness;
    row.run = [](const SamplerConfig& cfg) {
      return run_random_morphism_checks(cfg, /*violators=*/true);
    };
    add(std::move(row));
  }

  // ---- subobjects: convexity -------------------------------------------
  {
    SuiteRow row;
    row.id = "convexity.coordinate-ideals";
    row.module = "subobjects";
    row.parameters = "all 8 coordinate ideals of Z^3";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      const auto desc = Descriptor::zpow(3);
      std::vector<LawReport> reports;
      for (const auto& support : ideal_lattice(3)) {
        reports.push_back(
            convexity_test(Subalgebra::coordinate_ideal(desc, support, cfg.box), cfg));
      }
      return reports;
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "convexity.diagonal-witness";
    row.module = "subobjects";
    row.parameters =
        "diagonal subgroup of Z^2 with exact equal-coordinates invariant";
    row.expected = SuiteExpectation::fail_with_witness;
    row.run = [](const SamplerConfig& cfg) {
      const auto desc = Descriptor::zpow(2);
      auto diagonal =
          Subalgebra::generated(desc, {zn(desc, {1, 1})}, 6, cfg.box)
              .with_invariant(
                  [](const Elem& x) { return x.coords[0] == x.coords[1]; });
      return std::vector<LawReport>{convexity_test(diagonal, cfg)};
    };
    add(std::move(row));
  }

  // ---- subobjects: polars ----------------------------------------------
  {
    SuiteRow row;
    row.id = "polar.disjoint-pairs";
    row.module = "subobjects";
    row.parameters = "all 27 disjoint-support coordinate-ideal pairs of Z^3";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      const auto desc = Descriptor::zpow(3);
      std::vector<LawReport> reports;
      const auto lattice = ideal_lattice(3);
      for (const auto& sa : lattice) {
        for (const auto& sb : lattice) {
          std::set<std::size_t> overlap;
          std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                std::inserter(overlap, overlap.begin()));
          if (!overlap.empty()) continue;
          reports.push_back(polar_test(Subalgebra::coordinate_ideal(desc, sa),
                                       Subalgebra::coordinate_ideal(desc, sb), cfg));
        }
      }
      return reports;
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "polar.overlapping-pairs";
    row.module = "subobjects";
    row.parameters = "all 37 overlapping-support coordinate-ideal pairs of Z^3";
    row.expected = SuiteExpectation::fail_with_witness;
    row.run = [](const SamplerConfig& cfg) {
      const auto desc = Descriptor::zpow(3);
      std::vector<LawReport> reports;
      const auto lattice = ideal_lattice(3);
      for (const auto& sa : lattice) {
        for (const auto& sb : lattice) {
          std::set<std::size_t> overlap;
          std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                std::inserter(overlap, overlap.begin()));
          if (overlap.empty()) continue;
          reports.push_back(polar_test(Subalgebra::coordinate_ideal(desc, sa),
                                       Subalgebra::coordinate_ideal(desc, sb), cfg));
        }
      }
      return reports;
    };
    add(std::move(row));
  }

  // ---- subobjects: commutators and the ideal lattice --------------------
  {
    SuiteRow row;
    row.id = "commutator.oracle-agreement";
    row.module = "subobjects";
    row.parameters =
        "closed form vs. exhaustive bruteforce on all 340 support pairs of "
        "Z^1..Z^4";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      return std::vector<LawReport>{commutator_agreement_report(cfg)};
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "ideals.distributive-lattice";
    row.module = "subobjects";
    row.parameters = "exhaustive distributivity of the coordinate-ideal lattice, n=1..4";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig&) {
      std::vector<LawReport> reports;
      for (std::size_t n = 1; n <= 4; ++n) reports.push_back(distributivity_check(n));
      return reports;
    };
    add(std::move(row));
  }

  // ---- core: internal-group refuters ------------------------------------
  for (const char* name : {"Z", "Z^2"}) {
    SuiteRow row;
    row.id = std::string("refuter.internal-group-") + name;
    row.module = "core";
    row.parameters = std::string("Maltsev-operation morphism refutation on ") + name +
                     " within 1000 samples";
    row.expected = SuiteExpectation::fail_with_witness;
    std::string text = name;
    row.run = [text](const SamplerConfig& cfg) {
      return std::vector<LawReport>{
          internal_group_refuter(parse_descriptor(text), capped(cfg, 1000))};
    };
    add(std::move(row));
  }

  // ---- extensions: semidirect reconstruction -----------------------------
  {
    SuiteRow row;
    row.id = "extension.phi-iso-lex";
    row.module = "extensions";
    row.parameters = "pair-encoding isomorphism on lex-ext(Z,Z)";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      auto ext = make_lex_extension(Descriptor::integers(), Descriptor::integers(),
                                    capped(cfg, 2000));
      return std::vector<LawReport>{verify_phi_iso(ext, cfg)};
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "extension.phi-iso-product";
    row.module = "extensions";
    row.parameters = "pair-encoding isomorphism on prod-ext(Z,Z)";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      auto ext = make_product_extension(Descriptor::integers(), Descriptor::integers(),
                                        capped(cfg, 2000));
      return std::vector<LawReport>{verify_phi_iso(ext, cfg)};
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "extension.polar-section";
    row.module = "extensions";
    row.parameters =
        "section-orthogonal-to-kernel subset is convex and conjugation-closed "
        "in lex-ext(Z,Z) and prod-ext(Z,Z)";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      auto lex = make_lex_extension(Descriptor::integers(), Descriptor::integers(),
                                    capped(cfg, 2000));
      auto prod = make_product_extension(Descriptor::integers(), Descriptor::integers(),
                                         capped(cfg, 2000));
      return std::vector<LawReport>{polar_section_ideal_test(lex, cfg),
                                    polar_section_ideal_test(prod, cfg)};
    };
    add(std::move(row));
  }

  // ---- extensions: self-maps ---------------------------------------------
  {
    SuiteRow row;
    row.id = "extension.self-maps-commute";
    row.module = "extensions";
    row.parameters =
        "identity pair and top-doubling pair both commute with lex-ext(Z,Z)";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      auto ext = make_lex_extension(Descriptor::integers(), Descriptor::integers(),
                                    capped(cfg, 2000));
      auto [first, second] = non_faithfulness_witness();
      return std::vector<LawReport>{check_extension_endomorphism(ext, first, cfg),
                                    check_extension_endomorphism(ext, second, cfg)};
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "extension.self-maps-differ";
    row.module = "extensions";
    row.parameters = "the two commuting self-maps differ at (0,1) and at base 3";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      return std::vector<LawReport>{self_maps_differ_report(cfg)};
    };
    add(std::move(row));
  }

  // ---- extensions: points over a base ------------------------------------
  {
    SuiteRow row;
    row.id = "points.centralizer-action";
    row.module = "extensions";
    row.parameters =
        "centralizers of all 8 coordinate-ideal kernel traces of Z^3 over "
        "prod-ext(Z^3,Z) stay closed under the base action";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      const auto kernel = Descriptor::zpow(3);
      auto ext = make_product_extension(kernel, Descriptor::integers(),
                                        capped(cfg, 2000));
      std::vector<LawReport> reports;
      for (const auto& support : ideal_lattice(3)) {
        auto point = make_point_subobject(
            ext, Subalgebra::coordinate_ideal(kernel, support));
        reports.push_back(closed_under_action_test(point_centralizer(point), cfg));
      }
      return reports;
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "points.cooperator-agreement";
    row.module = "extensions";
    row.parameters =
        "all 64 kernel-trace pairs of Z^3 over prod-ext(Z^3,Z): cooperator "
        "check vs. polar check vs. exact support disjointness, 1500 samples "
        "per pair";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      return std::vector<LawReport>{cooperator_agreement_report(cfg)};
    };
    add(std::move(row));
  }

  // ---- extensions: coherence join closures --------------------------------
  {
    SuiteRow row;
    row.id = "coherence.product-lines";
    row.module = "extensions";
    row.parameters =
        "prod-ext(Z^2,Z); K=gen{(1,0)}, H=gen{(1,1)}, closure box 8";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      const auto kernel = Descriptor::zpow(2);
      auto ext = make_product_extension(kernel, Descriptor::integers(),
                                        capped(cfg, 2000));
      auto K = Subalgebra::generated(kernel, {zn(kernel, {1, 0})}, 4, 8);
      auto H = Subalgebra::generated(kernel, {zn(kernel, {1, 1})}, 4, 8);
      return std::vector<LawReport>{
          coherence_join_closure_test(ext, K, H, boxed(cfg, 8))};
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "coherence.lex-multiples";
    row.module = "extensions";
    row.parameters = "lex-ext(Z,Z); K=gen{2}, H=gen{3}, closure box 8";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      const auto kernel = Descriptor::integers();
      auto ext = make_lex_extension(kernel, Descriptor::integers(), capped(cfg, 2000));
      auto K = Subalgebra::generated(kernel, {zn(kernel, {2})}, 4, 8);
      auto H = Subalgebra::generated(kernel, {zn(kernel, {3})}, 4, 8);
      return std::vector<LawReport>{
          coherence_join_closure_test(ext, K, H, boxed(cfg, 8))};
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "coherence.self-join";
    row.module = "extensions";
    row.parameters = "prod-ext(Z^2,Z); K = H = gen{(1,0)}, closure box 8";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      const auto kernel = Descriptor::zpow(2);
      auto ext = make_product_extension(kernel, Descriptor::integers(),
                                        capped(cfg, 2000));
      auto K = Subalgebra::generated(kernel, {zn(kernel, {1, 0})}, 4, 8);
      return std::vector<LawReport>{
          coherence_join_closure_test(ext, K, K, boxed(cfg, 8))};
    };
    add(std::move(row));
  }

  // ---- termlang: normal forms and identity refutation ---------------------
  {
    SuiteRow row;
    row.id = "nf.soundness";
    row.module = "termlang";
    row.parameters = std::to_string(nf_term_count(cfg)) +
                     " random terms (depth <= 6, redrawn on normal-form budget "
                     "overflow) x " +
                     std::to_string(nf_env_count(cfg)) + " environments in Z^2";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      return std::vector<LawReport>{nf_soundness_report(cfg)};
    };
    add(std::move(row));
  }
  {
    SuiteRow row;
    row.id = "nf.identities-survive";
    row.module = "termlang";
    row.parameters =
        "five element identities plus the commutative product identity, "
        "refutation search in Z^2";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) { return identity_survival_reports(cfg); };
    add(std::move(row));
  }

  // ---- determinism ---------------------------------------------------------
  {
    SuiteRow row;
    row.id = "determinism.report-replay";
    row.module = "suite";
    row.parameters =
        "re-running the pair-encoding check and the internal-group refuter "
        "reproduces byte-identical reports";
    row.expected = SuiteExpectation::pass;
    row.run = [](const SamplerConfig& cfg) {
      return std::vector<LawReport>{report_replay_report(cfg)};
    };
    add(std::move(row));
  }

  return m;
}

SuiteRunResult run_suite(const SuiteManifest& manifest) {
  if (manifest.rows.empty()) {
    throw StructuralError("suite manifest has no rows");
  }
  if (manifest.sampler.samples == 0) {
    throw StructuralError("suite sample count must be positive");
  }
  std::set<std::string> ids;
  for (const SuiteRow& row : manifest.rows) {
    if (!ids.insert(row.id).second) {
      throw StructuralError("duplicate suite row id: " + row.id);
    }
    if (!row.run) {
      throw StructuralError("suite row has no runner: " + row.id);
    }
  }

  SuiteRunResult out;
  for (const SuiteRow& row : manifest.rows) {
    const auto started = std::chrono::steady_clock::now();
    SuiteRowResult r;
    r.id = row.id;
    r.module = row.module;
    r.parameters = row.parameters;
    r.expected = row.expected;
    r.reports = row.run(manifest.sampler);
    r.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();

    const bool all_pass =
        !r.reports.empty() &&
        std::all_of(r.reports.begin(), r.reports.end(),
                    [](const LawReport& rep) { return rep.passed(); });
    const bool all_fail_with_witness =
        !r.reports.empty() &&
        std::all_of(r.reports.begin(), r.reports.end(), [](const LawReport& rep) {
          return rep.status == Status::fail && !rep.violations.empty();
        });
    r.observed = all_pass               ? "pass"
                 : all_fail_with_witness ? "fail-with-witness"
                                         : "inconclusive";
    r.matched = (r.observed == to_string(row.expected));
    out.all_matched = out.all_matched && r.matched;
    out.rows.push_back(std::move(r));
  }
  return out;
}

void write_suite_ndjson(const SuiteRunResult& result, std::ostream& out) {
  for (const SuiteRowResult& row : result.rows) {
    json obj;
    obj["suiteId"] = row.id;
    obj["module"] = row.module;
    obj["parameters"] = row.parameters;
    obj["expected"] = to_string(row.expected);
    obj["observed"] = row.observed;
    obj["matched"] = row.matched;
    json reports = json::array();
    for (const LawReport& rep : row.reports) {
      reports.push_back(json::parse(rep.to_json()));
    }
    obj["reports"] = std::move(reports);
    out << obj.dump() << "\n";
  }
}

void write_suite_summary(const SuiteRunResult& result, std::ostream& out) {
  std::size_t id_width = 4;
  for (const SuiteRowResult& row : result.rows) {
    id_width = std::max(id_width, row.id.size());
  }

  out << std::left << std::setw(static_cast<int>(id_width) + 2) << "row"
      << std::setw(19) << "expected" << std::setw(19) << "observed"
      << std::right << std::setw(8) << "reports" << std::setw(11) << "violations"
      << std::setw(10) << "ms" << "  verdict\n";

  std::size_t matched = 0;
  double total_ms = 0.0;
  for (const SuiteRowResult& row : result.rows) {
    std::size_t violation_total = 0;
    for (const LawReport& rep : row.reports) violation_total += rep.violation_total;
    total_ms += row.elapsed_ms;
    if (row.matched) ++matched;

    std::ostringstream ms;
    ms << std::fixed << std::setprecision(1) << row.elapsed_ms;
    out << std::left << std::setw(static_cast<int>(id_width) + 2) << row.id
        << std::setw(19) << to_string(row.expected) << std::setw(19) << row.observed
        << std::right << std::setw(8) << row.reports.size() << std::setw(11)
        << violation_total << std::setw(10) << ms.str() << "  "
        << (row.matched ? "ok" : "MISMATCH") << "\n";
  }

  std::ostringstream total;
  total << std::fixed << std::setprecision(1) << total_ms / 1000.0;
  out << "suite verdict: " << matched << "/" << result.rows.size()
      << " rows matched (" << total.str() << " s)\n";
}

}  // namespace lgrp
