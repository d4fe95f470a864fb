// lgrp: command-line laboratory for lattice-ordered groups over exact
// integer arithmetic.
//
// Exit codes, shared by every subcommand:
//   0  success (for checking commands: every report passed / every suite
//      row matched its expectation)
//   1  a checking command found a violation, or a suite row mismatched
//   2  usage or structural error (bad flags, malformed descriptors or terms,
//      ill-shaped constructions)
//   3  a resource budget was exceeded (closure cardinality, term node count)

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lgrp/core.hpp"
#include "lgrp/extensions.hpp"
#include "lgrp/subobjects.hpp"
#include "lgrp/suite.hpp"
#include "lgrp/termlang.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace lgrp;

struct CommonOpts {
  std::uint64_t seed = 0;
  std::int64_t box = 16;
  std::size_t samples = 10000;
  bool as_json = false;

  SamplerConfig cfg() const {
    if (samples == 0) {
      throw StructuralError("sample budget must be positive");
    }
    if (box <= 0) {
      throw StructuralError("coordinate box must be positive");
    }
    return SamplerConfig{seed, box, samples};
  }
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--samples", opts.samples, "sample budget per check (default 10000)");
  sub->add_option("--seed", opts.seed, "sampler seed (default 0)");
  sub->add_option("--box", opts.box, "coordinate box [-box, box] (default 16)");
  sub->add_flag("--json", opts.as_json, "emit JSON instead of the human summary");
}

SamplerConfig construction_cfg(const SamplerConfig& cfg) {
  SamplerConfig c = cfg;
  c.samples = std::min<std::size_t>(cfg.samples, 2000);
  return c;
}

// "0,1" -> {0, 1}; "" -> {}.
std::set<std::size_t> parse_support(const std::string& text) {
  std::set<std::size_t> support;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
    if (token.empty()) continue;
    std::size_t pos = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(token, &pos);
    } catch (const std::exception&) {
      throw StructuralError("bad support index: " + token);
    }
    if (pos != token.size()) {
      throw StructuralError("bad support index: " + token);
    }
    support.insert(static_cast<std::size_t>(value));
  }
  return support;
}

// "(1,0);(0,0)" (or "2;3" over Z) -> elements of Z^arity, all arities equal.
std::vector<Elem> parse_generators(const std::string& text, DescriptorPtr& ambient) {
  std::vector<Elem> gens;
  std::string chunk;
  std::istringstream in(text);
  while (std::getline(in, chunk, ';')) {
    chunk.erase(std::remove_if(chunk.begin(), chunk.end(), ::isspace), chunk.end());
    if (chunk.empty()) continue;
    if (chunk.front() == '(' && chunk.back() == ')') {
      chunk = chunk.substr(1, chunk.size() - 2);
    }
    std::vector<Int> coords;
    std::string num;
    std::istringstream cs(chunk);
    while (std::getline(cs, num, ',')) {
      if (num.empty() || num.find_first_not_of("-0123456789") != std::string::npos) {
        throw StructuralError("bad generator coordinate: '" + num + "' in " + text);
      }
      coords.emplace_back(num);
    }
    if (coords.empty()) {
      throw StructuralError("empty generator tuple in: " + text);
    }
    if (!ambient) {
      ambient = coords.size() == 1 ? Descriptor::integers()
                                   : Descriptor::zpow(coords.size());
    }
    if (coords.size() != ambient->dimension()) {
      throw StructuralError("generator arity mismatch in: " + text);
    }
    gens.push_back(make_elem(ambient, std::move(coords)));
  }
  if (gens.empty()) {
    throw StructuralError("generator list is empty: " + text);
  }
  return gens;
}

json support_array(const std::set<std::size_t>& support) {
  json arr = json::array();
  for (std::size_t i : support) arr.push_back(i);
  return arr;
}

json report_json(const LawReport& r) { return json::parse(r.to_json()); }

void print_reports_human(const std::vector<LawReport>& reports, std::ostream& out) {
  std::size_t law_width = 3, instance_width = 8;
  for (const LawReport& r : reports) {
    law_width = std::max(law_width, r.law.size());
    instance_width = std::max(instance_width, r.instance.size());
  }
  for (const LawReport& r : reports) {
    out << to_string(r.status);
    for (std::size_t i = to_string(r.status).size(); i < 14; ++i) out << ' ';
    out << r.law;
    for (std::size_t i = r.law.size(); i < law_width + 2; ++i) out << ' ';
    out << r.instance;
    for (std::size_t i = r.instance.size(); i < instance_width + 2; ++i) out << ' ';
    out << r.samples << " samples, " << r.violation_total << " violations, "
        << r.inconclusive << " inconclusive\n";
    if (!r.violations.empty()) {
      const Violation& v = r.violations.front();
      out << "    first witness: lhs " << to_string(v.lhs);
      if (v.rhs) out << ", rhs " << to_string(*v.rhs);
      if (!v.note.empty()) out << "  [" << v.note << "]";
      out << "\n      inputs:";
      for (const Elem& e : v.inputs) out << ' ' << to_string(e);
      out << "\n";
    }
  }
}

bool all_passed(const std::vector<LawReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const LawReport& r) { return r.passed(); });
}

SplitExtension build_named_extension(const std::string& shape, const DescriptorPtr& kernel,
                                     const DescriptorPtr& base, const SamplerConfig& cfg) {
  if (shape == "lex") return make_lex_extension(kernel, base, construction_cfg(cfg));
  if (shape == "prod") return make_product_extension(kernel, base, construction_cfg(cfg));
  throw StructuralError("unknown extension shape '" + shape + "' (expected lex or prod)");
}

SplitExtension extension_from_descriptor(const std::string& text, const SamplerConfig& cfg) {
  const DescriptorPtr d = parse_descriptor(text);
  if (d->kind() == Descriptor::Kind::Lex) {
    return make_lex_extension(d->lex_kernel(), d->lex_top(), construction_cfg(cfg));
  }
  if (d->kind() == Descriptor::Kind::Product && d->factors().size() == 2) {
    return make_product_extension(d->factors()[0], d->factors()[1], construction_cfg(cfg));
  }
  throw StructuralError("instance " + text +
                        " is not a two-factor product or lex shape");
}

// The identity pair and the base-doubling pair: two self-maps that both
// commute with the extension but differ away from the kernel.  The total
// algebra stores kernel coordinates first, so the doubling matrix is the
// identity on the kernel block and 2x the identity on the base block.
std::pair<ExtensionEndomorphism, ExtensionEndomorphism> doubling_pair(
    const SplitExtension& e) {
  const std::size_t kd = e.kernel->dimension();
  const std::size_t td = e.total->dimension();
  const std::size_t bd = e.base->dimension();
  std::vector<std::vector<Int>> g(td, std::vector<Int>(td, Int(0)));
  for (std::size_t i = 0; i < td; ++i) g[i][i] = (i < kd) ? 1 : 2;
  std::vector<std::vector<Int>> f(bd, std::vector<Int>(bd, Int(0)));
  for (std::size_t i = 0; i < bd; ++i) f[i][i] = 2;
  ExtensionEndomorphism first{identity_map(e.total), identity_map(e.base), "identity"};
  ExtensionEndomorphism second{
      coordinate_map(e.total, e.total, std::move(g), "base-double-total"),
      coordinate_map(e.base, e.base, std::move(f), "base-double"), "base-double"};
  return {std::move(first), std::move(second)};
}

// A law-shaped record of the fact that the two commuting self-maps differ.
LawReport self_maps_differ_probe(const SplitExtension& e,
                                 const ExtensionEndomorphism& first,
                                 const ExtensionEndomorphism& second) {
  LawReport r;
  r.instance = e.label;
  r.law = "ext.self-maps-differ";
  if (e.base->dimension() == 0) {
    r.finalize();
    return r;
  }
  std::vector<Int> coords(e.base->dimension(), Int(0));
  coords[0] = 1;
  const Elem b = make_elem(e.base, std::move(coords));
  const Elem probe = e.s.apply(b);
  r.samples = 1;
  const Elem g1 = first.on_total.apply(probe);
  const Elem g2 = second.on_total.apply(probe);
  if (g1 == g2) {
    r.record(Violation{{probe}, g1, g2, "self-maps-agree-on-section-image"});
  }
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// subcommand runners

int run_laws(const std::string& instance, const CommonOpts& opts) {
  const SamplerConfig cfg = opts.cfg();
  const auto reports = law_suite(parse_descriptor(instance), cfg);
  if (opts.as_json) {
    std::cout << reports_to_json(reports) << "\n";
  } else {
    print_reports_human(reports, std::cout);
    std::size_t passed = 0;
    for (const auto& r : reports) passed += r.passed();
    std::cout << passed << "/" << reports.size() << " laws passed on " << instance
              << "\n";
  }
  return all_passed(reports) ? 0 : 1;
}

int run_nf(const std::string& term_text, const CommonOpts& opts) {
  const TermPtr term = parse_term(term_text);
  const NormalForm nf = normal_form(term);
  if (opts.as_json) {
    json obj;
    obj["term"] = render_term(term);
    obj["normalForm"] = nf.render();
    obj["joinands"] = nf.joinands.size();
    obj["nodeCount"] = nf.node_count();
    std::cout << obj.dump() << "\n";
  } else {
    std::cout << nf.render() << "\n";
  }
  return 0;
}

int run_refute(const std::string& lhs_text, const std::string& rhs_text,
               const std::string& instance, const CommonOpts& opts) {
  const SamplerConfig cfg = opts.cfg();
  const DescriptorPtr desc = parse_descriptor(instance);
  const TermPtr lhs = parse_term(lhs_text);
  const TermPtr rhs = parse_term(rhs_text);
  const auto refutation = refute_identity(lhs, rhs, desc, cfg);
  if (opts.as_json) {
    json obj;
    obj["lhs"] = render_term(lhs);
    obj["rhs"] = render_term(rhs);
    obj["instance"] = desc->name();
    obj["samples"] = cfg.samples;
    obj["refuted"] = refutation.has_value();
    if (refutation) {
      json witness;
      for (const auto& [var, value] : refutation->witness) {
        witness[var] = to_string(value);
      }
      obj["witness"] = std::move(witness);
      obj["lhsValue"] = to_string(refutation->lhs);
      obj["rhsValue"] = to_string(refutation->rhs);
    }
    std::cout << obj.dump() << "\n";
  } else if (refutation) {
    std::cout << "refuted in " << desc->name() << ":\n";
    for (const auto& [var, value] : refutation->witness) {
      std::cout << "  " << var << " = " << to_string(value) << "\n";
    }
    std::cout << "  lhs = " << to_string(refutation->lhs)
              << "\n  rhs = " << to_string(refutation->rhs) << "\n";
  } else {
    std::cout << "no refutation found in " << desc->name() << " (" << cfg.samples
              << " samples)\n";
  }
  return 0;
}

int run_polar(const std::string& instance, const std::string& support_text,
              const CommonOpts& opts) {
  const SamplerConfig cfg = opts.cfg();
  const DescriptorPtr desc = parse_descriptor(instance);
  const auto support = parse_support(support_text);
  const auto ideal = Subalgebra::coordinate_ideal(desc, support, cfg.box);
  const Subalgebra complement = polar(ideal);
  const LawReport cooperation = polar_test(ideal, complement, cfg);
  if (opts.as_json) {
    json obj;
    obj["instance"] = desc->name();
    obj["support"] = support_array(support);
    obj["polarSupport"] = support_array(complement.support());
    obj["cooperation"] = report_json(cooperation);
    std::cout << obj.dump() << "\n";
  } else {
    std::cout << "polar of " << ideal.description() << " in " << desc->name() << ": "
              << complement.description() << "\n";
    print_reports_human({cooperation}, std::cout);
  }
  return 0;
}

int run_commutator(const std::string& instance, const std::string& h_text,
                   const std::string& k_text, bool brute_force,
                   const CommonOpts& opts) {
  const SamplerConfig cfg = opts.cfg();
  const DescriptorPtr desc = parse_descriptor(instance);
  const auto h = Subalgebra::coordinate_ideal(desc, parse_support(h_text), cfg.box);
  const auto k = Subalgebra::coordinate_ideal(desc, parse_support(k_text), cfg.box);
  const Subalgebra fast = huq_commutator_ideals(h, k);
  bool agree = true;
  std::set<std::size_t> brute_support;
  if (brute_force) {
    const Subalgebra slow = huq_bruteforce(h, k);
    brute_support = slow.support();
    agree = (fast.support() == brute_support);
  }
  if (opts.as_json) {
    json obj;
    obj["instance"] = desc->name();
    obj["h"] = support_array(h.support());
    obj["k"] = support_array(k.support());
    obj["commutatorSupport"] = support_array(fast.support());
    if (brute_force) {
      obj["bruteForceSupport"] = support_array(brute_support);
      obj["agree"] = agree;
    }
    std::cout << obj.dump() << "\n";
  } else {
    std::cout << "commutator of " << h.description() << " and " << k.description()
              << " in " << desc->name() << ": " << fast.description() << "\n";
    if (brute_force) {
      std::cout << "brute-force oracle: "
                << Subalgebra::coordinate_ideal(desc, brute_support).description()
                << (agree ? " (agrees)" : " (DISAGREES)") << "\n";
    }
  }
  return agree ? 0 : 1;
}

int run_ideals(const std::string& instance, bool check_distributive,
               const CommonOpts& opts) {
  const DescriptorPtr desc = parse_descriptor(instance);
  const auto arity = zpow_arity(*desc);
  if (!arity) {
    throw StructuralError("ideal lattice enumeration needs an integer power, got " +
                          desc->name());
  }
  const auto lattice = ideal_lattice(*arity);
  std::vector<LawReport> reports;
  if (check_distributive) {
    reports.push_back(distributivity_check(*arity));
  }
  if (opts.as_json) {
    json obj;
    obj["instance"] = desc->name();
    obj["count"] = lattice.size();
    json ideals = json::array();
    for (const auto& support : lattice) ideals.push_back(support_array(support));
    obj["ideals"] = std::move(ideals);
    if (check_distributive) obj["distributivity"] = report_json(reports.front());
    std::cout << obj.dump() << "\n";
  } else {
    std::cout << lattice.size() << " coordinate ideals of " << desc->name() << ":\n";
    for (const auto& support : lattice) {
      std::cout << "  "
                << Subalgebra::coordinate_ideal(desc, support).description() << "\n";
    }
    if (check_distributive) print_reports_human(reports, std::cout);
  }
  return all_passed(reports) ? 0 : 1;
}

int run_extension(const std::string& shape, const std::string& kernel_text,
                  const std::string& base_text, bool verify, const CommonOpts& opts) {
  const SamplerConfig cfg = opts.cfg();
  const DescriptorPtr kernel = parse_descriptor(kernel_text);
  const DescriptorPtr base = parse_descriptor(base_text);
  const SplitExtension ext = build_named_extension(shape, kernel, base, cfg);

  std::vector<LawReport> reports;
  if (verify) {
    reports = validate_split_extension(ext, cfg);
    reports.push_back(verify_phi_iso(ext, cfg));
    const auto [first, second] = doubling_pair(ext);
    reports.push_back(check_extension_endomorphism(ext, first, cfg));
    reports.push_back(check_extension_endomorphism(ext, second, cfg));
    reports.push_back(self_maps_differ_probe(ext, first, second));
    reports.push_back(polar_section_ideal_test(ext, cfg));
  }

  if (opts.as_json) {
    json obj;
    obj["extension"] = ext.label;
    obj["kernel"] = ext.kernel->name();
    obj["total"] = ext.total->name();
    obj["base"] = ext.base->name();
    if (verify) {
      json arr = json::array();
      for (const auto& r : reports) arr.push_back(report_json(r));
      obj["reports"] = std::move(arr);
    }
    std::cout << obj.dump() << "\n";
  } else {
    std::cout << ext.label << ": kernel " << ext.kernel->name() << ", total "
              << ext.total->name() << ", base " << ext.base->name() << "\n";
    if (verify) {
      print_reports_human(reports, std::cout);
      std::cout << (all_passed(reports) ? "extension verified\n"
                                        : "extension checks FAILED\n");
    }
  }
  return all_passed(reports) ? 0 : 1;
}

int run_points(const std::string& instance, const std::string& xbar_text,
               bool centralizer, const CommonOpts& opts) {
  const SamplerConfig cfg = opts.cfg();
  const SplitExtension ext = extension_from_descriptor(instance, cfg);
  const auto xbar_support = parse_support(xbar_text);
  const auto xbar = Subalgebra::coordinate_ideal(ext.kernel, xbar_support, cfg.box);
  const PointSubobject point = make_point_subobject(ext, xbar);

  const PointSubobject subject = centralizer ? point_centralizer(point) : point;
  const LawReport action = closed_under_action_test(subject, cfg);

  if (opts.as_json) {
    json obj;
    obj["extension"] = ext.label;
    obj["xbar"] = support_array(xbar_support);
    if (centralizer) {
      obj["centralizerSupport"] = support_array(subject.xbar.support());
    }
    obj["action"] = report_json(action);
    std::cout << obj.dump() << "\n";
  } else {
    std::cout << ext.label << ", kernel trace " << xbar.description() << "\n";
    if (centralizer) {
      std::cout << "centralizer: " << subject.xbar.description() << "\n";
    }
    print_reports_human({action}, std::cout);
  }
  return 0;
}

int run_coherence(const std::string& k_text, const std::string& h_text,
                  const std::string& shape, const std::string& base_text,
                  int depth, std::int64_t closure_box, const CommonOpts& opts) {
  const SamplerConfig cfg = opts.cfg();
  DescriptorPtr kernel;  // inferred from the generator tuples
  const auto k_gens = parse_generators(k_text, kernel);
  const auto h_gens = parse_generators(h_text, kernel);
  const DescriptorPtr base = parse_descriptor(base_text);
  const SplitExtension ext = build_named_extension(shape, kernel, base, cfg);
  const auto K = Subalgebra::generated(kernel, k_gens, depth, closure_box);
  const auto H = Subalgebra::generated(kernel, h_gens, depth, closure_box);
  const LawReport report = coherence_join_closure_test(ext, K, H, cfg);

  if (opts.as_json) {
    json obj;
    obj["extension"] = ext.label;
    obj["k"] = K.description();
    obj["h"] = H.description();
    obj["report"] = report_json(report);
    std::cout << obj.dump() << "\n";
  } else {
    std::cout << ext.label << ": join of " << K.description() << " and "
              << H.description() << "\n";
    print_reports_human({report}, std::cout);
  }
  return report.passed() ? 0 : 1;
}

int run_suite_cmd(const CommonOpts& opts) {
  const SamplerConfig cfg = opts.cfg();
  const SuiteManifest manifest = SuiteManifest::standard(cfg);
  const SuiteRunResult result = run_suite(manifest);

  if (opts.as_json) {
    write_suite_ndjson(result, std::cout);
    write_suite_summary(result, std::cerr);
  } else {
    write_suite_summary(result, std::cout);
  }
  if (!result.all_matched) {
    std::cerr << "mismatched rows:";
    for (const auto& row : result.rows) {
      if (!row.matched) std::cerr << ' ' << row.id;
    }
    std::cerr << "\n";
  }
  return result.all_matched ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lgrp: an exact-arithmetic laboratory for lattice-ordered groups.\n"
      "Instances: Z | Z^n | prod(D,...) | lex(D,D) | quot(Z^n,{i,...}).\n"
      "Terms: products (*), inverses (^-1), join (\\/), meet (/\\), abs/pos/neg,\n"
      "unit e.  Exit codes: 0 success, 1 violation or suite mismatch, 2 usage or\n"
      "structural error, 3 resource budget exceeded."};
  app.require_subcommand(1);

  int exit_code = 0;

  // laws
  CommonOpts laws_opts;
  std::string laws_instance = "Z";
  auto* laws_cmd = app.add_subcommand(
      "laws", "Run the full law table on one instance.  Example: lgrp laws "
              "--instance 'lex(Z^2,Z)' --samples 10000");
  laws_cmd->add_option("--instance", laws_instance, "instance descriptor (default Z)");
  add_common(laws_cmd, laws_opts);
  laws_cmd->callback([&] { exit_code = run_laws(laws_instance, laws_opts); });

  // nf
  CommonOpts nf_opts;
  std::string nf_term;
  auto* nf_cmd = app.add_subcommand(
      "nf", "Print the join-of-meets normal form of a term.  Example: lgrp nf "
            "'x * (x /\\ y)^-1 * y'");
  nf_cmd->add_option("term", nf_term, "term to normalize")->required();
  add_common(nf_cmd, nf_opts);
  nf_cmd->callback([&] { exit_code = run_nf(nf_term, nf_opts); });

  // refute
  CommonOpts refute_opts;
  std::string refute_lhs, refute_rhs, refute_instance = "Z^2";
  auto* refute_cmd = app.add_subcommand(
      "refute", "Search for an environment separating two terms.  Example: lgrp "
                "refute --lhs 'x * y' --rhs 'y * x^-1' --instance Z^2");
  refute_cmd->add_option("--lhs", refute_lhs, "left-hand term")->required();
  refute_cmd->add_option("--rhs", refute_rhs, "right-hand term")->required();
  refute_cmd->add_option("--instance", refute_instance,
                         "instance descriptor (default Z^2)");
  add_common(refute_cmd, refute_opts);
  refute_cmd->callback(
      [&] { exit_code = run_refute(refute_lhs, refute_rhs, refute_instance, refute_opts); });

  // polar
  CommonOpts polar_opts;
  std::string polar_instance = "Z^3", polar_support;
  auto* polar_cmd = app.add_subcommand(
      "polar", "Polar (cooperating complement) of a coordinate ideal.  Example: "
               "lgrp polar --instance Z^3 --support 0,1");
  polar_cmd->add_option("--instance", polar_instance,
                        "integer-power instance (default Z^3)");
  polar_cmd->add_option("--support", polar_support,
                        "comma-separated zero-based indices (empty for the "
                        "trivial ideal)");
  add_common(polar_cmd, polar_opts);
  polar_cmd->callback(
      [&] { exit_code = run_polar(polar_instance, polar_support, polar_opts); });

  // commutator
  CommonOpts comm_opts;
  std::string comm_instance = "Z^3", comm_h, comm_k;
  bool comm_brute = false;
  auto* comm_cmd = app.add_subcommand(
      "commutator", "Smallest ideal whose quotient makes two ideals cooperate.  "
                    "Example: lgrp commutator --instance Z^3 --h 0,1 --k 1,2 "
                    "--brute-force");
  comm_cmd->set_help_flag("--help", "print help and exit");  // frees -h for --h
  comm_cmd->add_option("--instance", comm_instance,
                       "integer-power instance (default Z^3)");
  comm_cmd->add_option("--h", comm_h, "support of the first ideal");
  comm_cmd->add_option("--k", comm_k, "support of the second ideal");
  comm_cmd->add_flag("--brute-force", comm_brute,
                     "also run the exhaustive oracle and compare");
  add_common(comm_cmd, comm_opts);
  comm_cmd->callback([&] {
    exit_code = run_commutator(comm_instance, comm_h, comm_k, comm_brute, comm_opts);
  });

  // ideals
  CommonOpts ideals_opts;
  std::string ideals_instance = "Z^4";
  bool ideals_distributive = false;
  auto* ideals_cmd = app.add_subcommand(
      "ideals", "Enumerate the coordinate-ideal lattice.  Example: lgrp ideals "
                "--instance Z^4 --check-distributive");
  ideals_cmd->add_option("--instance", ideals_instance,
                         "integer-power instance (default Z^4)");
  ideals_cmd->add_flag("--check-distributive", ideals_distributive,
                       "exhaustively check lattice distributivity");
  add_common(ideals_cmd, ideals_opts);
  ideals_cmd->callback(
      [&] { exit_code = run_ideals(ideals_instance, ideals_distributive, ideals_opts); });

  // extension
  CommonOpts ext_opts;
  std::string ext_shape, ext_kernel = "Z", ext_base = "Z";
  bool ext_verify = false;
  auto* ext_cmd = app.add_subcommand(
      "extension", "Build a stock split extension and optionally verify it.  "
                   "Example: lgrp extension lex --verify");
  ext_cmd->add_option("shape", ext_shape, "lex or prod")->required();
  ext_cmd->add_option("--kernel", ext_kernel, "kernel descriptor (default Z)");
  ext_cmd->add_option("--base", ext_base, "base descriptor (default Z)");
  ext_cmd->add_flag("--verify", ext_verify,
                    "run the pair-encoding isomorphism, the commuting self-map "
                    "pair and their difference probe, and the section-polar "
                    "subset checks");
  add_common(ext_cmd, ext_opts);
  ext_cmd->callback([&] {
    exit_code = run_extension(ext_shape, ext_kernel, ext_base, ext_verify, ext_opts);
  });

  // points
  CommonOpts points_opts;
  std::string points_instance = "prod(Z^2,Z)", points_xbar;
  bool points_centralizer = false;
  auto* points_cmd = app.add_subcommand(
      "points", "Kernel traces of points over a base and their centralizers.  "
                "Example: lgrp points --instance 'prod(Z^2,Z)' --xbar 0 "
                "--centralizer");
  points_cmd->add_option("--instance", points_instance,
                         "two-factor prod(K,B) or lex(K,B) shape");
  points_cmd->add_option("--xbar", points_xbar,
                         "support of the kernel trace (comma-separated indices)");
  points_cmd->add_flag("--centralizer", points_centralizer,
                       "check the centralizing trace instead of the trace itself");
  add_common(points_cmd, points_opts);
  points_cmd->callback([&] {
    exit_code = run_points(points_instance, points_xbar, points_centralizer, points_opts);
  });

  // coherence
  CommonOpts coh_opts;
  std::string coh_k, coh_h, coh_shape = "lex", coh_base = "Z";
  int coh_depth = 4;
  std::int64_t coh_closure_box = 8;
  auto* coh_cmd = app.add_subcommand(
      "coherence", "Join-closure coherence of two kernel subalgebras under the "
                   "base action.  Example: lgrp coherence --k '(1,0);(0,0)' --h "
                   "'(1,1)' --extension prod");
  coh_cmd->set_help_flag("--help", "print help and exit");  // frees -h for --h
  coh_cmd->add_option("--k", coh_k, "semicolon-separated generator tuples")->required();
  coh_cmd->add_option("--h", coh_h, "semicolon-separated generator tuples")->required();
  coh_cmd->add_option("--extension", coh_shape, "lex or prod (default lex)");
  coh_cmd->add_option("--base", coh_base, "base descriptor (default Z)");
  coh_cmd->add_option("--depth", coh_depth, "generated-closure depth (default 4)");
  coh_cmd->add_option("--closure-box", coh_closure_box,
                      "generated-closure coordinate box (default 8)");
  add_common(coh_cmd, coh_opts);
  coh_cmd->callback([&] {
    exit_code = run_coherence(coh_k, coh_h, coh_shape, coh_base, coh_depth,
                              coh_closure_box, coh_opts);
  });

  // suite
  CommonOpts suite_opts;
  auto* suite_cmd = app.add_subcommand(
      "suite", "Run the standard verification suite.  With --json the report "
               "stream is newline-delimited JSON on stdout (byte-identical "
               "across runs with one seed) and the summary goes to stderr.  "
               "Example: lgrp suite --seed 42 --json");
  add_common(suite_cmd, suite_opts);
  suite_cmd->callback([&] { exit_code = run_suite_cmd(suite_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << "term syntax error at " << e.line << ":" << e.column << ": found '"
              << e.found << "', expected";
    for (const auto& token : e.expected) std::cerr << " " << token;
    std::cerr << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
