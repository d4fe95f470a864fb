#include "lgrp/subobjects.hpp"

#include <algorithm>
#include <map>

namespace lgrp {

std::string to_string(Membership m) {
  switch (m) {
    case Membership::yes: return "yes";
    case Membership::no: return "no";
    case Membership::inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// construction

struct Subalgebra::Cache {
  std::map<int, std::vector<Elem>> by_depth;
  // Smallest depth at which a round added nothing; deeper closures are equal.
  std::optional<int> fixpoint_at;
};

Subalgebra Subalgebra::generated(DescriptorPtr ambient, std::vector<Elem> generators,
                                 int closure_depth, std::int64_t closure_box) {
  if (!ambient) throw StructuralError("subalgebra: null ambient");
  if (closure_depth < 0 || closure_box < 0)
    throw StructuralError("subalgebra: closure depth and box must be nonnegative");
  for (const Elem& g : generators) {
    if (!g.desc || !g.desc->same_as(*ambient))
      throw StructuralError("subalgebra: generator " + to_string(g) +
                            " does not live in " + ambient->name());
  }
  Subalgebra s;
  s.ambient_ = std::move(ambient);
  s.rep_ = Generated{std::move(generators), closure_depth, closure_box, nullptr};
  s.cache_ = std::make_shared<Cache>();
  return s;
}

Subalgebra Subalgebra::coordinate_ideal(DescriptorPtr ambient, std::set<std::size_t> support,
                                        std::int64_t closure_box) {
  if (!ambient) throw StructuralError("subalgebra: null ambient");
  auto n = zpow_arity(*ambient);
  if (!n)
    throw StructuralError("coordinate ideal: ambient must be Z^n, got " + ambient->name());
  for (std::size_t i : support)
    if (i >= *n)
      throw StructuralError("coordinate ideal: index " + std::to_string(i) +
                            " out of range for " + ambient->name());
  if (closure_box < 0) throw StructuralError("subalgebra: closure box must be nonnegative");
  Subalgebra s;
  s.ambient_ = std::move(ambient);
  s.rep_ = CoordinateIdeal{std::move(support), closure_box};
  s.cache_ = std::make_shared<Cache>();
  return s;
}

Subalgebra Subalgebra::with_invariant(std::function<bool(const Elem&)> invariant) const {
  if (!std::holds_alternative<Generated>(rep_))
    throw StructuralError("with_invariant: membership in " + description() +
                          " is already exact");
  Subalgebra s = *this;  // closure cache stays shared; the invariant does not affect it
  std::get<Generated>(s.rep_).invariant = std::move(invariant);
  return s;
}

bool Subalgebra::is_coordinate_ideal() const {
  return std::holds_alternative<CoordinateIdeal>(rep_);
}

const std::set<std::size_t>& Subalgebra::support() const {
  if (!is_coordinate_ideal())
    throw StructuralError("support(): " + description() + " is not a coordinate ideal");
  return std::get<CoordinateIdeal>(rep_).support;
}

const Subalgebra::Generated& Subalgebra::generated_rep() const {
  if (is_coordinate_ideal())
    throw StructuralError("generated_rep(): " + description() + " is a coordinate ideal");
  return std::get<Generated>(rep_);
}

std::int64_t Subalgebra::closure_box() const {
  if (is_coordinate_ideal()) return std::get<CoordinateIdeal>(rep_).closure_box;
  return std::get<Generated>(rep_).closure_box;
}

std::optional<int> Subalgebra::closure_fixpoint() const { return cache_->fixpoint_at; }

std::string Subalgebra::description() const {
  if (is_coordinate_ideal()) {
    std::string out = "ideal{";
    bool first = true;
    for (std::size_t i : std::get<CoordinateIdeal>(rep_).support) {
      if (!first) out += ',';
      first = false;
      out += std::to_string(i);
    }
    return out + "}";
  }
  std::string out = "gen{";
  const auto& g = std::get<Generated>(rep_).generators;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ';';
    out += to_string(g[i]);
  }
  return out + "}";
}

std::vector<Elem> Subalgebra::generator_list() const {
  if (!is_coordinate_ideal()) return std::get<Generated>(rep_).generators;
  std::vector<Elem> out;
  for (std::size_t i : std::get<CoordinateIdeal>(rep_).support) {
    std::vector<Int> coords(ambient_->dimension(), Int(0));
    coords[i] = 1;
    out.push_back(make_elem(ambient_, std::move(coords)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// bounded closure

namespace {

bool in_box(const Elem& x, std::int64_t box) {
  for (const Int& c : x.coords)
    if (c > box || c < -box) return false;
  return true;
}

[[noreturn]] void budget_blown(const Subalgebra& s) {
  throw ResourceError("bounded closure of " + s.ambient()->name() + ":" + s.description() +
                      " exceeded the " + std::to_string(closure_cardinality_budget) +
                      "-element budget");
}

std::vector<Elem> sort_canonical(std::vector<Elem> v) {
  std::sort(v.begin(), v.end(), coord_less);
  return v;
}

}  // namespace

std::vector<Elem> bounded_closure_at(const Subalgebra& s, int depth) {
  auto& cache = *s.cache_;
  if (cache.fixpoint_at && depth >= *cache.fixpoint_at)
    return cache.by_depth.at(*cache.fixpoint_at);
  if (auto it = cache.by_depth.find(depth); it != cache.by_depth.end()) return it->second;

  if (s.is_coordinate_ideal()) {
    // Exact: the support coordinates range over the whole box, the rest stay
    // zero.  Depth plays no role.
    std::int64_t box = s.closure_box();
    std::vector<std::size_t> idx(s.support().begin(), s.support().end());
    std::vector<Int> coords(s.ambient()->dimension(), Int(0));
    std::vector<std::int64_t> digits(idx.size(), -box);
    std::vector<Elem> out;
    while (true) {
      for (std::size_t k = 0; k < idx.size(); ++k) coords[idx[k]] = Int(digits[k]);
      out.push_back(make_elem(s.ambient(), coords));
      if (out.size() > closure_cardinality_budget) budget_blown(s);
      std::size_t k = idx.size();
      while (k > 0 && digits[k - 1] == box) {
        digits[k - 1] = -box;
        --k;
      }
      if (k == 0) break;
      ++digits[k - 1];
    }
    cache.fixpoint_at = 0;
    cache.by_depth[0] = sort_canonical(std::move(out));
    return cache.by_depth[0];
  }

  const auto& rep = s.generated_rep();

  // Resume from the deepest closure already computed below the request.
  int start = 0;
  std::vector<Elem> current;
  for (auto it = cache.by_depth.rbegin(); it != cache.by_depth.rend(); ++it) {
    if (it->first <= depth) {
      start = it->first;
      current = it->second;
      break;
    }
  }
  if (current.empty()) {
    current.push_back(identity(s.ambient()));
    for (const Elem& g : rep.generators)
      if (in_box(g, rep.closure_box)) current.push_back(g);
    current = sort_canonical(std::move(current));
  }
  std::set<std::vector<Int>> seen;
  for (const Elem& x : current) seen.insert(x.coords);

  auto add = [&](Elem x, std::vector<Elem>& fresh) {
    if (!in_box(x, rep.closure_box)) return;
    if (seen.insert(x.coords).second) {
      if (seen.size() > closure_cardinality_budget) budget_blown(s);
      fresh.push_back(std::move(x));
    }
  };

  for (int d = start; d < depth; ++d) {
    std::vector<Elem> fresh;
    for (const Elem& x : current) add(inv(x), fresh);
    // The group reducts of all stock instances are commutative (see
    // Descriptor::commutative), so unordered pairs cover every combination.
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i; j < current.size(); ++j) {
        add(mul(current[i], current[j]), fresh);
        add(join(current[i], current[j]), fresh);
        add(meet(current[i], current[j]), fresh);
      }
    }
    if (fresh.empty()) {
      cache.fixpoint_at = d;
      cache.by_depth[d] = std::move(current);
      return cache.by_depth[d];
    }
    current.insert(current.end(), fresh.begin(), fresh.end());
    current = sort_canonical(std::move(current));
  }
  cache.by_depth[depth] = std::move(current);
  return cache.by_depth[depth];
}

std::vector<Elem> bounded_closure(const Subalgebra& s) {
  int depth = s.is_coordinate_ideal() ? 0 : s.generated_rep().closure_depth;
  return bounded_closure_at(s, depth);
}

// ---------------------------------------------------------------------------
// membership and sampling

Membership contains(const Subalgebra& s, const Elem& x) {
  if (!x.desc || !x.desc->same_as(*s.ambient()))
    throw StructuralError("contains: element lives in " +
                          (x.desc ? x.desc->name() : std::string("?")) + ", subalgebra in " +
                          s.ambient()->name());
  if (s.is_coordinate_ideal()) {
    const auto& support = s.support();
    for (std::size_t i = 0; i < x.coords.size(); ++i)
      if (!support.count(i) && x.coords[i] != 0) return Membership::no;
    return Membership::yes;
  }
  const auto& rep = s.generated_rep();
  if (rep.invariant && !rep.invariant(x)) return Membership::no;
  for (int d = rep.closure_depth; d <= max_membership_depth; ++d) {
    try {
      const auto& members = bounded_closure_at(s, d);
      if (std::binary_search(members.begin(), members.end(), x, coord_less))
        return Membership::yes;
      if (s.closure_fixpoint() && *s.closure_fixpoint() <= d) break;
    } catch (const ResourceError&) {
      break;  // the bounded search ran out of room, not out of members
    }
  }
  return Membership::inconclusive;
}

Elem sample_member(const Subalgebra& s, SampleStream& stream, std::int64_t box) {
  if (s.is_coordinate_ideal()) {
    std::vector<Int> coords(s.ambient()->dimension(), Int(0));
    for (std::size_t i : s.support()) coords[i] = stream.coordinate(box);
    return make_elem(s.ambient(), std::move(coords));
  }
  const auto& all = bounded_closure(s);
  std::vector<Elem> fit;
  for (const Elem& x : all)
    if (in_box(x, box)) fit.push_back(x);
  if (fit.empty()) return identity(s.ambient());
  return fit[stream.below(fit.size())];
}

// ---------------------------------------------------------------------------
// sampled subobject tests

namespace {

// Generators first, then the identity, duplicates removed.
std::vector<Elem> member_probes(const Subalgebra& s) {
  std::vector<Elem> out = s.generator_list();
  out.push_back(identity(s.ambient()));
  std::set<std::vector<Int>> seen;
  std::vector<Elem> dedup;
  for (Elem& x : out)
    if (seen.insert(x.coords).second) dedup.push_back(std::move(x));
  return dedup;
}

// Identity, then the coordinate unit vectors of the ambient instance.
std::vector<Elem> ambient_probes(const DescriptorPtr& desc) {
  std::vector<Elem> out{identity(desc)};
  for (std::size_t i = 0; i < desc->dimension(); ++i) {
    std::vector<Int> coords(desc->dimension(), Int(0));
    coords[i] = 1;
    out.push_back(make_elem(desc, std::move(coords)));
  }
  return out;
}

void record_membership(LawReport& r, const Subalgebra& s, Elem value,
                       std::vector<Elem> inputs, const std::string& note) {
  switch (contains(s, value)) {
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

// Shared engine for the convexity and ideal tests: the probe value
// (a1 x v a2 y)(x v y)^-1 lands back in every convex subalgebra when a1 and
// a2 are members; the ideal test additionally demands closure under
// conjugation x^-1 a1 x.
LawReport convexity_engine(const Subalgebra& s, const SamplerConfig& cfg, bool conjugate) {
  LawReport r;
  r.instance = s.ambient()->name() + ":" + s.description();
  r.law = conjugate ? "subalgebra.ideal" : "subalgebra.convex";
  SampleStream stream =
      derived_stream(cfg, std::string(conjugate ? "ideal:" : "convex:") + r.instance);
  std::size_t tried = 0;

  auto check = [&](const Elem& a1, const Elem& a2, const Elem& x, const Elem& y) {
    ++tried;
    Elem value = mul(join(mul(a1, x), mul(a2, y)), inv(join(x, y)));
    record_membership(r, s, std::move(value), {a1, a2, x, y}, conjugate ? "convexity" : "");
    if (conjugate)
      record_membership(r, s, mul(mul(inv(x), a1), x), {a1, x}, "conjugation");
  };

  // Deterministic probe grid first, so canonical witnesses are reported in
  // the same position on every platform.
  const auto members = member_probes(s);
  const auto ambient = ambient_probes(s.ambient());
  for (const Elem& a1 : members)
    for (const Elem& a2 : members)
      for (const Elem& x : ambient)
        for (const Elem& y : ambient)
          if (tried < cfg.samples) check(a1, a2, x, y);

  while (tried < cfg.samples) {
    Elem a1 = sample_member(s, stream, cfg.box);
    Elem a2 = sample_member(s, stream, cfg.box);
    Elem x = sample_elem(s.ambient(), stream, cfg.box);
    Elem y = sample_elem(s.ambient(), stream, cfg.box);
    check(a1, a2, x, y);
  }
  r.samples = tried;
  r.finalize();
  return r;
}

}  // namespace

LawReport convexity_test(const Subalgebra& s, const SamplerConfig& cfg) {
  return convexity_engine(s, cfg, false);
}

LawReport ideal_test(const Subalgebra& s, const SamplerConfig& cfg) {
  return convexity_engine(s, cfg, true);
}

// ---------------------------------------------------------------------------
// polars

Subalgebra polar(const Subalgebra& s) {
  if (!s.is_coordinate_ideal())
    throw StructuralError("polar: exact polars are only available for coordinate ideals, "
                          "got " + s.description() + "; use polar_test for sampled evidence");
  std::size_t n = *zpow_arity(*s.ambient());
  std::set<std::size_t> complement;
  for (std::size_t i = 0; i < n; ++i)
    if (!s.support().count(i)) complement.insert(i);
  return Subalgebra::coordinate_ideal(s.ambient(), std::move(complement), s.closure_box());
}

LawReport polar_test(const Subalgebra& a, const Subalgebra& b, const SamplerConfig& cfg) {
  if (!a.ambient()->same_as(*b.ambient()))
    throw StructuralError("polar_test: subalgebras live in different instances " +
                          a.ambient()->name() + " and " + b.ambient()->name());
  LawReport r;
  r.instance = a.ambient()->name() + ":" + a.description() + "|" + b.description();
  r.law = "polar.cooperation";
  SampleStream stream = derived_stream(cfg, "polar:" + r.instance);
  std::size_t tried = 0;
  Elem e = identity(a.ambient());

  auto check = [&](const Elem& x, const Elem& y) {
    ++tried;
    Elem m = meet(abs_val(x), abs_val(y));
    if (m != e) {
      r.record({{x, y}, m, e, "not orthogonal"});
      return;
    }
    // Orthogonal members must commute and split positive parts across the
    // product; a sample where they did not would contradict the
    // orthogonality just established, so it is flagged under its own note.
    Elem xy = mul(x, y);
    Elem yx = mul(y, x);
    if (xy != yx) r.record({{x, y}, xy, yx, "orthogonality-mismatch"});
    Elem lhs = pos_part(xy);
    Elem rhs = mul(pos_part(x), pos_part(y));
    if (lhs != rhs) r.record({{x, y}, lhs, rhs, "orthogonality-mismatch"});
  };

  for (const Elem& x : member_probes(a))
    for (const Elem& y : member_probes(b))
      if (tried < cfg.samples) check(x, y);
  while (tried < cfg.samples) {
    Elem x = sample_member(a, stream, cfg.box);
    Elem y = sample_member(b, stream, cfg.box);
    check(x, y);
  }
  r.samples = tried;
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// commutator of coordinate ideals

Subalgebra huq_commutator_ideals(const Subalgebra& h, const Subalgebra& k) {
  if (!h.is_coordinate_ideal() || !k.is_coordinate_ideal())
    throw StructuralError("huq_commutator_ideals: both arguments must be coordinate ideals");
  if (!h.ambient()->same_as(*k.ambient()))
    throw StructuralError("huq_commutator_ideals: ideals live in different instances " +
                          h.ambient()->name() + " and " + k.ambient()->name());
  std::set<std::size_t> inter;
  for (std::size_t i : h.support())
    if (k.support().count(i)) inter.insert(i);
  return Subalgebra::coordinate_ideal(h.ambient(), std::move(inter));
}

Subalgebra huq_bruteforce(const Subalgebra& h, const Subalgebra& k) {
  if (!h.ambient()->same_as(*k.ambient()))
    throw StructuralError("huq_bruteforce: ideals live in different instances " +
                          h.ambient()->name() + " and " + k.ambient()->name());
  auto arity = zpow_arity(*h.ambient());
  if (!arity)
    throw StructuralError("huq_bruteforce: ambient must be Z^n, got " + h.ambient()->name());
  std::size_t n = *arity;
  if (n > 8) throw StructuralError("huq_bruteforce: exhaustive scan is limited to n <= 8");

  const auto gh = h.generator_list();
  const auto gk = k.generator_list();

  // A candidate quotient works when the generator images cooperate pairwise;
  // orthogonality to a whole subalgebra is decided by its generators, so this
  // is a semantic test, not support arithmetic.
  auto cooperates = [&](std::uint64_t mask) {
    std::set<std::size_t> killed;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) killed.insert(i);
    DescriptorPtr q = Descriptor::quotient(h.ambient(), std::move(killed));
    for (const Elem& x : gh)
      for (const Elem& y : gk)
        if (!is_orthogonal(project_to_quotient(q, x), project_to_quotient(q, y)))
          return false;
    return true;
  };

  std::uint64_t count = 1ull << n;
  std::uint64_t meet_of_passing = count - 1;
  bool any = false;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (cooperates(mask)) {
      meet_of_passing &= mask;
      any = true;
    }
  }
  if (!any || !cooperates(meet_of_passing))
    throw StructuralError("huq_bruteforce: the passing quotients have no unique minimum");
  std::set<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i)
    if ((meet_of_passing >> i) & 1) support.insert(i);
  return Subalgebra::coordinate_ideal(h.ambient(), std::move(support));
}

std::vector<std::set<std::size_t>> ideal_lattice(std::size_t n) {
  if (n > 8) throw StructuralError("ideal_lattice: n <= 8");
  std::vector<std::set<std::size_t>> out;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) s.insert(i);
    out.push_back(std::move(s));
  }
  return out;
}

LawReport distributivity_check(std::size_t n) {
  if (n > 5)
    throw StructuralError("distributivity_check: exhaustive scan is limited to n <= 5");
  LawReport r;
  DescriptorPtr zn = Descriptor::zpow(n);
  r.instance = zn->name();
  r.law = "ideal-lattice.distributive";
  auto charvec = [&](std::uint64_t mask) {
    std::vector<Int> coords(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) coords[i] = 1;
    return make_elem(zn, std::move(coords));
  };
  std::uint64_t count = 1ull << n;
  for (std::uint64_t a = 0; a < count; ++a)
    for (std::uint64_t b = 0; b < count; ++b)
      for (std::uint64_t c = 0; c < count; ++c) {
        ++r.samples;
        std::uint64_t lhs = a & (b | c);
        std::uint64_t rhs = (a & b) | (a & c);
        if (lhs != rhs)
          r.record({{charvec(a), charvec(b), charvec(c)}, charvec(lhs), charvec(rhs),
                    "meet-over-join"});
        std::uint64_t dual_lhs = a | (b & c);
        std::uint64_t dual_rhs = (a | b) & (a | c);
        if (dual_lhs != dual_rhs)
          r.record({{charvec(a), charvec(b), charvec(c)}, charvec(dual_lhs),
                    charvec(dual_rhs), "join-over-meet"});
      }
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// congruences

bool CongruenceOnZn::related(const Elem& x, const Elem& y) const {
  if (!x.desc->same_as(*ambient) || !y.desc->same_as(*ambient))
    throw StructuralError("congruence: elements must live in " + ambient->name());
  return contains(ideal, mul(x, inv(y))) == Membership::yes;
}

CongruenceOnZn congruence_centralizer(const CongruenceOnZn& r) {
  return CongruenceOnZn{r.ambient, polar(r.ideal)};
}

// ---------------------------------------------------------------------------
// convex closure

std::vector<Elem> bounded_convex_closure(const Subalgebra& s) {
  if (!zpow_arity(*s.ambient()))
    throw StructuralError("bounded_convex_closure: ambient must be Z^n, got " +
                          s.ambient()->name());
  std::int64_t box = s.closure_box();
  std::vector<Elem> current = bounded_closure(s);
  std::set<std::vector<Int>> seen;
  for (const Elem& x : current) seen.insert(x.coords);

  auto add = [&](Elem x, std::vector<Elem>& fresh) {
    if (!in_box(x, box)) return;
    if (seen.insert(x.coords).second) {
      if (seen.size() > closure_cardinality_budget) budget_blown(s);
      fresh.push_back(std::move(x));
    }
  };

  while (true) {
    std::vector<Elem> fresh;
    for (const Elem& x : current) add(inv(x), fresh);
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i; j < current.size(); ++j) {
        add(mul(current[i], current[j]), fresh);
        // In Z^n the order interval [meet, join] is exactly the coordinate
        // box between the two members; enumerating it covers the join, the
        // meet, and everything order-between.
        Elem lo = meet(current[i], current[j]);
        Elem hi = join(current[i], current[j]);
        std::vector<Int> digits = lo.coords;
        while (true) {
          add(make_elem(s.ambient(), digits), fresh);
          std::size_t k = digits.size();
          while (k > 0 && digits[k - 1] == hi.coords[k - 1]) {
            digits[k - 1] = lo.coords[k - 1];
            --k;
          }
          if (k == 0) break;
          ++digits[k - 1];
        }
      }
    }
    if (fresh.empty()) break;
    current.insert(current.end(), fresh.begin(), fresh.end());
    current = sort_canonical(std::move(current));
  }
  return sort_canonical(std::move(current));
}

}  // namespace lgrp
