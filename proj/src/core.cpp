#include "lgrp/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace lgrp {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// descriptors

namespace {

std::string render_name(const Descriptor& d) {
  switch (d.kind()) {
    case Descriptor::Kind::Integers:
      return "Z";
    case Descriptor::Kind::Product: {
      bool all_z = std::all_of(
          d.factors().begin(), d.factors().end(),
          [](const DescriptorPtr& f) { return f->kind() == Descriptor::Kind::Integers; });
      if (all_z) return "Z^" + std::to_string(d.factors().size());
      std::string out = "prod(";
      for (std::size_t i = 0; i < d.factors().size(); ++i) {
        if (i) out += ',';
        out += d.factors()[i]->name();
      }
      return out + ")";
    }
    case Descriptor::Kind::Lex:
      return "lex(" + d.lex_kernel()->name() + "," + d.lex_top()->name() + ")";
    case Descriptor::Kind::Quotient: {
      std::string out = "quot(" + d.quotient_base()->name() + ",{";
      bool first = true;
      for (std::size_t i : d.killed_support()) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(i);
      }
      return out + "})";
    }
  }
  throw StructuralError("descriptor: unknown kind");
}

}  // namespace

DescriptorPtr Descriptor::integers() {
  static DescriptorPtr cached = [] {
    Descriptor d;
    d.kind_ = Kind::Integers;
    d.dimension_ = 1;
    d.totally_ordered_ = true;
    d.name_ = "Z";
    return std::make_shared<const Descriptor>(std::move(d));
  }();
  return cached;
}

DescriptorPtr Descriptor::product(std::vector<DescriptorPtr> factors) {
  Descriptor d;
  d.kind_ = Kind::Product;
  d.factors_ = std::move(factors);
  d.dimension_ = 0;
  for (const auto& f : d.factors_) {
    if (!f) throw StructuralError("product: null factor");
    d.dimension_ += f->dimension();
  }
  d.totally_ordered_ =
      d.factors_.empty() ||
      (d.factors_.size() == 1 && d.factors_[0]->totally_ordered());
  d.name_ = render_name(d);
  return std::make_shared<const Descriptor>(std::move(d));
}

DescriptorPtr Descriptor::zpow(std::size_t n) {
  std::vector<DescriptorPtr> fs(n, integers());
  return product(std::move(fs));
}

DescriptorPtr Descriptor::lex(DescriptorPtr kernel, DescriptorPtr top) {
  if (!kernel || !top) throw StructuralError("lex: null factor");
  if (!top->totally_ordered())
    throw StructuralError("lex: top factor must be totally ordered, got " + top->name());
  Descriptor d;
  d.kind_ = Kind::Lex;
  d.lex_kernel_ = std::move(kernel);
  d.lex_top_ = std::move(top);
  d.dimension_ = d.lex_kernel_->dimension() + d.lex_top_->dimension();
  d.totally_ordered_ = d.lex_kernel_->totally_ordered();
  d.name_ = render_name(d);
  return std::make_shared<const Descriptor>(std::move(d));
}

DescriptorPtr Descriptor::quotient(DescriptorPtr base, std::set<std::size_t> killed) {
  if (!base) throw StructuralError("quotient: null base");
  auto n = zpow_arity(*base);
  if (!n) throw StructuralError("quotient: base must be Z^n, got " + base->name());
  for (std::size_t i : killed)
    if (i >= *n)
      throw StructuralError("quotient: killed index " + std::to_string(i) +
                            " out of range for " + base->name());
  Descriptor d;
  d.kind_ = Kind::Quotient;
  d.quotient_base_ = std::move(base);
  d.killed_ = std::move(killed);
  d.dimension_ = *n - d.killed_.size();
  d.totally_ordered_ = d.dimension_ <= 1;
  d.name_ = render_name(d);
  return std::make_shared<const Descriptor>(std::move(d));
}

const std::vector<DescriptorPtr>& Descriptor::factors() const {
  if (kind_ != Kind::Product) throw StructuralError("factors(): not a product");
  return factors_;
}
const DescriptorPtr& Descriptor::lex_kernel() const {
  if (kind_ != Kind::Lex) throw StructuralError("lex_kernel(): not a lex instance");
  return lex_kernel_;
}
const DescriptorPtr& Descriptor::lex_top() const {
  if (kind_ != Kind::Lex) throw StructuralError("lex_top(): not a lex instance");
  return lex_top_;
}
const DescriptorPtr& Descriptor::quotient_base() const {
  if (kind_ != Kind::Quotient) throw StructuralError("quotient_base(): not a quotient");
  return quotient_base_;
}
const std::set<std::size_t>& Descriptor::killed_support() const {
  if (kind_ != Kind::Quotient) throw StructuralError("killed_support(): not a quotient");
  return killed_;
}

std::optional<std::size_t> zpow_arity(const Descriptor& d) {
  if (d.kind() == Descriptor::Kind::Integers) return 1;
  if (d.kind() == Descriptor::Kind::Product) {
    for (const auto& f : d.factors())
      if (f->kind() != Descriptor::Kind::Integers) return std::nullopt;
    return d.factors().size();
  }
  return std::nullopt;
}

// --- descriptor text parser -------------------------------------------------

namespace {

struct DescParser {
  const std::string& src;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw StructuralError("descriptor '" + src + "' at offset " +
                          std::to_string(pos) + ": " + msg);
  }
  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool eat_word(const char* w) {
    skip_ws();
    std::size_t len = std::string(w).size();
    if (src.compare(pos, len, w) == 0) {
      pos += len;
      return true;
    }
    return false;
  }
  std::size_t number() {
    skip_ws();
    if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
      fail("expected a number");
    std::size_t v = 0;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      v = v * 10 + static_cast<std::size_t>(src[pos] - '0');
      if (v > 1000000) fail("number too large");
      ++pos;
    }
    return v;
  }

  DescriptorPtr parse() {
    skip_ws();
    if (eat_word("prod")) {
      expect('(');
      std::vector<DescriptorPtr> fs;
      skip_ws();
      if (!eat(')')) {
        fs.push_back(parse());
        while (eat(',')) fs.push_back(parse());
        expect(')');
      }
      return Descriptor::product(std::move(fs));
    }
    if (eat_word("lex")) {
      expect('(');
      auto k = parse();
      expect(',');
      auto t = parse();
      expect(')');
      return Descriptor::lex(std::move(k), std::move(t));
    }
    if (eat_word("quot")) {
      expect('(');
      auto base = parse();
      expect(',');
      expect('{');
      std::set<std::size_t> killed;
      skip_ws();
      if (!eat('}')) {
        killed.insert(number());
        while (eat(',')) killed.insert(number());
        expect('}');
      }
      expect(')');
      return Descriptor::quotient(std::move(base), std::move(killed));
    }
    if (eat_word("Z")) {
      skip_ws();
      if (eat('^')) return Descriptor::zpow(number());
      return Descriptor::integers();
    }
    fail("expected Z, Z^n, prod(...), lex(...) or quot(...)");
  }
};

}  // namespace

DescriptorPtr parse_descriptor(const std::string& text) {
  DescParser p{text};
  auto d = p.parse();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return d;
}

// ---------------------------------------------------------------------------
// elements

Elem make_elem(DescriptorPtr desc, std::vector<Int> coords) {
  if (!desc) throw StructuralError("make_elem: null descriptor");
  if (coords.size() != desc->dimension())
    throw StructuralError("make_elem: " + desc->name() + " needs " +
                          std::to_string(desc->dimension()) + " coordinates, got " +
                          std::to_string(coords.size()));
  return Elem{std::move(coords), std::move(desc)};
}

Elem identity(const DescriptorPtr& desc) {
  if (!desc) throw StructuralError("identity: null descriptor");
  return Elem{std::vector<Int>(desc->dimension(), Int(0)), desc};
}

namespace {

void require_same(const Elem& a, const Elem& b, const char* op) {
  if (!a.desc || !b.desc) throw StructuralError(std::string(op) + ": element without descriptor");
  if (!a.desc->same_as(*b.desc))
    throw StructuralError(std::string(op) + ": mixed instances " + a.desc->name() +
                          " and " + b.desc->name());
}

// Strict comparison of two tuples under a totally ordered descriptor shape.
int total_compare_span(const Descriptor& d, const Int* x, const Int* y) {
  switch (d.kind()) {
    case Descriptor::Kind::Integers:
      return x[0] < y[0] ? -1 : (x[0] == y[0] ? 0 : 1);
    case Descriptor::Kind::Product: {
      std::size_t off = 0;
      for (const auto& f : d.factors()) {
        int c = total_compare_span(*f, x + off, y + off);
        if (c != 0) return c;
        off += f->dimension();
      }
      return 0;
    }
    case Descriptor::Kind::Lex: {
      std::size_t dk = d.lex_kernel()->dimension();
      int c = total_compare_span(*d.lex_top(), x + dk, y + dk);
      if (c != 0) return c;
      return total_compare_span(*d.lex_kernel(), x, y);
    }
    case Descriptor::Kind::Quotient: {
      for (std::size_t i = 0; i < d.dimension(); ++i) {
        if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
      }
      return 0;
    }
  }
  throw StructuralError("total_compare: unknown kind");
}

void join_span(const Descriptor& d, const Int* x, const Int* y, Int* out) {
  switch (d.kind()) {
    case Descriptor::Kind::Integers:
      out[0] = std::max(x[0], y[0]);
      return;
    case Descriptor::Kind::Product: {
      std::size_t off = 0;
      for (const auto& f : d.factors()) {
        join_span(*f, x + off, y + off, out + off);
        off += f->dimension();
      }
      return;
    }
    case Descriptor::Kind::Lex: {
      // Whoever has the strictly larger top wins outright; on equal tops the
      // kernels are joined and the common top is kept.
      std::size_t dk = d.lex_kernel()->dimension();
      int c = total_compare_span(*d.lex_top(), x + dk, y + dk);
      if (c > 0) {
        std::copy(x, x + d.dimension(), out);
      } else if (c < 0) {
        std::copy(y, y + d.dimension(), out);
      } else {
        join_span(*d.lex_kernel(), x, y, out);
        std::copy(x + dk, x + d.dimension(), out + dk);
      }
      return;
    }
    case Descriptor::Kind::Quotient:
      for (std::size_t i = 0; i < d.dimension(); ++i) out[i] = std::max(x[i], y[i]);
      return;
  }
  throw StructuralError("join: unknown kind");
}

}  // namespace

bool operator==(const Elem& a, const Elem& b) {
  require_same(a, b, "==");
  return a.coords == b.coords;
}
bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

bool coord_less(const Elem& a, const Elem& b) {
  require_same(a, b, "coord_less");
  return std::lexicographical_compare(a.coords.begin(), a.coords.end(),
                                      b.coords.begin(), b.coords.end());
}

std::string to_string(const Elem& x) {
  if (x.coords.size() == 1) return x.coords[0].str();
  std::string out = "(";
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    if (i) out += ',';
    out += x.coords[i].str();
  }
  return out + ")";
}

Elem mul(const Elem& x, const Elem& y) {
  require_same(x, y, "mul");
  Elem out{std::vector<Int>(), x.desc};
  out.coords.reserve(x.coords.size());
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    out.coords.push_back(x.coords[i] + y.coords[i]);
  return out;
}

Elem inv(const Elem& x) {
  Elem out{std::vector<Int>(), x.desc};
  out.coords.reserve(x.coords.size());
  for (const Int& c : x.coords) out.coords.push_back(-c);
  return out;
}

Elem join(const Elem& x, const Elem& y) {
  require_same(x, y, "join");
  Elem out{std::vector<Int>(x.coords.size()), x.desc};
  join_span(*x.desc, x.coords.data(), y.coords.data(), out.coords.data());
  return out;
}

Elem meet(const Elem& x, const Elem& y) { return inv(join(inv(x), inv(y))); }

bool leq(const Elem& x, const Elem& y) { return join(x, y) == y; }

Elem pos_part(const Elem& x) { return join(x, identity(x.desc)); }
Elem neg_part(const Elem& x) { return meet(x, identity(x.desc)); }
Elem abs_val(const Elem& x) { return join(x, inv(x)); }
bool is_positive(const Elem& x) { return leq(identity(x.desc), x); }

bool is_orthogonal(const Elem& x, const Elem& y) {
  require_same(x, y, "is_orthogonal");
  return meet(abs_val(x), abs_val(y)) == identity(x.desc);
}

Elem maltsev(const Elem& x, const Elem& y, const Elem& z) {
  return mul(mul(x, inv(y)), z);
}

Elem project_to_quotient(const DescriptorPtr& quot, const Elem& base_elem) {
  if (!quot || quot->kind() != Descriptor::Kind::Quotient)
    throw StructuralError("project_to_quotient: target is not a quotient");
  if (!base_elem.desc->same_as(*quot->quotient_base()))
    throw StructuralError("project_to_quotient: element lives in " +
                          base_elem.desc->name() + ", base is " +
                          quot->quotient_base()->name());
  std::vector<Int> coords;
  coords.reserve(quot->dimension());
  const auto& killed = quot->killed_support();
  for (std::size_t i = 0; i < base_elem.coords.size(); ++i)
    if (!killed.count(i)) coords.push_back(base_elem.coords[i]);
  return Elem{std::move(coords), quot};
}

// ---------------------------------------------------------------------------
// sampling

std::uint64_t SampleStream::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t SampleStream::below(std::uint64_t n) {
  if (n == 0) throw StructuralError("SampleStream::below(0)");
  return next() % n;
}

Int SampleStream::coordinate(std::int64_t box) {
  if (box < 0) throw StructuralError("SampleStream::coordinate: negative box");
  std::uint64_t width = 2 * static_cast<std::uint64_t>(box) + 1;
  return Int(static_cast<std::int64_t>(below(width)) - box);
}

namespace {
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}
}  // namespace

SampleStream derived_stream(const SamplerConfig& cfg, const std::string& label) {
  return SampleStream(cfg.seed ^ fnv1a(label));
}

Elem sample_elem(const DescriptorPtr& desc, SampleStream& s, std::int64_t box) {
  std::vector<Int> coords;
  coords.reserve(desc->dimension());
  for (std::size_t i = 0; i < desc->dimension(); ++i) coords.push_back(s.coordinate(box));
  return Elem{std::move(coords), desc};
}

// ---------------------------------------------------------------------------
// reports

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

void LawReport::record(Violation v) {
  ++violation_total;
  if (violations.size() < max_stored) violations.push_back(std::move(v));
}

void LawReport::finalize() {
  // Stored violations stay in discovery order: every checker draws from a
  // deterministic stream, so that order is itself canonical and keeps the
  // first witness stable.
  if (violation_total > 0)
    status = Status::fail;
  else if (inconclusive > 0)
    status = Status::inconclusive;
  else
    status = Status::pass;
}

namespace {

ordered_json elem_json(const Elem& e) {
  ordered_json arr = ordered_json::array();
  for (const Int& c : e.coords) arr.push_back(c.str());
  return arr;
}

ordered_json violation_json(const Violation& v) {
  ordered_json j;
  ordered_json inputs = ordered_json::array();
  for (const auto& e : v.inputs) inputs.push_back(elem_json(e));
  j["inputs"] = inputs;
  j["lhs"] = elem_json(v.lhs);
  if (v.rhs)
    j["rhs"] = elem_json(*v.rhs);
  else
    j["rhs"] = nullptr;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

ordered_json report_json(const LawReport& r) {
  ordered_json j;
  j["instance"] = r.instance;
  j["law"] = r.law;
  j["samples"] = std::to_string(r.samples);
  j["status"] = to_string(r.status);
  ordered_json vs = ordered_json::array();
  for (const auto& v : r.violations) vs.push_back(violation_json(v));
  j["violations"] = vs;
  if (r.violation_total > r.violations.size())
    j["violationsTotal"] = std::to_string(r.violation_total);
  if (r.inconclusive > 0) j["inconclusive"] = std::to_string(r.inconclusive);
  return j;
}

}  // namespace

std::string LawReport::to_json() const { return report_json(*this).dump(); }

std::string reports_to_json(const std::vector<LawReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return arr.dump();
}

// ---------------------------------------------------------------------------
// morphism checks

namespace {
Elem apply_checked(const Morphism& f, const Elem& x) {
  Elem y = f.fn(x);
  if (!y.desc->same_as(*f.codomain))
    throw StructuralError("morphism " + f.label + ": image lives in " + y.desc->name() +
                          ", expected " + f.codomain->name());
  return y;
}
}  // namespace

LawReport check_morphism(const Morphism& f, const SamplerConfig& cfg) {
  LawReport r;
  r.instance = f.domain->name() + "->" + f.codomain->name();
  r.law = "morphism.product-and-pos";
  r.samples = cfg.samples;
  SampleStream s = derived_stream(cfg, "check_morphism:" + f.label + ":" + r.instance);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Elem x = sample_elem(f.domain, s, cfg.box);
    Elem y = sample_elem(f.domain, s, cfg.box);
    Elem lhs = apply_checked(f, mul(x, y));
    Elem rhs = mul(apply_checked(f, x), apply_checked(f, y));
    if (lhs != rhs) r.record({{x, y}, lhs, rhs, "product"});
    Elem pl = apply_checked(f, pos_part(x));
    Elem pr = pos_part(apply_checked(f, x));
    if (pl != pr) r.record({{x}, pl, pr, "pos-part"});
  }
  r.finalize();
  return r;
}

LawReport check_join_preservation(const Morphism& f, const SamplerConfig& cfg) {
  LawReport r;
  r.instance = f.domain->name() + "->" + f.codomain->name();
  r.law = "morphism.join";
  r.samples = cfg.samples;
  SampleStream s = derived_stream(cfg, "check_join:" + f.label + ":" + r.instance);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Elem x = sample_elem(f.domain, s, cfg.box);
    Elem y = sample_elem(f.domain, s, cfg.box);
    Elem lhs = apply_checked(f, join(x, y));
    Elem rhs = join(apply_checked(f, x), apply_checked(f, y));
    if (lhs != rhs) r.record({{x, y}, lhs, rhs, ""});
  }
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------
// law suite

namespace {

struct LawDef {
  const char* id;
  std::size_t arity;
  std::pair<Elem, Elem> (*sides)(const std::vector<Elem>&);
};

const LawDef kLaws[] = {
    {"group.assoc", 3,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(mul(v[0], v[1]), v[2]), mul(v[0], mul(v[1], v[2])));
     }},
    {"group.left-identity", 1,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(identity(v[0].desc), v[0]), v[0]);
     }},
    {"group.right-identity", 1,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(v[0], identity(v[0].desc)), v[0]);
     }},
    {"group.left-inverse", 1,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(inv(v[0]), v[0]), identity(v[0].desc));
     }},
    {"group.right-inverse", 1,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(v[0], inv(v[0])), identity(v[0].desc));
     }},
    {"join.assoc", 3,
     [](const std::vector<Elem>& v) {
       return std::pair(join(join(v[0], v[1]), v[2]), join(v[0], join(v[1], v[2])));
     }},
    {"join.comm", 2,
     [](const std::vector<Elem>& v) { return std::pair(join(v[0], v[1]), join(v[1], v[0])); }},
    {"join.idem", 1,
     [](const std::vector<Elem>& v) { return std::pair(join(v[0], v[0]), v[0]); }},
    {"meet.assoc", 3,
     [](const std::vector<Elem>& v) {
       return std::pair(meet(meet(v[0], v[1]), v[2]), meet(v[0], meet(v[1], v[2])));
     }},
    {"meet.comm", 2,
     [](const std::vector<Elem>& v) { return std::pair(meet(v[0], v[1]), meet(v[1], v[0])); }},
    {"meet.idem", 1,
     [](const std::vector<Elem>& v) { return std::pair(meet(v[0], v[0]), v[0]); }},
    {"lattice.absorb-join", 2,
     [](const std::vector<Elem>& v) {
       return std::pair(join(v[0], meet(v[0], v[1])), v[0]);
     }},
    {"lattice.absorb-meet", 2,
     [](const std::vector<Elem>& v) {
       return std::pair(meet(v[0], join(v[0], v[1])), v[0]);
     }},
    {"lattice.distributive", 3,
     [](const std::vector<Elem>& v) {
       return std::pair(meet(v[0], join(v[1], v[2])),
                        join(meet(v[0], v[1]), meet(v[0], v[2])));
     }},
    {"dist.left-join", 3,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(v[0], join(v[1], v[2])),
                        join(mul(v[0], v[1]), mul(v[0], v[2])));
     }},
    {"dist.right-join", 3,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(join(v[0], v[1]), v[2]),
                        join(mul(v[0], v[2]), mul(v[1], v[2])));
     }},
    {"dist.left-meet", 3,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(v[0], meet(v[1], v[2])),
                        meet(mul(v[0], v[1]), mul(v[0], v[2])));
     }},
    {"dist.right-meet", 3,
     [](const std::vector<Elem>& v) {
       return std::pair(mul(meet(v[0], v[1]), v[2]),
                        meet(mul(v[0], v[2]), mul(v[1], v[2])));
     }},
    // a(x ^ y)^-1 b  =  (a x^-1 b) v (a y^-1 b): conjugating a meet-inverse
    // turns it into a join of translated inverses.
    {"id.translate-meet-inv", 4,
     [](const std::vector<Elem>& v) {
       const Elem &a = v[0], &x = v[1], &y = v[2], &b = v[3];
       return std::pair(mul(mul(a, inv(meet(x, y))), b),
                        join(mul(mul(a, inv(x)), b), mul(mul(a, inv(y)), b)));
     }},
    {"id.join-from-meet", 2,
     [](const std::vector<Elem>& v) {
       const Elem &x = v[0], &y = v[1];
       return std::pair(mul(mul(x, inv(meet(x, y))), y), join(x, y));
     }},
    {"id.decompose-join-meet", 2,
     [](const std::vector<Elem>& v) {
       const Elem &x = v[0], &y = v[1];
       return std::pair(x, mul(mul(join(x, y), inv(y)), meet(x, y)));
     }},
    {"id.pos-neg-parts", 1,
     [](const std::vector<Elem>& v) {
       return std::pair(v[0], mul(pos_part(v[0]), neg_part(v[0])));
     }},
    {"id.abs-from-parts", 1,
     [](const std::vector<Elem>& v) {
       return std::pair(abs_val(v[0]), mul(pos_part(v[0]), inv(neg_part(v[0]))));
     }},
};

// Only valid when the group reduct is commutative.
const LawDef kAbelianLaw = {
    "id.product-join-meet", 2, [](const std::vector<Elem>& v) {
      return std::pair(mul(v[0], v[1]), mul(join(v[0], v[1]), meet(v[0], v[1])));
    }};

LawReport run_law(const DescriptorPtr& desc, const SamplerConfig& cfg, const LawDef& law) {
  LawReport r;
  r.instance = desc->name();
  r.law = law.id;
  r.samples = cfg.samples;
  SampleStream s = derived_stream(cfg, std::string("law:") + law.id + ":" + desc->name());
  std::vector<Elem> v;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    v.clear();
    for (std::size_t k = 0; k < law.arity; ++k) v.push_back(sample_elem(desc, s, cfg.box));
    auto [lhs, rhs] = law.sides(v);
    if (lhs != rhs) r.record({v, lhs, rhs, ""});
  }
  r.finalize();
  return r;
}

}  // namespace

std::vector<LawReport> law_suite(const DescriptorPtr& desc, const SamplerConfig& cfg) {
  if (!desc) throw StructuralError("law_suite: null descriptor");
  std::vector<LawReport> out;
  for (const LawDef& law : kLaws) out.push_back(run_law(desc, cfg, law));
  if (desc->commutative()) out.push_back(run_law(desc, cfg, kAbelianLaw));
  return out;
}

LawReport internal_group_refuter(const DescriptorPtr& desc, const SamplerConfig& cfg) {
  LawReport r;
  r.instance = desc->name();
  r.law = "internal-group.join-vs-product";
  SampleStream s = derived_stream(cfg, "internal-group:" + desc->name());
  std::size_t tried = 0;

  auto check = [&](const Elem& a, const Elem& b, const Elem& c, const Elem& d) {
    ++tried;
    Elem lhs = mul(join(a, c), join(b, d));
    Elem rhs = join(mul(a, b), mul(c, d));
    if (lhs != rhs) r.record({{a, b, c, d}, lhs, rhs, ""});
  };

  // Deterministic probe grid over {0,1} coordinates keeps the first reported
  // witness identical on every platform; random samples fill the budget.
  std::size_t dim = desc->dimension();
  if (dim >= 1 && dim <= 3) {
    std::size_t bits = 4 * dim;
    for (std::uint64_t mask = 0; mask < (1ull << bits) && tried < cfg.samples; ++mask) {
      std::vector<Elem> q;
      for (std::size_t part = 0; part < 4; ++part) {
        std::vector<Int> coords;
        for (std::size_t i = 0; i < dim; ++i) {
          // Treat mask as base-2 digits, most significant digit first, so the
          // grid is scanned in lexicographic (a, b, c, d) order.
          std::size_t shift = bits - 1 - (part * dim + i);
          coords.push_back(Int((mask >> shift) & 1));
        }
        q.push_back(Elem{std::move(coords), desc});
      }
      check(q[0], q[1], q[2], q[3]);
    }
  }
  while (tried < cfg.samples) {
    Elem a = sample_elem(desc, s, cfg.box);
    Elem b = sample_elem(desc, s, cfg.box);
    Elem c = sample_elem(desc, s, cfg.box);
    Elem d = sample_elem(desc, s, cfg.box);
    check(a, b, c, d);
  }
  r.samples = tried;
  r.finalize();
  return r;
}

}  // namespace lgrp
