#include <doctest.h>

#include <algorithm>
#include <set>

#include "lgrp/core.hpp"

using namespace lgrp;

namespace {

Elem el(const DescriptorPtr& d, std::vector<long long> cs) {
  std::vector<Int> v;
  for (long long c : cs) v.push_back(Int(c));
  return make_elem(d, std::move(v));
}

const DescriptorPtr Z = Descriptor::integers();
const DescriptorPtr Z2 = Descriptor::zpow(2);
const DescriptorPtr Z3 = Descriptor::zpow(3);
const DescriptorPtr LXZZ = Descriptor::lex(Z, Z);

}  // namespace

TEST_CASE("descriptor shapes, names and flags") {
  CHECK(Z->dimension() == 1);
  CHECK(Z->totally_ordered());
  CHECK(Z->name() == "Z");

  CHECK(Z3->dimension() == 3);
  CHECK_FALSE(Z3->totally_ordered());
  CHECK(Z3->name() == "Z^3");

  CHECK(LXZZ->dimension() == 2);
  CHECK(LXZZ->totally_ordered());
  CHECK(LXZZ->name() == "lex(Z,Z)");

  auto lex2 = Descriptor::lex(Z2, Z);
  CHECK(lex2->dimension() == 3);
  CHECK_FALSE(lex2->totally_ordered());
  CHECK(lex2->name() == "lex(Z^2,Z)");

  auto q = Descriptor::quotient(Z3, {0});
  CHECK(q->dimension() == 2);
  CHECK(q->name() == "quot(Z^3,{0})");

  auto zero = Descriptor::zpow(0);
  CHECK(zero->dimension() == 0);
  CHECK(zero->totally_ordered());
  CHECK(zero->name() == "Z^0");

  // the top of a lex glueing must be totally ordered
  CHECK_THROWS_AS(Descriptor::lex(Z, Z2), StructuralError);
  // quotients only quotient integer powers, by in-range coordinates
  CHECK_THROWS_AS(Descriptor::quotient(LXZZ, {0}), StructuralError);
  CHECK_THROWS_AS(Descriptor::quotient(Z3, {3}), StructuralError);

  CHECK(zpow_arity(*Z) == 1);
  CHECK(zpow_arity(*Z3) == 3);
  CHECK(zpow_arity(*zero) == 0);
  CHECK_FALSE(zpow_arity(*LXZZ).has_value());
  CHECK_FALSE(zpow_arity(*q).has_value());
}

TEST_CASE("descriptor text syntax round-trips") {
  for (const char* text : {"Z", "Z^3", "Z^0", "prod(Z^2,Z)", "lex(Z,Z)",
                           "lex(Z^2,Z)", "quot(Z^3,{0})", "quot(Z^4,{1,3})",
                           "prod(lex(Z,Z),Z)"}) {
    auto d = parse_descriptor(text);
    CHECK(d->name() == text);
  }
  CHECK(parse_descriptor(" prod( Z^2 , Z ) ")->name() == "prod(Z^2,Z)");
  CHECK(parse_descriptor("Z^1")->name() == "Z^1");
  CHECK(parse_descriptor("Z^1")->dimension() == 1);

  CHECK_THROWS_AS(parse_descriptor("foo"), StructuralError);
  CHECK_THROWS_AS(parse_descriptor("Z^"), StructuralError);
  CHECK_THROWS_AS(parse_descriptor("prod(Z,"), StructuralError);
  CHECK_THROWS_AS(parse_descriptor("lex(Z,Z^2)"), StructuralError);
  CHECK_THROWS_AS(parse_descriptor("quot(lex(Z,Z),{0})"), StructuralError);
  CHECK_THROWS_AS(parse_descriptor("Z junk"), StructuralError);
}

TEST_CASE("group and lattice arithmetic in integer powers") {
  Elem x = el(Z3, {1, -4, 2});
  Elem y = el(Z3, {0, 5, 2});
  CHECK(to_string(mul(x, y)) == "(1,1,4)");
  CHECK(to_string(inv(x)) == "(-1,4,-2)");
  CHECK(to_string(join(x, y)) == "(1,5,2)");
  CHECK(to_string(meet(x, y)) == "(0,-4,2)");
  CHECK(leq(meet(x, y), x));
  CHECK(leq(x, join(x, y)));
  CHECK_FALSE(leq(x, y));

  CHECK(to_string(pos_part(el(Z, {-7}))) == "0");
  CHECK(to_string(neg_part(el(Z, {-7}))) == "-7");
  CHECK(to_string(abs_val(el(Z, {-7}))) == "7");
  CHECK(to_string(pos_part(el(Z2, {2, -5}))) == "(2,0)");
  CHECK(is_positive(el(Z2, {0, 3})));
  CHECK_FALSE(is_positive(el(Z2, {-1, 3})));

  // elements of structurally different instances never combine
  CHECK_THROWS_AS(mul(el(Z, {1}), el(Z2, {1, 2})), StructuralError);
  CHECK_THROWS_AS(make_elem(Z3, {Int(1)}), StructuralError);
}

TEST_CASE("lexicographic arithmetic and order") {
  Elem a = el(LXZZ, {5, 0});
  Elem b = el(LXZZ, {-7, 1});
  CHECK(to_string(mul(a, b)) == "(-2,1)");
  // a strictly larger top wins the join outright
  CHECK(to_string(join(a, b)) == "(-7,1)");
  // the meet comes out of the derived inversion formula, never a special case
  CHECK(to_string(meet(a, b)) == "(5,0)");
  CHECK(leq(el(LXZZ, {100, 0}), el(LXZZ, {-100, 1})));

  // equal tops fall back to the kernel order
  CHECK(to_string(join(el(LXZZ, {3, 2}), el(LXZZ, {-1, 2}))) == "(3,2)");
  CHECK(to_string(meet(el(LXZZ, {3, 2}), el(LXZZ, {-1, 2}))) == "(-1,2)");

  // in lex(Z^2,Z) the kernel join is coordinatewise once tops agree
  auto lx2 = Descriptor::lex(Z2, Z);
  CHECK(to_string(join(el(lx2, {1, -4, 3}), el(lx2, {0, 9, 3}))) == "(1,9,3)");
  CHECK(to_string(join(el(lx2, {1, -4, 2}), el(lx2, {0, 9, 3}))) == "(0,9,3)");

  // positive cone: anything with positive top dominates any fixed kernel part
  CHECK(is_positive(el(LXZZ, {-1000, 1})));
  CHECK_FALSE(is_positive(el(LXZZ, {-1, 0})));
}

TEST_CASE("orthogonality is trivial meet of absolute values") {
  CHECK(is_orthogonal(el(Z2, {3, 0}), el(Z2, {0, -2})));
  CHECK_FALSE(is_orthogonal(el(Z2, {1, 1}), el(Z2, {0, 2})));
  CHECK(is_orthogonal(el(Z2, {0, 0}), el(Z2, {5, 5})));

  // In lex(Z,Z) kernel and section parts are NOT orthogonal: the absolute
  // values are comparable, so their meet is the smaller one.
  Elem kx = el(LXZZ, {5, 0});
  Elem sb = el(LXZZ, {0, 1});
  CHECK(to_string(meet(abs_val(kx), abs_val(sb))) == "(5,0)");
  CHECK_FALSE(is_orthogonal(kx, sb));
  // brute confirmation over a small box: only the identity section element
  // is orthogonal to every kernel element
  for (int b = -3; b <= 3; ++b) {
    bool all = true;
    for (int x = -3; x <= 3 && all; ++x)
      all = is_orthogonal(el(LXZZ, {x, 0}), el(LXZZ, {0, b}));
    CHECK(all == (b == 0));
  }
}

TEST_CASE("quotient instances drop killed coordinates") {
  auto q = Descriptor::quotient(Z3, {0});
  Elem img = project_to_quotient(q, el(Z3, {5, 3, -2}));
  CHECK(to_string(img) == "(3,-2)");
  CHECK(to_string(join(img, el(q, {4, -7}))) == "(4,-2)");
  CHECK(to_string(meet(img, el(q, {4, -7}))) == "(3,-7)");
  // projection is a lattice-group morphism (spot check)
  Elem u = el(Z3, {1, -2, 3}), v = el(Z3, {-4, 5, -6});
  CHECK(project_to_quotient(q, mul(u, v)) == mul(project_to_quotient(q, u), project_to_quotient(q, v)));
  CHECK(project_to_quotient(q, join(u, v)) == join(project_to_quotient(q, u), project_to_quotient(q, v)));
}

TEST_CASE("sample stream is the documented splitmix64 sequence") {
  SampleStream s(0);
  CHECK(s.next() == 0xe220a8397b1dcdafull);
  CHECK(s.next() == 0x6e789e6aa1b965f4ull);
  CHECK(s.next() == 0x06c45d188009454full);
  CHECK(s.next() == 0xf88bb8a8724c81ecull);

  SampleStream t(42);
  CHECK(t.next() == 0xbdd732262feb6e95ull);

  // coordinate mapping: value % (2*box+1) - box
  SampleStream c(0);
  std::vector<long long> expect = {-15, 5, -15, 9, -9, -1, -14, -11, 4, 13, -12, 15};
  for (long long e : expect) CHECK(c.coordinate(16) == Int(e));

  // identical seeds give identical element streams
  SamplerConfig cfg;
  auto s1 = derived_stream(cfg, "x");
  auto s2 = derived_stream(cfg, "x");
  for (int i = 0; i < 50; ++i) CHECK(sample_elem(Z3, s1, 16) == sample_elem(Z3, s2, 16));
}

TEST_CASE("order properties hold on samples") {
  SamplerConfig cfg{7, 16, 300};
  for (const auto& d : {Z, Z2, LXZZ, Descriptor::lex(Z2, Z)}) {
    auto s = derived_stream(cfg, "order:" + d->name());
    for (int i = 0; i < 300; ++i) {
      Elem x = sample_elem(d, s, cfg.box);
      Elem y = sample_elem(d, s, cfg.box);
      Elem z = sample_elem(d, s, cfg.box);
      CHECK(leq(x, x));
      if (leq(x, y) && leq(y, x)) CHECK(x == y);
      if (leq(x, y) && leq(y, z)) CHECK(leq(x, z));
      // order is translation invariant on both sides
      if (leq(x, y)) {
        CHECK(leq(mul(z, x), mul(z, y)));
        CHECK(leq(mul(x, z), mul(y, z)));
      }
      // the Mal'tsev term built from the group structure
      CHECK(maltsev(x, x, z) == z);
      CHECK(maltsev(x, z, z) == x);
    }
  }
}

TEST_CASE("law suite passes on the stock instances") {
  SamplerConfig cfg{0, 16, 400};
  for (const char* name : {"Z", "Z^2", "lex(Z,Z)", "quot(Z^3,{0})"}) {
    auto reports = law_suite(parse_descriptor(name), cfg);
    CHECK(reports.size() == 24);  // 23 laws + the commutative product identity
    for (const auto& r : reports) {
      INFO(r.instance, " ", r.law);
      CHECK(r.status == Status::pass);
      CHECK(r.samples == 400);
    }
  }
}

TEST_CASE("law suite output is byte-deterministic") {
  SamplerConfig cfg{123, 16, 200};
  auto a = reports_to_json(law_suite(Z2, cfg));
  auto b = reports_to_json(law_suite(Z2, cfg));
  CHECK(a == b);
  CHECK(a.find("\"status\":\"pass\"") != std::string::npos);
}

TEST_CASE("multiplication is never a lattice morphism on the square") {
  SamplerConfig cfg{0, 16, 1000};

  // frozen oracle: scanning {0,1}-coordinate quadruples (a,b,c,d) in
  // lexicographic order, the first failure in Z is a=0,b=1,c=1,d=0 where
  // (a v c)(b v d) = 2 but (ab) v (cd) = 1
  auto r = internal_group_refuter(Z, cfg);
  CHECK(r.status == Status::fail);
  REQUIRE(!r.violations.empty());
  const auto& w = r.violations.front();
  REQUIRE(w.inputs.size() == 4);
  CHECK(to_string(w.inputs[0]) == "0");
  CHECK(to_string(w.inputs[1]) == "1");
  CHECK(to_string(w.inputs[2]) == "1");
  CHECK(to_string(w.inputs[3]) == "0");
  CHECK(to_string(w.lhs) == "2");
  CHECK(to_string(*w.rhs) == "1");

  // the classic witness works too
  Elem a = el(Z, {1}), b = el(Z, {0}), c = el(Z, {0}), d = el(Z, {1});
  CHECK(mul(join(a, c), join(b, d)) != join(mul(a, b), mul(c, d)));

  CHECK(internal_group_refuter(Z2, cfg).status == Status::fail);
  CHECK(internal_group_refuter(LXZZ, cfg).status == Status::fail);

  // the one-element instance is the only group object; no witness exists
  auto zero = Descriptor::zpow(0);
  CHECK(internal_group_refuter(zero, cfg).status == Status::pass);
}

TEST_CASE("morphism checks: products plus positive parts") {
  SamplerConfig cfg{0, 16, 2000};

  Morphism dbl{Z, Z, [](const Elem& x) { return mul(x, x); }, "double"};
  CHECK(check_morphism(dbl, cfg).status == Status::pass);
  CHECK(check_join_preservation(dbl, cfg).status == Status::pass);

  Morphism neg{Z, Z, [](const Elem& x) { return inv(x); }, "negate"};
  auto r = check_morphism(neg, cfg);
  CHECK(r.status == Status::fail);
  bool pos_note = std::any_of(r.violations.begin(), r.violations.end(),
                              [](const Violation& v) { return v.note == "pos-part"; });
  bool prod_note = std::any_of(r.violations.begin(), r.violations.end(),
                               [](const Violation& v) { return v.note == "product"; });
  CHECK(pos_note);
  CHECK_FALSE(prod_note);
  // negation breaks positive parts already at x = 1 ...
  CHECK(inv(pos_part(el(Z, {1}))) != pos_part(inv(el(Z, {1}))));
  // ... and therefore cannot preserve joins either
  CHECK(check_join_preservation(neg, cfg).status == Status::fail);

  // scaling the top of lex(Z,Z) is a morphism
  Morphism gtwo{LXZZ, LXZZ,
                [](const Elem& x) {
                  return make_elem(x.desc, {x.coords[0], 2 * x.coords[1]});
                },
                "top-scale-2"};
  CHECK(check_morphism(gtwo, cfg).status == Status::pass);
  CHECK(check_join_preservation(gtwo, cfg).status == Status::pass);
}

TEST_CASE("reports serialize with decimal-string integers") {
  LawReport r;
  r.instance = "Z^2";
  r.law = "demo";
  r.samples = 3;
  r.record({{el(Z2, {1, -2})}, el(Z2, {70000000000000LL, 0}), el(Z2, {0, 0}), "n"});
  r.finalize();
  auto j = r.to_json();
  CHECK(j.find("\"samples\":\"3\"") != std::string::npos);
  CHECK(j.find("\"70000000000000\"") != std::string::npos);
  CHECK(j.find("\"status\":\"fail\"") != std::string::npos);
  CHECK(j.find("\"note\":\"n\"") != std::string::npos);

  // violations are capped but counted in full
  LawReport c;
  c.instance = "Z";
  c.law = "cap";
  c.samples = 100;
  for (int i = 0; i < 20; ++i) c.record({{el(Z, {i})}, el(Z, {i}), std::nullopt, ""});
  c.finalize();
  CHECK(c.violations.size() == LawReport::max_stored);
  CHECK(c.violation_total == 20);
  CHECK(c.to_json().find("\"violationsTotal\":\"20\"") != std::string::npos);
}
