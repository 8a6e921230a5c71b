#include <algorithm>
#include <set>

#include "doctest.h"
#include "support/helpers.hpp"
#include "thue2dlite/error.hpp"
#include "thue2dlite/query.hpp"

using namespace thue2dlite;
using helpers::instance;

namespace {
  std::size_t count_kind(ConjunctiveQuery const& q, LiteralKind k) {
    return static_cast<std::size_t>(std::count_if(
        q.literals().begin(), q.literals().end(), [&](Literal const& l) { return l.kind == k; }));
  }

  // Literals rendered with variable names, in order.
  std::vector<std::string> render(ConjunctiveQuery const& q) {
    std::vector<std::string> out;
    for (auto const& l : q.literals()) {
      auto x = q.variable_name(l.x);
      auto y = q.variable_name(l.y);
      switch (l.kind) {
        case LiteralKind::unary: out.push_back(l.symbol + "(" + x + ")"); break;
        case LiteralKind::binary: out.push_back(l.symbol + "(" + x + "," + y + ")"); break;
        case LiteralKind::inequality: out.push_back(x + "!=" + y); break;
        case LiteralKind::negated: out.push_back("!" + l.symbol + "(" + x + "," + y + ")"); break;
      }
    }
    return out;
  }

  std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  }

  std::vector<std::string> labels(ConjunctiveQuery const& q) {
    std::vector<std::string> out;
    for (auto const& c : q.components()) out.push_back(component_label(c.id));
    return out;
  }
}  // namespace

TEST_CASE("build_gamma_k: commutation rule") {
  auto inst = instance("alphabet: a b\nrule: ab = ba\ngoal: a = b");
  auto q    = build_gamma_k(inst, 1);
  REQUIRE(q.components().size() == 1);
  CHECK(q.components()[0].distinguished == q.find_variable("x.k1"));
  CHECK(sorted(render(q)) == sorted({"a(x.k1,u1.k1)", "b(u1.k1,y.k1)", "b(x.k1,u2.k1)",
                                     "a(u2.k1,yp.k1)", "y.k1!=yp.k1"}));
  CHECK(is_safe(q));
  CHECK_THROWS_AS(build_gamma_k(inst, 0), IndexOutOfRange);
  CHECK_THROWS_AS(build_gamma_k(inst, 2), IndexOutOfRange);
}

TEST_CASE("build_gamma_k: length bookkeeping") {
  auto inst = instance("alphabet: a b\nrule: a = b\nrule: aab = b\ngoal: a = b");
  auto q1   = build_gamma_k(inst, 1);
  CHECK(count_kind(q1, LiteralKind::binary) == 2);
  CHECK(count_kind(q1, LiteralKind::inequality) == 1);
  auto q2 = build_gamma_k(inst, 2);
  CHECK(count_kind(q2, LiteralKind::binary) == 4);
  CHECK(count_kind(q2, LiteralKind::inequality) == 1);
}

TEST_CASE("build_gamma_R and build_gamma_diamond") {
  auto inst = instance("alphabet: a b\ngoal: a = aa");
  auto g    = build_gamma_R(inst, "a");
  CHECK(render(g) == std::vector<std::string>{"a(x.R_a,y.R_a)", "A(y.R_a)"});
  CHECK(component_label(g.components()[0].id) == "a");
  CHECK_THROWS_AS(build_gamma_R(inst, "c"), UnknownSymbol);

  auto d = build_gamma_diamond(inst);
  CHECK(sorted(render(d)) == sorted({"A(x.diamond)", "a(x.diamond,y.diamond)",
                                     "a(x.diamond,u1.diamond)", "a(u1.diamond,y.diamond)"}));
  CHECK(build_beta_diamond(inst) == d);
  CHECK(component_label(d.components()[0].id) == "◇");
}

TEST_CASE("build_beta_rk / build_beta_lk") {
  auto inst = instance("alphabet: a b\nrule: ab = ba\ngoal: a = b");
  auto r    = build_beta_rk(inst, 1);
  CHECK(sorted(render(r)) == sorted({"a(x.r1,u1.r1)", "b(u1.r1,y.r1)", "b(x.r1,yp.r1)",
                                     "!a(yp.r1,y.r1)"}));
  auto l = build_beta_lk(inst, 1);
  CHECK(sorted(render(l)) == sorted({"a(x.l1,y.l1)", "b(x.l1,u1.l1)", "a(u1.l1,yp.l1)",
                                     "!b(y.l1,yp.l1)"}));
  CHECK(is_safe(r));
  CHECK(is_safe(l));
  CHECK(component_label(r.components()[0].id) == "[r,1]");
  CHECK(component_label(l.components()[0].id) == "[l,1]");
  CHECK_THROWS_AS(build_beta_rk(inst, 3), IndexOutOfRange);

  // Length-1 sides: the empty prefix makes the distinguished variable the
  // path endpoint.
  auto one = instance("alphabet: a b\nrule: a = b\ngoal: a = b");
  auto l1  = build_beta_lk(one, 1);
  CHECK(sorted(render(l1)) == sorted({"b(x.l1,yp.l1)", "!a(x.l1,yp.l1)"}));
  auto r1 = build_beta_rk(one, 1);
  CHECK(sorted(render(r1)) == sorted({"a(x.r1,y.r1)", "!b(x.r1,y.r1)"}));
}

TEST_CASE("build_beta_R / build_beta_Rbar") {
  auto inst = instance("alphabet: a\ngoal: a = a");
  CHECK(render(build_beta_R(inst, "a")) ==
        std::vector<std::string>{"T(x.R_a,y.R_a)", "a(y.R_a,z.R_a)", "!T(x.R_a,z.R_a)"});
  CHECK(render(build_beta_Rbar(inst, "a")) ==
        std::vector<std::string>{"T(x.Rbar_a,y.Rbar_a)", "a(z.Rbar_a,y.Rbar_a)",
                                 "!T(x.Rbar_a,z.Rbar_a)"});
  CHECK(component_label(component_beta_Rbar("a")) == "bar(a)");
  CHECK_THROWS_AS(build_beta_R(inst, "b"), UnknownSymbol);
  CHECK_THROWS_AS(build_beta_Rbar(inst, "b"), UnknownSymbol);
}

TEST_CASE("union families: sizes and order") {
  auto one  = instance("alphabet: a\nrule: aa = a\ngoal: a = aa");
  CHECK(build_Gamma_neq(one).disjuncts.size() == 1);
  CHECK(build_Gamma_neg(one).disjuncts.size() == 2);
  auto zero = instance("alphabet: a\ngoal: a = aa");
  CHECK(build_Gamma_neq(zero).disjuncts.empty());
  CHECK(build_Gamma_neg(zero).disjuncts.empty());

  auto three = helpers::fixture("pos_commutative");
  auto psi   = build_Psi(three);
  auto phi   = build_Phi(three);
  CHECK(psi.disjuncts.size() == 4);
  CHECK(phi.disjuncts.size() == 7);
  CHECK(psi.disjuncts.back() == build_gamma_diamond(three));
  CHECK(phi.disjuncts.back() == build_beta_diamond(three));
  CHECK(phi.disjuncts[0] == build_beta_lk(three, 1));
  CHECK(phi.disjuncts[1] == build_beta_rk(three, 1));
}

TEST_CASE("build_psi: component and inequality counts") {
  auto inst = instance("alphabet: a b\nrule: ab = ba\ngoal: a = b");
  auto q    = build_psi(inst);
  CHECK(q.components().size() == 4);
  CHECK(labels(q) == std::vector<std::string>{"a", "b", "◇", "1"});
  CHECK(q.literals_of(kLinks).size() == 6);
  for (auto i : q.literals_of(kLinks)) CHECK(q.literals()[i].kind == LiteralKind::inequality);
  CHECK(is_safe(q));

  auto small = instance("alphabet: a\ngoal: a = aa");
  auto s     = build_psi(small);
  CHECK(labels(s) == std::vector<std::string>{"a", "◇"});
  CHECK(s.literals_of(kLinks).size() == 1);
}

TEST_CASE("build_phi: components and negated links") {
  auto inst = instance("alphabet: a\nrule: aa = a\ngoal: a = aa");
  auto q    = build_phi(inst);
  CHECK(q.components().size() == 5);
  CHECK(labels(q) == std::vector<std::string>{"a", "bar(a)", "◇", "[l,1]", "[r,1]"});
  CHECK(q.literals_of(kLinks).size() == 20);
  for (auto i : q.literals_of(kLinks)) {
    CHECK(q.literals()[i].kind == LiteralKind::negated);
    CHECK(q.literals()[i].symbol == "a");
  }
  CHECK(is_safe(q));
  auto t = build_phi(inst, {.negate_T = true});
  CHECK(t.literals_of(kLinks).size() == 40);

  auto zero = instance("alphabet: a\ngoal: a = aa");
  CHECK(build_phi(zero).components().size() == 3);

  auto two = instance("alphabet: a b\nrule: ab = ba\ngoal: a = b");
  CHECK(build_phi(two).components().size() == 7);
}

TEST_CASE("component distinguished variables are renamed apart") {
  auto q = build_psi(helpers::fixture("pos_commutative"));
  std::set<VarId> xs;
  for (auto const& c : q.components()) {
    REQUIRE(c.distinguished);
    xs.insert(*c.distinguished);
  }
  CHECK(xs.size() == q.components().size());
  std::set<std::string> names(q.variables().begin(), q.variables().end());
  CHECK(names.size() == q.variables().size());
}

TEST_CASE("is_safe") {
  for (auto const& name : helpers::fixture_names()) {
    auto inst = helpers::fixture(name);
    CHECK(is_safe(build_psi(inst)));
    CHECK(is_safe(build_phi(inst)));
    for (auto const& q : build_Phi(inst).disjuncts) CHECK(is_safe(q));
    for (auto const& q : build_Psi(inst).disjuncts) CHECK(is_safe(q));
  }
  ConjunctiveQuery bad;
  auto c = bad.add_component("c");
  auto x = bad.add_variable("x");
  auto y = bad.add_variable("y");
  bad.add_negated("a", x, y, c);
  CHECK_FALSE(is_safe(bad));
  bad.add_binary("a", y, x, c);
  CHECK(is_safe(bad));
  ConjunctiveQuery ne;
  auto u = ne.add_variable("u");
  auto v = ne.add_variable("v");
  ne.add_inequality(u, v);
  CHECK_FALSE(is_safe(ne));
}

TEST_CASE("extract_component recovers the family query") {
  auto inst = helpers::fixture("pos_commutative");
  auto q    = build_psi(inst);
  CHECK(extract_component(q, 0) == build_gamma_R(inst, "a"));
  CHECK(extract_component(q, 2) == build_gamma_diamond(inst));
  CHECK(extract_component(q, 3) == build_gamma_k(inst, 1));
  auto p = build_phi(inst);
  CHECK(extract_component(p, 5) == build_beta_lk(inst, 1));
  CHECK(extract_component(p, 6) == build_beta_rk(inst, 1));
}

TEST_CASE(".cq: round trip for every built query") {
  for (auto const& name : helpers::fixture_names()) {
    CAPTURE(name);
    auto inst = helpers::fixture(name);
    for (auto const& q : {build_psi(inst), build_phi(inst), build_phi(inst, {true})}) {
      auto text = write_cq(q);
      auto back = parse_cq(text);
      CHECK(back == q);
      CHECK(write_cq(back) == text);
    }
    for (auto const& u : {build_Psi(inst), build_Phi(inst), build_Gamma_neq(inst)}) {
      CHECK(parse_ucq(write_ucq(u)) == u);
    }
  }
}

TEST_CASE(".cq: hand-written input") {
  auto q = parse_cq(
      "# comment\n"
      "component c1 distinguished x\n"
      "A(x)\n"
      "r(x, y)\n"
      "component c2 distinguished z\n"
      "T(z,z)\n"
      "links\n"
      "x != z\n"
      "!r(z,x)\n");
  CHECK(q.components().size() == 2);
  CHECK(q.literals().size() == 5);
  CHECK(q.literals_of(kLinks).size() == 2);
  CHECK(q.components()[1].distinguished == q.find_variable("z"));

  auto headless = parse_cq("a(x,y)\nx != y\n");
  REQUIRE(headless.components().size() == 1);
  CHECK(headless.components()[0].id == "main");
  CHECK_FALSE(headless.components()[0].distinguished);

  CHECK(parse_ucq("").disjuncts.empty());
  CHECK(parse_ucq("a(x,y)\n").disjuncts.size() == 1);
  CHECK(parse_ucq("--- disjunct\na(x,y)\n--- disjunct\nb(x,y)\n").disjuncts.size() == 2);

  CHECK_THROWS_AS(parse_cq("a(x\n"), ParseError);
  CHECK_THROWS_AS(parse_cq("x !! y\n"), ParseError);
  CHECK_THROWS_AS(parse_cq("component c distinguished q\na(x,y)\n"), ParseError);
  CHECK_THROWS_AS(parse_cq("component c\ncomponent c\n"), ParseError);
}
