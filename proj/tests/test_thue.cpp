#include <set>

#include "doctest.h"
#include "support/helpers.hpp"
#include "support/oracle.hpp"
#include "thue2dlite/error.hpp"
#include "thue2dlite/thue.hpp"

using namespace thue2dlite;
using helpers::instance;

namespace {
  ParseErrorKind parse_error_kind(std::string_view text) {
    try {
      parse_thue(text);
    } catch (ParseError const& e) {
      return e.kind();
    }
    FAIL("no ParseError");
    return ParseErrorKind::syntax;
  }
}  // namespace

TEST_CASE("parse_thue: basic instance") {
  auto inst = instance("alphabet: a b\nrule: ab = ba\ngoal: aab = aba");
  CHECK(inst.alphabet.names() == std::vector<std::string>{"a", "b"});
  REQUIRE(inst.rule_count() == 1);
  CHECK(inst.rules[0].left == Word{0, 1});
  CHECK(inst.rules[0].right == Word{1, 0});
  CHECK(inst.goal_left == Word{0, 0, 1});
  CHECK(inst.goal_right == Word{0, 1, 0});
}

TEST_CASE("parse_thue: empty rule set is legal") {
  auto inst = instance("alphabet: a\ngoal: a = aa");
  CHECK(inst.rule_count() == 0);
  CHECK(inst.letter_count() == 1);
  CHECK(inst.slot_count(Variant::neq) == 1);
  CHECK(inst.slot_count(Variant::neg) == 2);
}

TEST_CASE("parse_thue: unknown symbol reports position and symbol") {
  try {
    parse_thue("alphabet: a\nrule: ab = a\ngoal: a = a");
    FAIL("expected ParseError");
  } catch (ParseError const& e) {
    CHECK(e.kind() == ParseErrorKind::unknown_symbol);
    CHECK(e.pos().line == 2);
    CHECK(e.pos().column == 8);
    CHECK(e.detail().find("'b'") != std::string::npos);
  }
}

TEST_CASE("parse_thue: error kinds") {
  CHECK(parse_error_kind("alphabet: a\nrule: = a\ngoal: a = a") == ParseErrorKind::empty_rule_side);
  CHECK(parse_error_kind("alphabet: a\ngoal: a =") == ParseErrorKind::empty_goal_side);
  CHECK(parse_error_kind("alphabet: a\nrule: a = aa") == ParseErrorKind::missing_goal);
  CHECK(parse_error_kind("alphabet: a a\ngoal: a = a") == ParseErrorKind::duplicate_alphabet_symbol);
  CHECK(parse_error_kind("rule: a = a\ngoal: a = a") == ParseErrorKind::missing_alphabet);
  CHECK(parse_error_kind("alphabet: a\ngoal: a = a\ngoal: a = a") == ParseErrorKind::duplicate_goal);
  CHECK(parse_error_kind("alphabet: a A\ngoal: a = a") == ParseErrorKind::reserved_symbol);
  CHECK(parse_error_kind("alphabet: a\nfoo: a = a\ngoal: a = a") == ParseErrorKind::syntax);
  CHECK(parse_error_kind("alphabet: a\ngoal: a a = a") == ParseErrorKind::syntax);
}

TEST_CASE("parse_thue: comments and multi-character symbols") {
  auto inst = instance("# header\nalphabet: x1 y # two symbols\nrule: (x1)(y) = (y)(x1)\ngoal: (x1) = (y)\n");
  CHECK(inst.letter_count() == 2);
  CHECK(inst.alphabet.format(inst.rules[0].left) == "(x1)(y)");
  CHECK(instance(write_thue(inst)) == inst);
}

TEST_CASE("write_thue round-trips every fixture") {
  for (auto const& name : helpers::fixture_names()) {
    CAPTURE(name);
    auto inst = helpers::fixture(name);
    CHECK(parse_thue(write_thue(inst)) == inst);
  }
}

TEST_CASE("rewrite_neighbors: examples and order") {
  auto inst = instance("alphabet: a b\nrule: ab = ba\ngoal: a = b");
  auto w    = [&](char const* s) { return helpers::word(inst, s); };

  auto n = rewrite_neighbors(w("aab"), inst.rules);
  REQUIRE(n.size() == 1);
  CHECK(n[0].word == w("aba"));
  CHECK(n[0].step == RewriteStep{0, 1, Direction::left_to_right});

  n = rewrite_neighbors(w("ab"), inst.rules);
  REQUIRE(n.size() == 1);
  CHECK(n[0].word == w("ba"));

  CHECK(rewrite_neighbors(w("a"), inst.rules).empty());

  n = rewrite_neighbors(w("abab"), inst.rules);
  REQUIRE(n.size() == 3);
  CHECK(n[0].step == RewriteStep{0, 0, Direction::left_to_right});
  CHECK(n[1].step == RewriteStep{0, 1, Direction::right_to_left});
  CHECK(n[2].step == RewriteStep{0, 2, Direction::left_to_right});
}

TEST_CASE("rewrite_neighbors agrees with the factorization oracle") {
  auto inst = instance("alphabet: a b\nrule: ab = ba\nrule: aa = b\nrule: bab = a\ngoal: a = b");
  for (auto const& w : oracle::all_words(2, 6)) {
    std::set<Word> got;
    for (auto const& n : rewrite_neighbors(w, inst.rules)) {
      got.insert(n.word);
      CHECK(apply_step(w, inst.rules, n.step) == n.word);
    }
    CHECK(got == oracle::neighbours(w, inst.rules));
  }
}

TEST_CASE("apply_step rejects a non-matching step") {
  auto inst = instance("alphabet: a b\nrule: ab = ba\ngoal: a = b");
  CHECK_FALSE(apply_step(helpers::word(inst, "aa"), inst.rules, {0, 0, Direction::left_to_right}));
  CHECK_FALSE(apply_step(helpers::word(inst, "ab"), inst.rules, {0, 5, Direction::left_to_right}));
  CHECK_FALSE(apply_step(helpers::word(inst, "ab"), inst.rules, {3, 0, Direction::left_to_right}));
}

TEST_CASE("decide_equiv_bounded: examples") {
  auto idem = instance("alphabet: a\nrule: aa = a\ngoal: a = aa");
  auto v    = decide_equiv_bounded(idem.goal_left, idem.goal_right, idem.rules, default_bounds(idem));
  REQUIRE(std::holds_alternative<Equivalent>(v));
  auto const& p = std::get<Equivalent>(v).path;
  CHECK(p.words == std::vector<Word>{{0}, {0, 0}});
  CHECK(validate_path(p, idem.goal_left, idem.goal_right, idem.rules));

  auto ab   = instance("alphabet: a b\nrule: ab = ba\ngoal: ab = ab");
  auto refl = decide_equiv_bounded(ab.goal_left, ab.goal_right, ab.rules, {2, 10});
  REQUIRE(std::holds_alternative<Equivalent>(refl));
  CHECK(std::get<Equivalent>(refl).path.words.size() == 1);
  CHECK(std::get<Equivalent>(refl).path.steps.empty());

  auto free = instance("alphabet: a b\ngoal: a = b");
  auto u    = decide_equiv_bounded(free.goal_left, free.goal_right, free.rules, default_bounds(free));
  REQUIRE(std::holds_alternative<Unknown>(u));
  CHECK(std::get<Unknown>(u).report.reason == Exhausted::class_closed);

  CHECK_THROWS_AS(decide_equiv_bounded({0, 0, 0}, {0}, idem.rules, {2, 10}), std::invalid_argument);
}

TEST_CASE("decide_equiv_bounded: bound reasons") {
  auto power = helpers::fixture("unres_power");
  auto u = decide_equiv_bounded(power.goal_left, power.goal_right, power.rules, default_bounds(power));
  REQUIRE(std::holds_alternative<Unknown>(u));
  CHECK(std::get<Unknown>(u).report.reason == Exhausted::word_length);

  auto idem = instance("alphabet: a b\nrule: ab = ba\ngoal: aaaabbbb = bbbbaaab");
  auto e    = decide_equiv_bounded(idem.goal_left, idem.goal_right, idem.rules, {8, 3});
  REQUIRE(std::holds_alternative<Unknown>(e));
  CHECK(std::get<Unknown>(e).report.reason == Exhausted::expansions);
  CHECK(std::get<Unknown>(e).report.expansions == 3);
}

TEST_CASE("decide_equiv_bounded agrees with the bounded-class oracle") {
  auto inst = instance("alphabet: a b\nrule: ab = ba\nrule: aaa = a\ngoal: a = b");
  auto words = oracle::all_words(2, 4);
  for (std::size_t i = 0; i < words.size(); i += 3) {
    auto cls = oracle::bounded_class(words[i], inst.rules, 5);
    for (std::size_t j = 0; j < words.size(); j += 5) {
      auto v = decide_equiv_bounded(words[i], words[j], inst.rules, {5, 1'000'000});
      CHECK(std::holds_alternative<Equivalent>(v) == cls.contains(words[j]));
      if (auto* e = std::get_if<Equivalent>(&v)) {
        CHECK(validate_path(e->path, words[i], words[j], inst.rules));
      }
    }
  }
}

TEST_CASE("validate_path rejects broken paths") {
  auto inst = instance("alphabet: a\nrule: aa = a\ngoal: a = aa");
  RewritePath good{{{0}, {0, 0}}, {{0, 0, Direction::right_to_left}}};
  CHECK(validate_path(good, {0}, {0, 0}, inst.rules));
  auto wrong_end = good;
  CHECK_FALSE(validate_path(wrong_end, {0}, {0, 0, 0}, inst.rules));
  auto wrong_step = good;
  wrong_step.steps[0].direction = Direction::left_to_right;
  CHECK_FALSE(validate_path(wrong_step, {0}, {0, 0}, inst.rules));
}

TEST_CASE("eval_in_semigroup: examples") {
  SemigroupWitness right_zero{2, {0, 1, 0, 1}, {0, 1}};
  CHECK(eval_in_semigroup({0}, right_zero) == 0);
  CHECK(eval_in_semigroup({0, 1}, right_zero) == 1);
  CHECK(eval_in_semigroup({1, 1, 0}, right_zero) == 0);
  CHECK_THROWS_AS(eval_in_semigroup({}, right_zero), std::invalid_argument);

  SemigroupWitness idem{1, {0}, {0}};
  CHECK(eval_in_semigroup({0, 0}, idem) == eval_in_semigroup({0}, idem));
}

TEST_CASE("for_each_semigroup matches the table oracle") {
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<std::vector<Element>> got;
    for_each_semigroup(n, [&](SemigroupWitness const& s) {
      CHECK(is_associative(s));
      got.push_back(s.table);
      return true;
    });
    CHECK(got == oracle::associative_tables(n));
  }
}

TEST_CASE("find_separating_semigroup: examples") {
  auto free = instance("alphabet: a b\ngoal: a = b");
  auto w    = find_separating_semigroup(free, 2);
  REQUIRE(w);
  CHECK(w->order == 2);
  CHECK(check_witness(free, *w).empty());
  CHECK(eval_in_semigroup({0}, *w) != eval_in_semigroup({1}, *w));

  auto idem = instance("alphabet: a\nrule: aa = a\ngoal: a = aa");
  CHECK_FALSE(find_separating_semigroup(idem, 3));
  CHECK_FALSE(oracle::separable(idem, 3));
  CHECK_FALSE(find_separating_semigroup(free, 0));
}

TEST_CASE("find_separating_semigroup agrees with the oracle on fixtures") {
  for (auto const& name : helpers::fixture_names()) {
    CAPTURE(name);
    auto inst = helpers::fixture(name);
    auto w    = find_separating_semigroup(inst, 3);
    CHECK(w.has_value() == oracle::separable(inst, 3));
    if (w) CHECK(check_witness(inst, *w).empty());
  }
}

TEST_CASE("check_witness names broken invariants") {
  auto free = instance("alphabet: a b\ngoal: a = b");
  CHECK_FALSE(check_witness(free, {0, {}, {}}).empty());
  CHECK_FALSE(check_witness(free, {2, {0, 1, 0}, {0, 1}}).empty());
  CHECK_FALSE(check_witness(free, {2, {0, 1, 0, 1}, {0, 0}}).empty());
  CHECK_FALSE(check_witness(free, {2, {1, 0, 0, 0}, {0, 1}}).empty());
  CHECK(check_witness(free, {2, {0, 1, 0, 1}, {0, 1}}).empty());
}

TEST_CASE("certify_quotient: idempotent letter") {
  auto inst = instance("alphabet: a\nrule: aa = a\ngoal: a = aa");
  auto q    = certify_quotient(inst, 3);
  REQUIRE(q.size() == 2);
  CHECK(q.representatives[0].empty());
  CHECK(q.representatives[1] == Word{0});
  CHECK(q.successor[0][0] == 1);
  CHECK(q.successor[1][0] == 1);
  CHECK(q.class_of({0, 0, 0, 0}) == 1);
  CHECK(q.class_of({}) == 0);
}

TEST_CASE("certify_quotient: free semigroup is not closed") {
  auto free = instance("alphabet: a b\ngoal: a = b");
  for (std::size_t k : {1, 2, 4, 6}) {
    CHECK_THROWS_AS(certify_quotient(free, k), NotClosedAtBound);
  }
}

TEST_CASE("certify_quotient classes agree with bounded rewriting") {
  for (auto const& name : {"pos_cubic", "pos_commutative", "neg_cubic"}) {
    CAPTURE(name);
    auto inst = helpers::fixture(name);
    auto q    = certify_quotient(inst, 8);
    auto words = oracle::all_words(inst.letter_count(), 4);
    for (std::size_t i = 0; i < words.size(); ++i) {
      auto cls = oracle::bounded_class(words[i], inst.rules, 8);
      for (std::size_t j = i; j < words.size(); ++j) {
        CHECK((q.class_of(words[i]) == q.class_of(words[j])) == cls.contains(words[j]));
      }
    }
  }
}

TEST_CASE("Alphabet formatting") {
  Alphabet single({"b", "a"});
  CHECK(single.names() == std::vector<std::string>{"a", "b"});
  CHECK(single.format({0, 1, 1}) == "abb");
  CHECK(single.parse_word("abb") == Word{0, 1, 1});
  CHECK_THROWS_AS(single.parse_word("abc"), UnknownSymbol);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
  CHECK(parse_variant("neq") == Variant::neq);
  CHECK(parse_variant("neg") == Variant::neg);
  CHECK_FALSE(parse_variant("negg"));
}
