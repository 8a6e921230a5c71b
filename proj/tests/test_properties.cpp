// Invariants checked over exhaustive small domains and seeded random
// instances.

#include <random>

#include "doctest.h"
#include "support/corpus.hpp"
#include "support/helpers.hpp"
#include "support/oracle.hpp"
#include "thue2dlite/error.hpp"
#include "thue2dlite/evaluate.hpp"
#include "thue2dlite/harness.hpp"
#include "thue2dlite/ontology.hpp"

using namespace thue2dlite;

namespace {
  Word random_word(std::mt19937& rng, std::size_t letters, std::size_t min_len, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::uniform_int_distribution<Letter>      sym(0, static_cast<Letter>(letters - 1));
    Word w(len(rng));
    for (auto& x : w) x = sym(rng);
    return w;
  }

  ThueInstance random_instance(std::mt19937& rng) {
    std::uniform_int_distribution<std::size_t> m(1, 2), k(0, 2);
    auto letters = m(rng);
    ThueInstance inst;
    inst.alphabet = letters == 1 ? Alphabet({"a"}) : Alphabet({"a", "b"});
    auto rules    = k(rng);
    for (std::size_t i = 0; i < rules; ++i) {
      inst.rules.push_back({random_word(rng, letters, 1, 3), random_word(rng, letters, 1, 3)});
    }
    inst.goal_left  = random_word(rng, letters, 1, 3);
    inst.goal_right = random_word(rng, letters, 1, 3);
    return inst;
  }

  std::vector<ThueInstance> random_instances(std::size_t count) {
    std::mt19937              rng(20240611);
    std::vector<ThueInstance> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_instance(rng));
    return out;
  }

  bool rule_sides_at_least_two(ThueInstance const& inst) {
    for (auto const& r : inst.rules)
      if (r.left.size() < 2 || r.right.size() < 2) return false;
    return true;
  }
}  // namespace

TEST_CASE("one-step symmetry over all words up to length 6") {
  std::vector<std::vector<RewritePair>> systems{
      {{{0, 1}, {1, 0}}},
      {{{0, 0}, {1}}, {{1, 0, 1}, {0}}},
      {{{0}, {1, 1}}},
  };
  auto words = oracle::all_words(2, 6);
  for (auto const& rules : systems) {
    std::map<Word, std::set<Word>> nb;
    for (auto const& w : words) {
      for (auto const& n : rewrite_neighbors(w, rules)) nb[w].insert(n.word);
    }
    for (auto const& [u, vs] : nb) {
      for (auto const& v : vs) {
        if (v.size() > 6) continue;
        CHECK(nb[v].contains(u));
      }
    }
  }
}

TEST_CASE("rewrite paths re-validate step by step") {
  auto check_path = [](RewritePath const& p, std::vector<RewritePair> const& rules) {
    for (std::size_t i = 0; i + 1 < p.words.size(); ++i) {
      bool found = false;
      for (auto const& n : rewrite_neighbors(p.words[i], rules)) found |= n.word == p.words[i + 1];
      CHECK(found);
      CHECK(oracle::neighbours(p.words[i], rules).contains(p.words[i + 1]));
    }
  };
  for (auto const& name : helpers::fixture_names()) {
    auto inst = helpers::fixture(name);
    auto v    = decide_equiv_bounded(inst.goal_left, inst.goal_right, inst.rules, default_bounds(inst));
    if (auto* e = std::get_if<Equivalent>(&v)) {
      CHECK(e->path.words.front() == inst.goal_left);
      CHECK(e->path.words.back() == inst.goal_right);
      check_path(e->path, inst.rules);
    }
  }
  for (auto const& inst : random_instances(60)) {
    auto v = decide_equiv_bounded(inst.goal_left, inst.goal_right, inst.rules, default_bounds(inst));
    if (auto* e = std::get_if<Equivalent>(&v)) {
      CHECK(validate_path(e->path, inst.goal_left, inst.goal_right, inst.rules));
      check_path(e->path, inst.rules);
    }
  }
}

TEST_CASE("witness soundness: a separating semigroup excludes a rewriting path") {
  std::size_t witnesses = 0;
  auto all = random_instances(60);
  for (auto const& name : helpers::fixture_names()) all.push_back(helpers::fixture(name));
  for (auto const& inst : all) {
    auto w = find_separating_semigroup(inst, 3);
    CHECK(w.has_value() == oracle::separable(inst, 3));
    if (!w) continue;
    ++witnesses;
    CHECK(is_associative(*w));
    CHECK(check_witness(inst, *w).empty());
    for (auto const& r : inst.rules) CHECK(eval_in_semigroup(r.left, *w) == eval_in_semigroup(r.right, *w));
    CHECK(eval_in_semigroup(inst.goal_left, *w) != eval_in_semigroup(inst.goal_right, *w));
    auto generous = default_bounds(inst);
    generous.max_word_len += 4;
    CHECK_FALSE(std::holds_alternative<Equivalent>(
        decide_equiv_bounded(inst.goal_left, inst.goal_right, inst.rules, generous)));
  }
  CHECK(witnesses > 10);
}

TEST_CASE("determinism: identical inputs give identical outputs") {
  for (auto const& name : helpers::fixture_names()) {
    auto inst = helpers::fixture(name);
    CHECK(write_cq(build_phi(inst)) == write_cq(build_phi(inst)));
    CHECK(write_onto(build_O_neg(inst)) == write_onto(build_O_neg(inst)));
    CHECK(find_separating_semigroup(inst, 3) == find_separating_semigroup(inst, 3));
    auto a = decide_equiv_bounded(inst.goal_left, inst.goal_right, inst.rules, default_bounds(inst));
    auto b = decide_equiv_bounded(inst.goal_left, inst.goal_right, inst.rules, default_bounds(inst));
    CHECK(a.index() == b.index());
    if (a.index() == 0) CHECK(std::get<0>(a).path.words == std::get<0>(b).path.words);
    auto d = corpus::canonical(inst);
    if (d) {
      auto m = with_slots(*d, inst, Variant::neq);
      CHECK(evaluate(m, build_psi(inst)) == evaluate(m, build_psi(inst)));
    }
  }
}

TEST_CASE("canonical structures are candidate, perfect and reject Gamma") {
  auto all = random_instances(80);
  for (auto const& name : helpers::fixture_names()) all.push_back(helpers::fixture(name));
  std::size_t built = 0;
  for (auto const& inst : all) {
    auto d = corpus::canonical(inst);
    if (!d) continue;
    ++built;
    CHECK(is_candidate(*d).ok());
    CHECK(oracle::candidate(*d));
    CHECK(is_perfect(*d, inst.rules).perfect());
    CHECK(oracle::perfect(*d, inst.rules));
    CHECK_FALSE(evaluate_union(*d, build_Gamma_neq(inst)));
    CHECK_FALSE(evaluate_union(*d, build_Gamma_neg(inst)));
    CHECK_FALSE(oracle::satisfiable(*d, build_Gamma_neq(inst)));
    CHECK_FALSE(oracle::satisfiable(*d, build_Gamma_neg(inst)));
    // The diamond holds on D exactly when the goal endpoints from a agree.
    auto a  = *d->constant("a");
    auto eq = walk(*d, a, inst.goal_left) == walk(*d, a, inst.goal_right);
    CHECK(evaluate(*d, build_gamma_diamond(inst), {{{0, a}}}).has_value() == eq);
  }
  CHECK(built > 20);
}

TEST_CASE("imperfect candidate structures satisfy Gamma (exhaustive, one letter)") {
  std::vector<std::vector<RewritePair>> systems{
      {{{0, 0}, {0}}},
      {{{0, 0, 0}, {0, 0}}},
      {{{0}, {0, 0}}, {{0, 0, 0}, {0}}},
  };
  Signature sig{Alphabet({"a"})};
  for (auto const& rules : systems) {
    ThueInstance inst{sig.letters, rules, {0}, {0}};
    auto gneq = build_Gamma_neq(inst);
    auto gneg = build_Gamma_neg(inst);
    std::size_t imperfect = 0;
    enumerate_candidate_structures(sig, 3, [&](Structure const& d) {
      if (is_perfect(d, inst.rules).perfect()) return;
      ++imperfect;
      CHECK(evaluate_union(d, gneq).has_value());
      CHECK(evaluate_union(d, gneg).has_value());
    });
    CHECK(imperfect > 0);
  }
}

TEST_CASE("ontology models are exactly the candidate structures") {
  for (auto letters : {std::vector<std::string>{"a"}, std::vector<std::string>{"a", "b"}}) {
    Signature    sig{Alphabet(letters)};
    ThueInstance inst{sig.letters, {}, {0}, {0}};
    auto         o = build_core_ontology(inst);
    for_each_structure(sig, letters.size() == 1 ? 2 : 1, [&](Structure const& d) {
      CHECK(check_model(d, o, {}).ok() == is_candidate(d).ok());
    });
  }
}

TEST_CASE("slot observations hold for random instances with long rule sides") {
  for (auto const& inst : random_instances(80)) {
    auto s = slot(1, signature_of(inst));
    auto b = *s.constant("b1");
    auto diamond = build_gamma_diamond(inst);
    auto r = evaluate(s, diamond);
    REQUIRE(r);
    CHECK(r->image[*diamond.components()[0].distinguished] == b);
    for (auto const& l : inst.alphabet.names()) {
      CHECK(evaluate(s, build_gamma_R(inst, l)));
      CHECK(evaluate(s, build_beta_R(inst, l)));
      CHECK(evaluate(s, build_beta_Rbar(inst, l)));
    }
    for (std::size_t k = 1; k <= inst.rule_count(); ++k) {
      CHECK(evaluate(s, build_gamma_k(inst, k)));
      if (rule_sides_at_least_two(inst)) {
        CHECK(evaluate(s, build_beta_lk(inst, k)));
        CHECK(evaluate(s, build_beta_rk(inst, k)));
      }
    }
  }
}

TEST_CASE("slots embed in every disjoint union containing them") {
  for (auto const& name : helpers::fixture_names()) {
    auto inst = helpers::fixture(name);
    auto d    = corpus::canonical(inst);
    if (!d) continue;
    auto m   = with_slots(*d, inst, Variant::neg);
    auto sig = signature_of(inst);
    for (std::size_t n = 1; n <= inst.slot_count(Variant::neg); ++n) {
      auto sl  = slot(n, sig);
      auto off = *m.constant(slot_b(n));
      CHECK(*m.constant(slot_c(n)) == off + 1);
      for (RoleId r = 0; r < sig.role_count(); ++r)
        for (auto [x, y] : sl.edges(r)) CHECK(m.has_edge(r, x + off, y + off));
    }
  }
}

TEST_CASE("text formats round-trip on random instances") {
  for (auto const& inst : random_instances(40)) {
    CHECK(parse_thue(write_thue(inst)) == inst);
    CHECK(parse_cq(write_cq(build_psi(inst))) == build_psi(inst));
    CHECK(parse_cq(write_cq(build_phi(inst))) == build_phi(inst));
    CHECK(parse_onto(write_onto(build_O_neg(inst))) == build_O_neg(inst));
    if (auto d = corpus::canonical(inst)) {
      auto m = with_slots(*d, inst, Variant::neq);
      CHECK(parse_struct(write_struct(m)) == m);
    }
  }
}
