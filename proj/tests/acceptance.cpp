// Acceptance suite: one PASS/FAIL line per criterion with its time bound.
// Exit status is non-zero only for failures outside the known
// single-letter-rule-side limitation of beta_[r,k] (see README).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "support/corpus.hpp"
#include "support/helpers.hpp"
#include "support/oracle.hpp"
#include "thue2dlite/error.hpp"
#include "thue2dlite/evaluate.hpp"
#include "thue2dlite/harness.hpp"
#include "thue2dlite/ontology.hpp"

using namespace thue2dlite;

namespace {

  struct Outcome {
    std::vector<std::string> failures;
    std::vector<std::string> known;  // failures caused by a length-1 rule side
    std::size_t              checked = 0;

    void expect(bool ok, std::string const& what, bool is_known = false) {
      ++checked;
      if (ok) return;
      (is_known ? known : failures).push_back(what);
    }
  };

  bool has_short_side(ThueInstance const& inst) {
    for (auto const& r : inst.rules)
      if (r.left.size() < 2 || r.right.size() < 2) return true;
    return false;
  }

  bool short_side(ThueInstance const& inst, std::size_t k) {
    auto const& r = inst.rules[k - 1];
    return r.left.size() < 2 || r.right.size() < 2;
  }

  std::vector<std::pair<std::string, ThueInstance>> all_fixtures() {
    std::vector<std::pair<std::string, ThueInstance>> out;
    for (auto const& n : helpers::fixture_names()) out.emplace_back(n, helpers::fixture(n));
    return out;
  }

  std::size_t corpus_vertices(std::size_t letters) {
    return letters == 1 ? 3 : letters == 2 ? 2 : 1;
  }

  bool has_inequality(ConjunctiveQuery const& q) {
    for (auto const& l : q.literals())
      if (l.kind == LiteralKind::inequality) return true;
    return false;
  }

  // 1
  void ontology_iff_candidate(Outcome& o) {
    for (auto letters : {std::vector<std::string>{"a"}, std::vector<std::string>{"a", "b"}}) {
      Signature    sig{Alphabet(letters)};
      ThueInstance inst{sig.letters, {}, {0}, {0}};
      auto         onto = build_core_ontology(inst);
      for (std::size_t n = 1; n <= corpus_vertices(letters.size()); ++n) {
        for_each_structure(sig, n, [&](Structure const& d) {
          bool model = check_model(d, onto, {}).ok();
          o.expect(model == is_candidate(d).ok(), "m=" + std::to_string(letters.size()) + " n=" +
                                                      std::to_string(n) + " structure disagrees");
        });
      }
    }
  }

  // 2
  void imperfect_implies_gamma(Outcome& o) {
    for (auto const& [name, inst] : all_fixtures()) {
      auto        sig  = signature_of(inst);
      auto        gneq = build_Gamma_neq(inst);
      auto        gneg = build_Gamma_neg(inst);
      std::size_t imperfect = 0;
      enumerate_candidate_structures(sig, corpus_vertices(sig.letter_count()), [&](Structure const& d) {
        if (is_perfect(d, inst.rules).perfect()) return;
        ++imperfect;
        o.expect(evaluate_union(d, gneq).has_value(), name + ": imperfect structure refutes Gamma_neq");
        o.expect(evaluate_union(d, gneg).has_value(), name + ": imperfect structure refutes Gamma_neg");
      });
      // One-vertex candidates are always perfect.
      if (!inst.rules.empty() && corpus_vertices(sig.letter_count()) > 1)
        o.expect(imperfect > 0, name + ": no imperfect candidate enumerated");
    }
  }

  // 3
  void canonical_rejection(Outcome& o) {
    std::size_t certified = 0;
    for (auto const& [name, inst] : all_fixtures()) {
      auto a = analyse(inst, {});
      if (!a.canonical) continue;
      ++certified;
      auto const& d = a.canonical->structure;
      o.expect(is_perfect(d, inst.rules).perfect(), name + ": canonical not perfect");
      o.expect(!evaluate_union(d, build_Gamma_neq(inst)), name + ": canonical satisfies Gamma_neq");
      o.expect(!evaluate_union(d, build_Gamma_neg(inst)), name + ": canonical satisfies Gamma_neg");
      if (a.verdict == InstanceVerdict::positive)
        o.expect(evaluate(d, build_gamma_diamond(inst)).has_value(), name + ": canonical refutes gamma_diamond");
    }
    o.expect(certified >= 4, "fewer than 4 fixtures have a certified canonical structure");
  }

  // 4
  void slot_observations(Outcome& o) {
    for (auto const& [name, inst] : all_fixtures()) {
      auto s = slot(1, signature_of(inst));
      auto b = *s.constant("b1");

      std::vector<std::pair<std::string, ConjunctiveQuery>> gammas{{"gamma_diamond", build_gamma_diamond(inst)}};
      std::vector<std::pair<std::string, ConjunctiveQuery>> betas{{"beta_diamond", build_beta_diamond(inst)}};
      std::vector<bool>                                     beta_known{false};
      for (std::size_t k = 1; k <= inst.rule_count(); ++k) {
        auto ks = std::to_string(k);
        gammas.emplace_back("gamma_" + ks, build_gamma_k(inst, k));
        betas.emplace_back("beta_l" + ks, build_beta_lk(inst, k));
        beta_known.push_back(short_side(inst, k));
        betas.emplace_back("beta_r" + ks, build_beta_rk(inst, k));
        beta_known.push_back(short_side(inst, k));
      }
      for (auto const& l : inst.alphabet.names()) {
        gammas.emplace_back("gamma_R_" + l, build_gamma_R(inst, l));
        betas.emplace_back("beta_R_" + l, build_beta_R(inst, l));
        beta_known.push_back(false);
        betas.emplace_back("beta_Rbar_" + l, build_beta_Rbar(inst, l));
        beta_known.push_back(false);
      }

      for (auto const& [qn, q] : gammas) {
        o.expect(evaluate(s, q).has_value(), name + ": " + qn + " has no homomorphism into the slot");
        auto x       = *q.components()[0].distinguished;
        bool all_b   = true;
        std::size_t models = 0;
        oracle::for_each_model(s, q, [&](auto const& img) {
          ++models;
          all_b &= img[x] == b;
          return true;
        });
        o.expect(models > 0 && all_b, name + ": " + qn + " maps its distinguished variable off b");
      }
      for (std::size_t i = 0; i < betas.size(); ++i) {
        auto const& [qn, q] = betas[i];
        bool ok = evaluate(s, q).has_value();
        o.expect(ok == oracle::satisfiable(s, q), name + ": " + qn + " evaluator and oracle disagree");
        o.expect(ok, name + ": " + qn + " has no homomorphism into the slot", beta_known[i]);
      }
    }
  }

  // 5
  void countermodels(Outcome& o) {
    for (auto const& name : helpers::fixtures_with_prefix("neg_")) {
      auto inst = helpers::fixture(name);
      for (auto v : {Variant::neq, Variant::neg}) {
        auto tag = name + "/" + to_string(v);
        auto dir = std::filesystem::temp_directory_path() / ("thue2dlite_acceptance_" + name + to_string(v));
        auto r   = cmd_countermodel(inst, v, dir, {});
        o.expect(r.exit == exit_code::ok, tag + ": countermodel exit " + std::to_string(r.exit));
        if (r.exit != exit_code::ok) continue;
        auto model = parse_struct(read_file(dir / "model.struct"));
        std::filesystem::remove_all(dir);
        o.expect(model.size() == r.report["model"]["vertices"].get<std::size_t>(),
                 tag + ": reported size differs from the rebuilt model");
        o.expect(check_model(model, build_O_variant(inst, v), {true, true}).ok(), tag + ": not a model");
        auto q = v == Variant::neq ? build_psi(inst) : build_phi(inst);
        o.expect(!evaluate(model, q), tag + ": query satisfied");
        o.expect(!oracle::satisfiable(model, q), tag + ": oracle finds a match");
      }
    }
    auto free = helpers::fixture("neg_free");
    auto n7   = cmd_countermodel(free, Variant::neq, std::nullopt, {}).report["model"]["vertices"];
    auto n11  = cmd_countermodel(free, Variant::neg, std::nullopt, {}).report["model"]["vertices"];
    o.expect(n7 == 7, "neg_free psi countermodel does not have 7 vertices");
    o.expect(n11 == 11, "neg_free phi countermodel does not have 11 vertices");
  }

  // 6
  void positive_end_to_end(Outcome& o) {
    std::size_t tested = 0;
    for (auto const& name : helpers::fixtures_with_prefix("pos_")) {
      auto inst = helpers::fixture(name);
      auto a    = analyse(inst, {});
      if (!a.canonical) continue;
      ++tested;
      auto const& d     = a.canonical->structure;
      bool        known = has_short_side(inst);

      auto psi  = build_psi(inst);
      auto dneq = with_slots(d, inst, Variant::neq);
      auto mp   = evaluate(dneq, psi);
      o.expect(mp && satisfies(dneq, psi, *mp) && oracle::all_hold(dneq, psi, mp->image),
               name + ": psi not satisfied on D_n");

      auto phi  = build_phi(inst);
      auto dneg = with_slots(d, inst, Variant::neg);
      auto mf   = evaluate(dneg, phi);
      o.expect(mf && satisfies(dneg, phi, *mf) && oracle::all_hold(dneg, phi, mf->image),
               name + ": phi not satisfied on D_n", known);

      for (auto const& [un, u] : {std::pair{"Psi", build_Psi(inst)}, std::pair{"Phi", build_Phi(inst)}}) {
        auto m = evaluate_union(d, u);
        o.expect(m && m->disjunct == u.disjuncts.size() - 1,
                 name + ": " + un + " not satisfied via the diamond disjunct");
      }
    }
    o.expect(tested > 0, "no positive fixture has a certified canonical structure");
  }

  // 7
  void evaluator_oracle(Outcome& o) {
    for (auto const& [name, inst] : all_fixtures()) {
      auto qs = corpus::queries(inst);
      for (auto const& ns : corpus::structures(inst, 7)) {
        for (auto const& nq : qs) {
          o.expect(evaluate(ns.structure, nq.query).has_value() == oracle::satisfiable(ns.structure, nq.query),
                   name + ": " + nq.name + " on " + ns.name);
        }
      }
    }
  }

  // 8
  void semantics_edge_cases(Outcome& o) {
    for (auto const& [name, inst] : all_fixtures()) {
      auto sig = signature_of(inst);
      for (auto v : {Variant::neq, Variant::neg}) {
        auto onto = build_O_variant(inst, v);
        auto well = well_of_positivity(sig, onto.constants);
        o.expect(check_model(well, onto, {false, false}).ok(), name + ": well rejected with una off");
        o.expect(!check_model(well, onto, {true, false}).ok(), name + ": well accepted with una on");
        for (auto const& nq : corpus::queries(inst))
          if (has_inequality(nq.query))
            o.expect(!evaluate(well, nq.query), name + ": well satisfies " + nq.name);
      }
      Ontology om{{"b1", "c1"}, build_Omega_n(1, sig)};
      auto     s = slot(1, sig);
      s.set_edge(sig.t_role(), *s.constant("b1"), *s.constant("c1"));
      o.expect(!check_model(s, om, {true, true}).ok(), name + ": extra fact accepted with pcwa on");
      o.expect(check_model(s, om, {true, false}).ok(), name + ": extra fact rejected with pcwa off");
    }
  }

  struct Criterion {
    int                          id;
    std::string                  title;
    double                       bound_s;
    std::function<void(Outcome&)> run;
  };

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "ontology models = candidate structures", 10, ontology_iff_candidate},
      {2, "imperfect candidates satisfy Gamma", 30, imperfect_implies_gamma},
      {3, "canonical rejection", 1, canonical_rejection},
      {4, "slot observations", 5, slot_observations},
      {5, "end-to-end negative", 60, countermodels},
      {6, "end-to-end positive", 60, positive_end_to_end},
      {7, "evaluator = oracle", 120, evaluator_oracle},
      {8, "semantics edge cases", 1, semantics_edge_cases},
  };

  bool unexpected = false;
  for (auto const& c : criteria) {
    Outcome o;
    auto    t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (std::exception const& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs  = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool   slow  = secs > c.bound_s;
    bool   pass  = o.failures.empty() && o.known.empty() && !slow;
    std::printf("%s criterion %d (%s) %.3fs / %.0fs  [%zu checks]\n", pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), secs, c.bound_s, o.checked);
    for (auto const& f : o.failures) std::printf("    unexpected: %s\n", f.c_str());
    for (auto const& f : o.known) std::printf("    known limitation (length-1 rule side): %s\n", f.c_str());
    if (slow) std::printf("    over time bound\n");
    unexpected |= !o.failures.empty() || slow;
  }
  return unexpected ? 1 : 0;
}
