#include "thue2dlite/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "thue2dlite/error.hpp"

namespace thue2dlite {

  namespace {
    template <class... Fs>
    struct Overloaded : Fs... {
      using Fs::operator()...;
    };
    template <class... Fs>
    Overloaded(Fs...) -> Overloaded<Fs...>;
  }  // namespace

  std::string format_concept(BasicConcept const& b) {
    if (b.kind == BasicConcept::Kind::atomic) {
      return b.name;
    }
    return "ex " + b.name + (b.inverse ? "-" : "");
  }

  std::string format_axiom(Axiom const& a) {
    return std::visit(
        Overloaded{
            [](ConceptAssertion const& x) {
              return "assert " + x.concept_name + "(" + x.constant + ")";
            },
            [](RoleAssertion const& x) {
              return "assert " + x.role + "(" + x.subject + "," + x.object + ")";
            },
            [](Inclusion const& x) {
              return "incl " + format_concept(x.lhs) + " [= " + format_concept(x.rhs);
            },
            [](DisjointInclusion const& x) {
              return "disj " + format_concept(x.lhs) + " [= not " + format_concept(x.rhs);
            },
        },
        a);
  }

  namespace {
    std::vector<std::string> constants_of(Axiom const& a) {
      if (auto const* c = std::get_if<ConceptAssertion>(&a)) {
        return {c->constant};
      }
      if (auto const* r = std::get_if<RoleAssertion>(&a)) {
        return {r->subject, r->object};
      }
      return {};
    }
  }  // namespace

  void Ontology::canonicalize() {
    std::sort(axioms.begin(), axioms.end());
    axioms.erase(std::unique(axioms.begin(), axioms.end()), axioms.end());
    std::set<std::string> known(constants.begin(), constants.end());
    for (auto const& ax : axioms) {
      for (auto const& c : constants_of(ax)) {
        if (known.insert(c).second) {
          constants.push_back(c);
        }
      }
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Builders
  ////////////////////////////////////////////////////////////////////////

  Ontology build_core_ontology(ThueInstance const& inst) {
    Ontology o;
    auto     a = std::string(kConstantA);
    o.constants.push_back(a);
    o.axioms.emplace_back(ConceptAssertion{std::string(kConceptA), a});
    o.axioms.emplace_back(RoleAssertion{std::string(kRoleT), a, a});
    for (auto const& r : inst.alphabet.names()) {
      o.axioms.emplace_back(
          Inclusion{BasicConcept::atomic(std::string(kConceptA)), BasicConcept::exists(r)});
      for (auto const& s : inst.alphabet.names()) {
        o.axioms.emplace_back(
            Inclusion{BasicConcept::exists(s, true), BasicConcept::exists(r)});
      }
    }
    o.canonicalize();
    return o;
  }

  std::vector<Axiom> build_Omega_n(std::size_t n, Signature const& sig) {
    auto               b = slot_b(n), c = slot_c(n);
    auto               t = std::string(kRoleT);
    std::vector<Axiom> out{
        ConceptAssertion{std::string(kConceptA), b},
        RoleAssertion{t, b, b},
        RoleAssertion{t, c, c},
    };
    for (auto const& r : sig.letters.names()) {
      out.emplace_back(RoleAssertion{r, b, b});
      out.emplace_back(RoleAssertion{r, b, c});
      out.emplace_back(RoleAssertion{r, c, c});
    }
    return out;
  }

  std::vector<Axiom> build_Omega_upto(std::size_t count, Signature const& sig) {
    std::vector<Axiom> out;
    for (std::size_t n = 1; n <= count; ++n) {
      auto part = build_Omega_n(n, sig);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

  Ontology build_O_variant(ThueInstance const& inst, Variant v) {
    auto o     = build_core_ontology(inst);
    auto count = inst.slot_count(v);
    for (std::size_t n = 1; n <= count; ++n) {
      o.constants.push_back(slot_b(n));
      o.constants.push_back(slot_c(n));
    }
    auto omega = build_Omega_upto(count, signature_of(inst));
    o.axioms.insert(o.axioms.end(), omega.begin(), omega.end());
    o.canonicalize();
    return o;
  }

  Ontology build_O_neq(ThueInstance const& inst) {
    return build_O_variant(inst, Variant::neq);
  }

  Ontology build_O_neg(ThueInstance const& inst) {
    return build_O_variant(inst, Variant::neg);
  }

  ////////////////////////////////////////////////////////////////////////
  // Model checking
  ////////////////////////////////////////////////////////////////////////

  char const* to_string(ViolationKind k) {
    switch (k) {
      case ViolationKind::assertion:
        return "assertion";
      case ViolationKind::una:
        return "una";
      case ViolationKind::inclusion:
        return "inclusion";
      case ViolationKind::disjointness:
        return "disjointness";
      case ViolationKind::pcwa:
        return "pcwa";
    }
    return "?";
  }

  namespace {
    bool in_extension(Structure const& d, BasicConcept const& b, VertexId v) {
      if (b.kind == BasicConcept::Kind::atomic) {
        return b.name == kConceptA && d.has_A(v);
      }
      auto r = d.signature().role(b.name);
      if (!r) {
        return false;
      }
      for (VertexId u = 0; u < d.size(); ++u) {
        if (b.inverse ? d.has_edge(*r, u, v) : d.has_edge(*r, v, u)) {
          return true;
        }
      }
      return false;
    }

    std::string vertex_name(Structure const& d, VertexId v) {
      for (auto const& [name, x] : d.constants()) {
        if (x == v) {
          return name;
        }
      }
      return "#" + std::to_string(v);
    }
  }  // namespace

  ModelReport check_model(Structure const& d, Ontology const& o, ModelCheckFlags flags) {
    std::map<std::string, VertexId, std::less<>> interp;
    auto lookup = [&](std::string const& c) {
      auto v = d.constant(c);
      if (!v) {
        throw MissingConstant(c);
      }
      return *v;
    };
    for (auto const& c : o.constants) {
      interp.emplace(c, lookup(c));
    }
    for (auto const& ax : o.axioms) {
      for (auto const& c : constants_of(ax)) {
        interp.emplace(c, lookup(c));
      }
    }

    ModelReport report;
    auto        add = [&](ViolationKind k,
                   std::optional<std::size_t> ax,
                   std::optional<VertexId> v,
                   std::string detail) {
      report.violations.push_back({k, ax, v, std::move(detail)});
    };

    for (std::size_t i = 0; i < o.axioms.size(); ++i) {
      auto const& ax = o.axioms[i];
      if (auto const* c = std::get_if<ConceptAssertion>(&ax)) {
        auto v = interp.at(c->constant);
        if (!(c->concept_name == kConceptA && d.has_A(v))) {
          add(ViolationKind::assertion, i, v, format_axiom(ax) + " does not hold");
        }
      } else if (auto const* r = std::get_if<RoleAssertion>(&ax)) {
        auto s = interp.at(r->subject), t = interp.at(r->object);
        auto role = d.signature().role(r->role);
        if (!role || !d.has_edge(*role, s, t)) {
          add(ViolationKind::assertion, i, s, format_axiom(ax) + " does not hold");
        }
      } else if (auto const* inc = std::get_if<Inclusion>(&ax)) {
        for (VertexId v = 0; v < d.size(); ++v) {
          if (in_extension(d, inc->lhs, v) && !in_extension(d, inc->rhs, v)) {
            add(ViolationKind::inclusion,
                i,
                v,
                "vertex " + vertex_name(d, v) + " violates " + format_axiom(ax));
          }
        }
      } else if (auto const* dis = std::get_if<DisjointInclusion>(&ax)) {
        for (VertexId v = 0; v < d.size(); ++v) {
          if (in_extension(d, dis->lhs, v) && in_extension(d, dis->rhs, v)) {
            add(ViolationKind::disjointness,
                i,
                v,
                "vertex " + vertex_name(d, v) + " violates " + format_axiom(ax));
          }
        }
      }
    }

    if (flags.una) {
      std::map<VertexId, std::string> first;
      for (auto const& [c, v] : interp) {
        auto [it, fresh] = first.emplace(v, c);
        if (!fresh) {
          add(ViolationKind::una,
              std::nullopt,
              v,
              "constants " + it->second + " and " + c + " denote the same vertex");
        }
      }
    }

    if (flags.pcwa) {
      std::map<VertexId, std::vector<std::string>> names;
      for (auto const& [c, v] : interp) {
        names[v].push_back(c);
      }
      std::set<std::pair<std::string, std::string>>               concept_asserted;
      std::set<std::tuple<std::string, std::string, std::string>> role_asserted;
      for (auto const& ax : o.axioms) {
        if (auto const* c = std::get_if<ConceptAssertion>(&ax)) {
          concept_asserted.emplace(c->concept_name, c->constant);
        } else if (auto const* r = std::get_if<RoleAssertion>(&ax)) {
          role_asserted.emplace(r->role, r->subject, r->object);
        }
      }
      auto const& sig = d.signature();
      for (auto const& [v, cs] : names) {
        if (!d.has_A(v)) {
          continue;
        }
        bool ok = std::any_of(cs.begin(), cs.end(), [&](std::string const& c) {
          return concept_asserted.contains({std::string(kConceptA), c});
        });
        if (!ok) {
          add(ViolationKind::pcwa,
              std::nullopt,
              v,
              "fact A(" + cs.front() + ") holds but is not asserted");
        }
      }
      for (RoleId r = 0; r < sig.role_count(); ++r) {
        auto rn = sig.role_name(r);
        for (auto const& [s, ss] : names) {
          for (auto const& [t, ts] : names) {
            if (!d.has_edge(r, s, t)) {
              continue;
            }
            bool ok = false;
            for (auto const& cs : ss) {
              for (auto const& ct : ts) {
                ok = ok || role_asserted.contains({rn, cs, ct});
              }
            }
            if (!ok) {
              add(ViolationKind::pcwa,
                  std::nullopt,
                  s,
                  "fact " + rn + "(" + ss.front() + "," + ts.front()
                      + ") holds but is not asserted");
            }
          }
        }
      }
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Chase
  ////////////////////////////////////////////////////////////////////////

  Signature signature_of(Ontology const& o) {
    std::set<std::string> roles;
    auto                  note = [&](BasicConcept const& b) {
      if (b.kind == BasicConcept::Kind::exists) {
        roles.insert(b.name);
      }
    };
    for (auto const& ax : o.axioms) {
      std::visit(Overloaded{
                     [](ConceptAssertion const&) {},
                     [&](RoleAssertion const& r) { roles.insert(r.role); },
                     [&](Inclusion const& i) {
                       note(i.lhs);
                       note(i.rhs);
                     },
                     [&](DisjointInclusion const& i) {
                       note(i.lhs);
                       note(i.rhs);
                     },
                 },
                 ax);
    }
    roles.erase(std::string(kRoleT));
    return Signature{Alphabet({roles.begin(), roles.end()})};
  }

  ChaseResult chase(Ontology const& o, Signature const& sig, std::size_t depth) {
    ChaseResult res{Structure(sig), false, 0};
    auto&       d = res.structure;
    std::map<std::string, VertexId> interp;
    auto constant = [&](std::string const& c) {
      auto [it, fresh] = interp.emplace(c, 0);
      if (fresh) {
        it->second = d.add_vertex();
        d.set_constant(c, it->second);
      }
      return it->second;
    };
    for (auto const& c : o.constants) {
      constant(c);
    }
    for (auto const& ax : o.axioms) {
      if (auto const* c = std::get_if<ConceptAssertion>(&ax)) {
        auto v = constant(c->constant);
        if (c->concept_name == kConceptA) {
          d.set_A(v);
        }
      } else if (auto const* r = std::get_if<RoleAssertion>(&ax)) {
        auto s = constant(r->subject), t = constant(r->object);
        if (auto role = sig.role(r->role)) {
          d.set_edge(*role, s, t);
        }
      }
    }

    std::vector<Inclusion const*> incls;
    for (auto const& ax : o.axioms) {
      if (auto const* i = std::get_if<Inclusion>(&ax)) {
        incls.push_back(i);
      }
    }
    // Repairs needed on a snapshot: (vertex, rhs), deduplicated.
    auto pending = [&](Structure const& snap) {
      std::set<std::pair<VertexId, BasicConcept>> todo;
      for (VertexId v = 0; v < snap.size(); ++v) {
        for (auto const* i : incls) {
          if (in_extension(snap, i->lhs, v) && !in_extension(snap, i->rhs, v)) {
            todo.emplace(v, i->rhs);
          }
        }
      }
      return todo;
    };
    for (std::size_t round = 0;; ++round) {
      auto todo = pending(d);
      // Repairs that cannot be performed (unknown symbols) keep the chase
      // from reaching a fixpoint without looping.
      bool progress = false;
      if (todo.empty()) {
        res.fixpoint = true;
        break;
      }
      if (round == depth) {
        break;
      }
      for (auto const& [v, rhs] : todo) {
        if (rhs.kind == BasicConcept::Kind::atomic) {
          if (rhs.name == kConceptA) {
            d.set_A(v);
            progress = true;
          }
          continue;
        }
        auto role = sig.role(rhs.name);
        if (!role) {
          continue;
        }
        auto w = d.add_vertex();
        if (rhs.inverse) {
          d.set_edge(*role, w, v);
        } else {
          d.set_edge(*role, v, w);
        }
        progress = true;
      }
      if (!progress) {
        break;
      }
      ++res.rounds;
    }
    return res;
  }

  ////////////////////////////////////////////////////////////////////////
  // .onto format
  ////////////////////////////////////////////////////////////////////////

  std::string write_onto(Ontology const& o) {
    auto c = o;
    c.canonicalize();
    std::ostringstream out;
    out << "const";
    for (auto const& name : c.constants) {
      out << ' ' << name;
    }
    out << '\n';
    for (auto const& ax : c.axioms) {
      out << format_axiom(ax) << '\n';
    }
    return out.str();
  }

  namespace {
    class OntoLine {
     public:
      OntoLine(std::string_view text, std::size_t line) : text_(text), line_(line) {}

      [[noreturn]] void fail(std::string const& what, ParseErrorKind k = ParseErrorKind::syntax) const {
        throw ParseError(k, {line_, pos_ + 1}, what);
      }
      void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      }
      bool at_end() {
        skip_ws();
        return pos_ == text_.size();
      }
      bool eat(std::string_view s) {
        skip_ws();
        if (text_.substr(pos_).starts_with(s)) {
          pos_ += s.size();
          return true;
        }
        return false;
      }
      void expect(std::string_view s) {
        if (!eat(s)) {
          fail("expected '" + std::string(s) + "'");
        }
      }
      std::string name() {
        skip_ws();
        auto b = pos_;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          ++pos_;
        }
        if (b == pos_) {
          fail("expected a name");
        }
        return std::string(text_.substr(b, pos_ - b));
      }
      BasicConcept concept_expr() {
        if (eat("ex ")) {
          auto role = name();
          bool inv  = false;
          if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            inv = true;
          }
          return BasicConcept::exists(role, inv);
        }
        auto n = name();
        if (n != kConceptA) {
          fail("unknown concept name '" + n + "'", ParseErrorKind::unknown_symbol);
        }
        return BasicConcept::atomic(n);
      }
      void end() {
        if (!at_end()) {
          fail("unexpected trailing text");
        }
      }

     private:
      std::string_view text_;
      std::size_t      line_;
      std::size_t      pos_ = 0;
    };
  }  // namespace

  Ontology parse_onto(std::string_view text) {
    Ontology              o;
    std::set<std::string> declared;
    std::vector<std::pair<std::string, std::size_t>> used;  // constant, line
    std::size_t line = 0, start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      auto raw = text.substr(start, end - start);
      start    = end + 1;
      ++line;
      if (auto h = raw.find('#'); h != std::string_view::npos) {
        raw = raw.substr(0, h);
      }
      OntoLine p(raw, line);
      if (p.at_end()) {
        continue;
      }
      auto kw = p.name();
      if (kw == "const") {
        while (!p.at_end()) {
          auto c = p.name();
          if (declared.insert(c).second) {
            o.constants.push_back(c);
          }
        }
      } else if (kw == "assert") {
        auto sym = p.name();
        p.expect("(");
        auto s = p.name();
        if (p.eat(",")) {
          auto t = p.name();
          p.expect(")");
          p.end();
          if (sym == kConceptA) {
            p.fail("'A' is a concept name", ParseErrorKind::unknown_symbol);
          }
          o.axioms.emplace_back(RoleAssertion{sym, s, t});
          used.emplace_back(s, line);
          used.emplace_back(t, line);
        } else {
          p.expect(")");
          p.end();
          if (sym != kConceptA) {
            p.fail("unknown concept name '" + sym + "'", ParseErrorKind::unknown_symbol);
          }
          o.axioms.emplace_back(ConceptAssertion{sym, s});
          used.emplace_back(s, line);
        }
      } else if (kw == "incl") {
        auto lhs = p.concept_expr();
        p.expect("[=");
        auto rhs = p.concept_expr();
        p.end();
        o.axioms.emplace_back(Inclusion{lhs, rhs});
      } else if (kw == "disj") {
        auto lhs = p.concept_expr();
        p.expect("[=");
        p.expect("not ");
        auto rhs = p.concept_expr();
        p.end();
        o.axioms.emplace_back(DisjointInclusion{lhs, rhs});
      } else {
        p.fail("unknown keyword '" + kw + "'");
      }
    }
    for (auto const& [c, ln] : used) {
      if (!declared.contains(c)) {
        throw ParseError(ParseErrorKind::unknown_symbol,
                         {ln, 1},
                         "constant '" + c + "' is not declared");
      }
    }
    o.canonicalize();
    return o;
  }

}  // namespace thue2dlite
