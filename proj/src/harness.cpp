#include "thue2dlite/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "thue2dlite/error.hpp"
#include "thue2dlite/evaluate.hpp"

namespace thue2dlite {

  using nlohmann::json;

  ////////////////////////////////////////////////////////////////////////
  // Config
  ////////////////////////////////////////////////////////////////////////

  SearchBounds Config::search_bounds(ThueInstance const& inst) const {
    auto b = default_bounds(inst);
    if (max_word_len != 0) {
      b.max_word_len = max_word_len;
    }
    b.max_word_len   = std::max({b.max_word_len, inst.goal_left.size(), inst.goal_right.size()});
    b.max_expansions = max_expansions;
    return b;
  }

  std::size_t Config::enumeration_vertices(std::size_t letters) const {
    if (enum_max_vertices != 0) {
      return enum_max_vertices;
    }
    return letters <= 1 ? 3 : letters == 2 ? 2 : 1;
  }

  json to_json(Config const& c) {
    return {
        {"max_word_len", c.max_word_len},
        {"max_expansions", c.max_expansions},
        {"max_semigroup_order", c.max_semigroup_order},
        {"quotient_max_len", c.quotient_max_len},
        {"chase_depth", c.chase_depth},
        {"enum_max_vertices", c.enum_max_vertices},
        {"una", c.una},
        {"pcwa", c.pcwa},
        {"phi_negate_T", c.phi_negate_T},
        {"variant", to_string(c.variant)},
    };
  }

  Config config_from_json(json const& j, Config c) {
    if (!j.is_object()) {
      throw Error("config: expected a JSON object");
    }
    auto size = [&](json const& v, std::string const& key) -> std::size_t {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw Error("config: '" + key + "' must be a non-negative integer");
      }
      return v.get<std::size_t>();
    };
    auto flag = [&](json const& v, std::string const& key) {
      if (!v.is_boolean()) {
        throw Error("config: '" + key + "' must be a boolean");
      }
      return v.get<bool>();
    };
    std::map<std::string, std::function<void(json const&, std::string const&)>> setters{
        {"max_word_len", [&](auto const& v, auto const& k) { c.max_word_len = size(v, k); }},
        {"max_expansions", [&](auto const& v, auto const& k) { c.max_expansions = size(v, k); }},
        {"max_semigroup_order",
         [&](auto const& v, auto const& k) { c.max_semigroup_order = size(v, k); }},
        {"quotient_max_len", [&](auto const& v, auto const& k) { c.quotient_max_len = size(v, k); }},
        {"chase_depth", [&](auto const& v, auto const& k) { c.chase_depth = size(v, k); }},
        {"enum_max_vertices",
         [&](auto const& v, auto const& k) { c.enum_max_vertices = size(v, k); }},
        {"una", [&](auto const& v, auto const& k) { c.una = flag(v, k); }},
        {"pcwa", [&](auto const& v, auto const& k) { c.pcwa = flag(v, k); }},
        {"phi_negate_T", [&](auto const& v, auto const& k) { c.phi_negate_T = flag(v, k); }},
        {"variant",
         [&](auto const& v, auto const&) {
           auto parsed = v.is_string() ? parse_variant(v.template get<std::string>())
                                       : std::nullopt;
           if (!parsed) {
             throw Error("config: 'variant' must be \"neq\" or \"neg\"");
           }
           c.variant = *parsed;
         }},
    };
    for (auto const& [key, value] : j.items()) {
      auto it = setters.find(key);
      if (it == setters.end()) {
        throw Error("config: unknown key '" + key + "'");
      }
      it->second(value, key);
    }
    return c;
  }

  Config config_from_env() {
    char const* path = std::getenv(kConfigEnvVar);
    if (path == nullptr || *path == '\0') {
      return {};
    }
    json j;
    try {
      j = json::parse(read_file(path));
    } catch (json::parse_error const& e) {
      throw Error(std::string("config file ") + path + ": " + e.what());
    }
    return config_from_json(j);
  }

  std::string read_file(std::filesystem::path const& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      throw Error("cannot read " + p.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write_file_atomic(std::filesystem::path const& p, std::string const& content) {
    auto tmp = p;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw Error("cannot write " + tmp.string());
      }
      out << content;
      if (!out) {
        throw Error("cannot write " + tmp.string());
      }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) {
      throw Error("cannot rename " + tmp.string() + " to " + p.string() + ": " + ec.message());
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // JSON helpers
  ////////////////////////////////////////////////////////////////////////

  namespace {
    std::string vertex_label(Structure const& d, VertexId v) {
      std::string out;
      for (auto const& [name, x] : d.constants()) {
        if (x == v) {
          out += out.empty() ? name : "=" + name;
        }
      }
      return out.empty() ? std::to_string(v) : out;
    }

    json assignment_json(Structure const& d, ConjunctiveQuery const& q, Assignment const& a) {
      json j = json::object();
      for (VarId v = 0; v < q.variables().size(); ++v) {
        j[q.variable_name(v)] = vertex_label(d, a.image[v]);
      }
      return j;
    }
  }  // namespace

  json to_json(Structure const& d) {
    json facts = json::array();
    auto text  = write_struct(d);
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (line.starts_with("A(") || (line.find('(') != std::string::npos
                                     && !line.starts_with("const"))) {
        facts.push_back(line);
      }
    }
    json consts = json::object();
    for (auto const& [name, v] : d.constants()) {
      consts[name] = v;
    }
    return {{"vertices", d.size()}, {"constants", consts}, {"facts", facts}};
  }

  json to_json(RewritePath const& p, ThueInstance const& inst) {
    json words = json::array(), steps = json::array();
    for (auto const& w : p.words) {
      words.push_back(inst.alphabet.format(w));
    }
    for (auto const& s : p.steps) {
      steps.push_back({{"rule", s.rule_index + 1},
                       {"position", s.position},
                       {"direction", to_string(s.direction)}});
    }
    return {{"words", words}, {"steps", steps}};
  }

  json to_json(SemigroupWitness const& w, ThueInstance const& inst) {
    json table = json::array();
    for (std::size_t x = 0; x < w.order; ++x) {
      json row = json::array();
      for (std::size_t y = 0; y < w.order; ++y) {
        row.push_back(w.product(static_cast<Element>(x), static_cast<Element>(y)));
      }
      table.push_back(row);
    }
    json gens = json::object();
    for (Letter x = 0; x < inst.letter_count(); ++x) {
      gens[inst.alphabet.name(x)] = w.generator_map[x];
    }
    return {{"order", w.order}, {"table", table}, {"generators", gens}};
  }

  namespace {
    json bound_json(BoundReport const& r) {
      return {{"exhausted", to_string(r.reason)},
              {"expansions", r.expansions},
              {"visited", r.visited}};
    }

    json instance_json(ThueInstance const& inst) {
      json rules = json::array();
      for (auto const& r : inst.rules) {
        rules.push_back(inst.alphabet.format(r.left) + " = " + inst.alphabet.format(r.right));
      }
      return {{"alphabet", inst.alphabet.names()},
              {"rules", rules},
              {"goal", inst.alphabet.format(inst.goal_left) + " = "
                           + inst.alphabet.format(inst.goal_right)},
              {"k", inst.rule_count()},
              {"m", inst.letter_count()}};
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Analysis
  ////////////////////////////////////////////////////////////////////////

  char const* to_string(InstanceVerdict v) {
    switch (v) {
      case InstanceVerdict::positive:
        return "positive";
      case InstanceVerdict::negative:
        return "negative";
      case InstanceVerdict::unknown:
        return "unknown";
    }
    return "?";
  }

  Analysis analyse(ThueInstance const& inst, Config const& cfg) {
    Analysis a;
    a.rewrite = decide_equiv_bounded(inst.goal_left, inst.goal_right, inst.rules,
                                     cfg.search_bounds(inst));
    if (std::holds_alternative<Equivalent>(a.rewrite)) {
      a.verdict = InstanceVerdict::positive;
    }
    try {
      auto q = certify_quotient(inst, cfg.quotient_max_len);
      bool same = q.class_of(inst.goal_left) == q.class_of(inst.goal_right);
      if (a.verdict == InstanceVerdict::unknown) {
        a.verdict = same ? InstanceVerdict::positive : InstanceVerdict::negative;
      }
      a.canonical = CanonicalModel{canonical_from_quotient(inst, q), "quotient", std::nullopt, q};
    } catch (NotClosedAtBound const& e) {
      a.canonical_note = e.what();
    }
    if (a.verdict != InstanceVerdict::positive) {
      if (auto w = find_separating_semigroup(inst, cfg.max_semigroup_order)) {
        a.verdict = InstanceVerdict::negative;
        if (!a.canonical) {
          a.canonical = CanonicalModel{canonical_from_semigroup(inst, *w), "semigroup", w, std::nullopt};
        }
      } else if (!a.canonical) {
        a.canonical_note += "; no separating semigroup of order <= "
                            + std::to_string(cfg.max_semigroup_order);
      }
    }
    return a;
  }

  Structure with_slots(Structure const& canonical, ThueInstance const& inst, Variant v) {
    std::vector<Structure> parts{canonical};
    auto                   sig = signature_of(inst);
    for (std::size_t n = 1; n <= inst.slot_count(v); ++n) {
      parts.push_back(slot(n, sig));
    }
    return disjoint_union(parts);
  }

  ConjunctiveQuery combined_query(ThueInstance const& inst, Variant v, Config const& cfg) {
    return v == Variant::neq ? build_psi(inst) : build_phi(inst, {cfg.phi_negate_T});
  }

  ////////////////////////////////////////////////////////////////////////
  // compile
  ////////////////////////////////////////////////////////////////////////

  CommandResult cmd_compile(ThueInstance const&          inst,
                            Variant                      v,
                            std::filesystem::path const& out_dir,
                            Config const&                cfg) {
    auto onto = build_O_variant(inst, v);
    auto q    = combined_query(inst, v, cfg);
    std::filesystem::create_directories(out_dir);

    json ids = json::array(), labels = json::array();
    for (auto const& c : q.components()) {
      ids.push_back(c.id);
      labels.push_back(component_label(c.id));
    }
    json manifest{
        {"variant", to_string(v)},
        {"k", inst.rule_count()},
        {"m", inst.letter_count()},
        {"n", inst.slot_count(v)},
        {"components", labels},
        {"component_ids", ids},
        {"ontology", {{"file", "ontology.onto"},
                      {"constants", onto.constants.size()},
                      {"axioms", onto.axioms.size()}}},
        {"query", {{"file", "query.cq"},
                   {"variables", q.variables().size()},
                   {"literals", q.literals().size()}}},
        {"phi_negate_T", v == Variant::neg && cfg.phi_negate_T},
    };
    write_file_atomic(out_dir / "ontology.onto", write_onto(onto));
    write_file_atomic(out_dir / "query.cq", write_cq(q));
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");

    CommandResult r;
    r.report = {{"command", "compile"}, {"instance", instance_json(inst)}, {"manifest", manifest},
                {"out_dir", out_dir.string()}};
    std::ostringstream t;
    t << "compiled " << to_string(v) << " variant: n=" << inst.slot_count(v) << ", "
      << onto.axioms.size() << " axioms, " << q.components().size() << " components ["
      << [&] {
           std::string s;
           for (auto const& l : labels) {
             s += (s.empty() ? "" : ", ") + l.get<std::string>();
           }
           return s;
         }()
      << "] -> " << out_dir.string() << "\n";
    r.text = t.str();
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // rewrite
  ////////////////////////////////////////////////////////////////////////

  CommandResult cmd_rewrite(ThueInstance const& inst, Config const& cfg) {
    auto          bounds  = cfg.search_bounds(inst);
    auto          verdict = decide_equiv_bounded(inst.goal_left, inst.goal_right, inst.rules, bounds);
    CommandResult r;
    r.report = {{"command", "rewrite"},
                {"instance", instance_json(inst)},
                {"bounds", {{"max_word_len", bounds.max_word_len},
                            {"max_expansions", bounds.max_expansions}}}};
    if (auto const* eq = std::get_if<Equivalent>(&verdict)) {
      r.exit              = exit_code::ok;
      r.report["verdict"] = "equivalent";
      r.report["path"]    = to_json(eq->path, inst);
      std::string t = "equivalent in " + std::to_string(eq->path.steps.size()) + " step(s):";
      for (auto const& w : eq->path.words) {
        t += " " + inst.alphabet.format(w);
      }
      r.text = t + "\n";
    } else {
      auto const& u       = std::get<Unknown>(verdict);
      r.exit              = exit_code::unknown;
      r.report["verdict"] = "unknown";
      r.report["bound"]   = bound_json(u.report);
      r.text = std::string("unknown: ") + to_string(u.report.reason) + " after "
               + std::to_string(u.report.expansions) + " expansions\n";
    }
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // countermodel
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Vertices the distinguished variable of each component can reach.
    json component_images(Structure const& d, ConjunctiveQuery const& q, VertexId canonical_size) {
      json out = json::array();
      for (std::size_t c = 0; c < q.components().size(); ++c) {
        auto part = extract_component(q, c);
        auto x    = part.components()[0].distinguished;
        json images = json::array();
        bool in_canonical = false;
        if (x) {
          for (VertexId v = 0; v < d.size(); ++v) {
            if (evaluate(d, part, {{{*x, v}}})) {
              images.push_back(vertex_label(d, v));
              in_canonical = in_canonical || v < canonical_size;
            }
          }
        }
        out.push_back({{"component", q.components()[c].id},
                       {"label", component_label(q.components()[c].id)},
                       {"distinguished_images", images},
                       {"embeds_in_canonical", in_canonical}});
      }
      return out;
    }
  }  // namespace

  CommandResult cmd_countermodel(ThueInstance const&                         inst,
                                 Variant                                     v,
                                 std::optional<std::filesystem::path> const& out_dir,
                                 Config const&                               cfg) {
    CommandResult r;
    r.report = {{"command", "countermodel"},
                {"instance", instance_json(inst)},
                {"variant", to_string(v)},
                {"config", to_json(cfg)}};

    std::optional<Structure> canonical;
    json                     source;
    if (auto w = find_separating_semigroup(inst, cfg.max_semigroup_order)) {
      canonical = canonical_from_semigroup(inst, *w);
      source    = {{"kind", "semigroup"}, {"witness", to_json(*w, inst)}};
    } else {
      try {
        auto q = certify_quotient(inst, cfg.quotient_max_len);
        if (q.class_of(inst.goal_left) != q.class_of(inst.goal_right)) {
          canonical = canonical_from_quotient(inst, q);
          source    = {{"kind", "quotient"}, {"classes", q.size()}};
        } else {
          source = {{"kind", "none"}, {"reason", "the certified quotient identifies l and r"}};
        }
      } catch (NotClosedAtBound const& e) {
        source = {{"kind", "none"},
                  {"reason", "no separating semigroup of order <= "
                                 + std::to_string(cfg.max_semigroup_order) + "; " + e.what()}};
      }
    }
    r.report["source"] = source;
    if (!canonical) {
      r.exit              = exit_code::unknown;
      r.report["verdict"] = "none";
      r.text = "no countermodel within bounds: " + source["reason"].get<std::string>() + "\n";
      return r;
    }

    auto model = with_slots(*canonical, inst, v);
    auto onto  = build_O_variant(inst, v);
    auto q     = combined_query(inst, v, cfg);
    auto check = check_model(model, onto, {true, true});
    auto hit   = evaluate(model, q);

    json violations = json::array();
    for (auto const& viol : check.violations) {
      violations.push_back({{"kind", to_string(viol.kind)}, {"detail", viol.detail}});
    }
    r.report["model"] = {{"vertices", model.size()},
                         {"canonical_vertices", canonical->size()},
                         {"slots", inst.slot_count(v)}};
    r.report["model_check"] = {{"ok", check.ok()}, {"una", true}, {"pcwa", true},
                               {"violations", violations}};
    r.report["query_satisfied"] = hit.has_value();
    r.report["components"] = component_images(model, q, static_cast<VertexId>(canonical->size()));
    bool verified = check.ok() && !hit;
    r.report["verdict"] = verified ? "countermodel" : "verification_failed";
    if (hit) {
      r.report["assignment"] = assignment_json(model, q, *hit);
    }
    if (out_dir) {
      std::filesystem::create_directories(*out_dir);
      write_file_atomic(*out_dir / "model.struct", write_struct(model));
      write_file_atomic(*out_dir / "report.json", r.report.dump(2) + "\n");
    }
    std::ostringstream t;
    if (verified) {
      r.exit = exit_code::ok;
      t << "countermodel with " << model.size() << " vertices (" << canonical->size()
        << " canonical + " << inst.slot_count(v) << " slots): model of the "
        << to_string(v) << " ontology, query refuted\n";
    } else {
      r.exit = exit_code::negative;
      t << "candidate countermodel failed verification: model_check="
        << (check.ok() ? "ok" : "violated") << ", query " << (hit ? "satisfied" : "refuted")
        << "\n";
    }
    r.text = t.str();
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // eval / check-model
  ////////////////////////////////////////////////////////////////////////

  namespace {
    json model_report_json(ModelReport const& rep) {
      json v = json::array();
      for (auto const& x : rep.violations) {
        json j{{"kind", to_string(x.kind)}, {"detail", x.detail}};
        if (x.axiom) {
          j["axiom"] = *x.axiom;
        }
        if (x.vertex) {
          j["vertex"] = *x.vertex;
        }
        v.push_back(j);
      }
      return {{"ok", rep.ok()}, {"violations", v}};
    }
  }  // namespace

  namespace {
    // A structure that leaves a constant of O uninterpreted is not a model.
    ModelReport check_model_total(Structure const& d, Ontology const& o, ModelCheckFlags f) {
      try {
        return check_model(d, o, f);
      } catch (MissingConstant const& e) {
        ModelReport r;
        r.violations.push_back({ViolationKind::assertion, std::nullopt, std::nullopt,
                                "constant " + e.name() + " is not interpreted"});
        return r;
      }
    }
  }  // namespace

  CommandResult cmd_eval(UnionQuery const&              query,
                         Structure const&               model,
                         std::optional<Ontology> const& onto,
                         Config const&                  cfg) {
    CommandResult r;
    r.report = {{"command", "eval"}, {"una", cfg.una}, {"pcwa", cfg.pcwa}};
    for (auto const& q : query.disjuncts) {
      if (!is_safe(q)) {
        r.exit              = exit_code::input_error;
        r.report["verdict"] = "unsafe_query";
        r.text              = "error: query is not safe\n";
        return r;
      }
    }
    if (onto) {
      auto rep                = check_model_total(model, *onto, cfg.flags());
      r.report["model_check"] = model_report_json(rep);
      if (!rep.ok()) {
        r.exit              = exit_code::not_a_model;
        r.report["verdict"] = "not_a_model";
        r.text = "the structure is not a model of the ontology ("
                 + std::to_string(rep.violations.size()) + " violation(s))\n";
        return r;
      }
    }
    auto hit = evaluate_union(model, query);
    if (hit) {
      r.exit                = exit_code::ok;
      r.report["verdict"]   = "satisfied";
      r.report["disjunct"]  = hit->disjunct;
      r.report["assignment"] = assignment_json(model, query.disjuncts[hit->disjunct], hit->assignment);
      r.text = "satisfied (disjunct " + std::to_string(hit->disjunct) + ")\n";
    } else {
      r.exit              = exit_code::negative;
      r.report["verdict"] = "not_satisfied";
      r.text              = "not satisfied\n";
    }
    return r;
  }

  CommandResult cmd_check_model(Structure const& model, Ontology const& onto, Config const& cfg) {
    auto          rep = check_model_total(model, onto, cfg.flags());
    CommandResult r;
    r.exit   = rep.ok() ? exit_code::ok : exit_code::negative;
    r.report = {{"command", "check-model"}, {"una", cfg.una}, {"pcwa", cfg.pcwa},
                {"result", model_report_json(rep)}};
    std::ostringstream t;
    if (rep.ok()) {
      t << "model\n";
    } else {
      t << rep.violations.size() << " violation(s)\n";
      for (auto const& v : rep.violations) {
        t << "  " << to_string(v.kind) << ": " << v.detail << "\n";
      }
    }
    r.text = t.str();
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // enumerate
  ////////////////////////////////////////////////////////////////////////

  std::vector<std::string> enumerate_checks() {
    return {"ontology-iff-candidate", "imperfect-implies-gamma-neq", "imperfect-implies-gamma-neg"};
  }

  namespace {
    struct EnumerationOutcome {
      std::size_t visited    = 0;
      std::size_t relevant   = 0;  // structures the property speaks about
      std::size_t violations = 0;
      json        examples   = json::array();
    };

    EnumerationOutcome run_enumeration(ThueInstance const& inst,
                                       std::size_t         max_vertices,
                                       std::string const&  check) {
      EnumerationOutcome out;
      auto               sig  = signature_of(inst);
      auto               note = [&](Structure const& d, std::string why) {
        ++out.violations;
        if (out.examples.size() < 5) {
          out.examples.push_back({{"structure", to_json(d)}, {"reason", std::move(why)}});
        }
      };
      if (check == "ontology-iff-candidate") {
        auto core = build_core_ontology(inst);
        out.visited = for_each_structure(sig, max_vertices, [&](Structure const& d) {
          bool model     = check_model(d, core, {false, false}).ok();
          bool candidate = is_candidate(d).ok();
          out.relevant += candidate ? 1 : 0;
          if (model != candidate) {
            note(d, model ? "model but not candidate" : "candidate but not model");
          }
        });
        return out;
      }
      UnionQuery gamma;
      if (check == "imperfect-implies-gamma-neq") {
        gamma = build_Gamma_neq(inst);
      } else if (check == "imperfect-implies-gamma-neg") {
        gamma = build_Gamma_neg(inst);
      } else {
        throw std::invalid_argument("unknown check '" + check + "'");
      }
      out.visited = enumerate_candidate_structures(sig, max_vertices, [&](Structure const& d) {
        if (is_perfect(d, inst.rules).perfect()) {
          return;
        }
        ++out.relevant;
        if (!evaluate_union(d, gamma)) {
          note(d, "imperfect but the union is not satisfied");
        }
      });
      return out;
    }
  }  // namespace

  CommandResult cmd_enumerate(ThueInstance const& inst,
                              std::size_t         max_vertices,
                              std::string const&  check,
                              Config const&       cfg) {
    (void)cfg;
    auto          out = run_enumeration(inst, max_vertices, check);
    CommandResult r;
    r.exit   = out.violations == 0 ? exit_code::ok : exit_code::negative;
    r.report = {{"command", "enumerate"},
                {"check", check},
                {"alphabet", inst.alphabet.names()},
                {"max_vertices", max_vertices},
                {"visited", out.visited},
                {"relevant", out.relevant},
                {"violations", out.violations},
                {"examples", out.examples}};
    r.text = check + ": " + std::to_string(out.visited) + " structures, "
             + std::to_string(out.relevant) + " relevant, " + std::to_string(out.violations)
             + " violation(s)\n";
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // verify
  ////////////////////////////////////////////////////////////////////////

  namespace {
    struct CheckRecord {
      std::string name;
      std::string property;
      std::string verdict = "skipped";
      std::string detail;
      json        payload = json::object();
    };

    struct CheckSpec {
      std::string name;
      std::string property;
    };

    std::vector<CheckSpec> const& check_specs() {
      static std::vector<CheckSpec> const specs{
          {"slot.gamma_k", "each gamma_k maps into a slot, only with x at b"},
          {"slot.gamma_R", "each gamma_R maps into a slot, only with x at b"},
          {"slot.gamma_diamond", "gamma_diamond maps into a slot, only with x at b"},
          {"slot.beta_lk", "each beta_[l,k] maps into a slot"},
          {"slot.beta_rk", "each beta_[r,k] maps into a slot"},
          {"slot.beta_R", "each beta_R maps into a slot"},
          {"slot.beta_Rbar", "each beta_Rbar maps into a slot"},
          {"canonical.build", "the finite canonical structure can be certified"},
          {"canonical.candidate", "the canonical structure is a candidate structure"},
          {"canonical.perfect", "the canonical structure is perfect"},
          {"canonical.rejects_Gamma_neq", "the canonical structure does not satisfy Gamma_neq"},
          {"canonical.rejects_Gamma_neg", "the canonical structure does not satisfy Gamma_neg"},
          {"canonical.diamond",
           "the canonical structure satisfies gamma_diamond iff the instance is positive"},
          {"model.O_neq", "canonical plus slots is a model of O_neq under UNA and PCWA"},
          {"model.O_neg", "canonical plus slots is a model of O_neg under UNA and PCWA"},
          {"enumeration.imperfect_implies_Gamma",
           "every imperfect small candidate structure satisfies Gamma_neq and Gamma_neg"},
          {"canonical.Psi_Phi_via_diamond",
           "on a positive instance Psi and Phi hold on the canonical structure via the diamond "
           "disjunct"},
          {"end_to_end.psi", "psi holds on canonical plus slots iff the instance is positive"},
          {"end_to_end.phi", "phi holds on canonical plus slots iff the instance is positive"},
          {"semantics.well_of_positivity",
           "the one-vertex structure models O only without UNA and satisfies no query with "
           "inequalities"},
          {"semantics.pcwa_extra_fact",
           "a slot with one extra constant-to-constant fact is rejected exactly under PCWA"},
          {"chase.assertions",
           "the bounded chase of O_neq satisfies all assertions and UNA"},
      };
      return specs;
    }

    class Suite {
     public:
      Suite() {
        for (auto const& s : check_specs()) {
          records_.push_back({s.name, s.property, "skipped", {}, json::object()});
        }
      }
      CheckRecord& operator[](std::string const& name) {
        for (auto& r : records_) {
          if (r.name == name) {
            return r;
          }
        }
        throw std::logic_error("unknown verify check " + name);
      }
      void pass(std::string const& name, std::string detail = {}, json payload = json::object()) {
        set(name, "pass", std::move(detail), std::move(payload));
      }
      void fail(std::string const& name, std::string detail, json payload = json::object()) {
        set(name, "fail", std::move(detail), std::move(payload));
      }
      void skip(std::string const& name, std::string reason) {
        set(name, "skipped", std::move(reason), json::object());
      }
      void expect(std::string const& name, bool ok, std::string detail, json payload = json::object()) {
        set(name, ok ? "pass" : "fail", std::move(detail), std::move(payload));
      }
      std::vector<CheckRecord> const& records() const {
        return records_;
      }

     private:
      void set(std::string const& name, std::string verdict, std::string detail, json payload) {
        auto& r   = (*this)[name];
        r.verdict = std::move(verdict);
        r.detail  = std::move(detail);
        r.payload = std::move(payload);
      }
      std::vector<CheckRecord> records_;
    };

    // Every query of a family maps into slot 1; for gamma families, pinning
    // the distinguished variable to c finds nothing.
    void slot_family(Suite&                               suite,
                     std::string const&                   name,
                     std::vector<ConjunctiveQuery> const& family,
                     bool                                 only_b,
                     Structure const&                     s) {
      if (family.empty()) {
        suite.skip(name, "the family is empty for this instance");
        return;
      }
      auto b = *s.constant(slot_b(1));
      auto c = *s.constant(slot_c(1));
      json failures = json::array();
      for (auto const& q : family) {
        auto id = q.components()[0].id;
        auto hit = evaluate(s, q);
        if (!hit) {
          failures.push_back({{"component", id}, {"reason", "no homomorphism into the slot"}});
          continue;
        }
        if (only_b) {
          auto x = *q.components()[0].distinguished;
          if (evaluate(s, q, {{{x, c}}})) {
            failures.push_back({{"component", id}, {"reason", "distinguished variable maps to c"}});
          } else if (!evaluate(s, q, {{{x, b}}})) {
            failures.push_back({{"component", id}, {"reason", "distinguished variable misses b"}});
          }
        }
      }
      suite.expect(name,
                   failures.empty(),
                   std::to_string(family.size() - failures.size()) + "/"
                       + std::to_string(family.size()) + " queries behave as expected",
                   {{"failures", failures}});
    }
  }  // namespace

  std::vector<std::string> verify_check_names() {
    std::vector<std::string> out;
    for (auto const& s : check_specs()) {
      out.push_back(s.name);
    }
    return out;
  }

  CommandResult cmd_verify(ThueInstance const& inst, std::string const& id, Config const& cfg) {
    Suite suite;
    auto  sig      = signature_of(inst);
    auto  analysis = analyse(inst, cfg);

    // Slot observations.
    {
      auto s = slot(1, sig);
      std::vector<ConjunctiveQuery> gk, gr, bl, br, bR, bRbar;
      for (std::size_t k = 1; k <= inst.rule_count(); ++k) {
        gk.push_back(build_gamma_k(inst, k));
        bl.push_back(build_beta_lk(inst, k));
        br.push_back(build_beta_rk(inst, k));
      }
      for (auto const& r : inst.alphabet.names()) {
        gr.push_back(build_gamma_R(inst, r));
        bR.push_back(build_beta_R(inst, r));
        bRbar.push_back(build_beta_Rbar(inst, r));
      }
      slot_family(suite, "slot.gamma_k", gk, true, s);
      slot_family(suite, "slot.gamma_R", gr, true, s);
      slot_family(suite, "slot.gamma_diamond", {build_gamma_diamond(inst)}, true, s);
      slot_family(suite, "slot.beta_lk", bl, false, s);
      slot_family(suite, "slot.beta_rk", br, false, s);
      slot_family(suite, "slot.beta_R", bR, false, s);
      slot_family(suite, "slot.beta_Rbar", bRbar, false, s);
    }

    auto const positive = analysis.verdict == InstanceVerdict::positive;
    auto const negative = analysis.verdict == InstanceVerdict::negative;
    std::vector<std::string> canonical_checks{
        "canonical.candidate", "canonical.perfect", "canonical.rejects_Gamma_neq",
        "canonical.rejects_Gamma_neg", "canonical.diamond", "model.O_neq", "model.O_neg",
        "canonical.Psi_Phi_via_diamond", "end_to_end.psi", "end_to_end.phi"};

    if (!analysis.canonical) {
      suite.skip("canonical.build", "not certifiable at these bounds: " + analysis.canonical_note);
      for (auto const& c : canonical_checks) {
        suite.skip(c, "no certified canonical structure");
      }
    } else {
      auto const& d = analysis.canonical->structure;
      suite.pass("canonical.build",
                 analysis.canonical->source + " with " + std::to_string(d.size()) + " vertices",
                 {{"source", analysis.canonical->source}, {"structure", to_json(d)}});
      auto cand = is_candidate(d);
      suite.expect("canonical.candidate", cand.ok(),
                   std::to_string(cand.violations.size()) + " violation(s)");
      auto perf = is_perfect(d, inst.rules);
      suite.expect("canonical.perfect", perf.perfect(),
                   std::to_string(perf.reachable_count) + " reachable vertices");
      auto gneq = evaluate_union(d, build_Gamma_neq(inst));
      suite.expect("canonical.rejects_Gamma_neq", !gneq,
                   gneq ? "satisfied by disjunct " + std::to_string(gneq->disjunct) : "not satisfied");
      auto gneg = evaluate_union(d, build_Gamma_neg(inst));
      suite.expect("canonical.rejects_Gamma_neg", !gneg,
                   gneg ? "satisfied by disjunct " + std::to_string(gneg->disjunct) : "not satisfied");
      auto diamond = evaluate(d, build_gamma_diamond(inst)).has_value();
      if (positive || negative) {
        suite.expect("canonical.diamond", diamond == positive,
                     std::string("gamma_diamond ") + (diamond ? "satisfied" : "not satisfied")
                         + " on a " + to_string(analysis.verdict) + " instance");
      } else {
        suite.skip("canonical.diamond", "instance verdict unknown at these bounds");
      }
      for (auto v : {Variant::neq, Variant::neg}) {
        auto name  = v == Variant::neq ? "model.O_neq" : "model.O_neg";
        auto model = with_slots(d, inst, v);
        auto rep   = check_model(model, build_O_variant(inst, v), {true, true});
        suite.expect(name, rep.ok(),
                     std::to_string(model.size()) + " vertices, "
                         + std::to_string(rep.violations.size()) + " violation(s)",
                     model_report_json(rep));
      }
      if (positive) {
        auto psi_u = evaluate_union(d, build_Psi(inst));
        auto phi_u = evaluate_union(d, build_Phi(inst));
        auto last_psi = build_Psi(inst).disjuncts.size() - 1;
        auto last_phi = build_Phi(inst).disjuncts.size() - 1;
        bool ok = psi_u && phi_u && psi_u->disjunct == last_psi && phi_u->disjunct == last_phi;
        suite.expect("canonical.Psi_Phi_via_diamond", ok,
                     std::string("Psi ") + (psi_u ? "via disjunct " + std::to_string(psi_u->disjunct) : "fails")
                         + ", Phi " + (phi_u ? "via disjunct " + std::to_string(phi_u->disjunct) : "fails"));
      } else {
        suite.skip("canonical.Psi_Phi_via_diamond", "instance is not known to be positive");
      }
      for (auto v : {Variant::neq, Variant::neg}) {
        auto name = v == Variant::neq ? "end_to_end.psi" : "end_to_end.phi";
        if (!positive && !negative) {
          suite.skip(name, "instance verdict unknown at these bounds");
          continue;
        }
        auto model = with_slots(d, inst, v);
        auto q     = combined_query(inst, v, cfg);
        auto hit   = evaluate(model, q);
        bool ok    = positive ? hit && satisfies(model, q, *hit) : !hit;
        json payload = json::object();
        if (hit) {
          payload["assignment"] = assignment_json(model, q, *hit);
        } else {
          payload["components"] = component_images(model, q, static_cast<VertexId>(d.size()));
        }
        suite.expect(name, ok,
                     std::string(hit ? "satisfied" : "not satisfied") + " on a "
                         + to_string(analysis.verdict) + " instance",
                     payload);
      }
    }

    // Enumeration of small candidate structures.
    {
      auto n   = cfg.enumeration_vertices(inst.letter_count());
      auto neq = run_enumeration(inst, n, "imperfect-implies-gamma-neq");
      auto neg = run_enumeration(inst, n, "imperfect-implies-gamma-neg");
      suite.expect("enumeration.imperfect_implies_Gamma",
                   neq.violations == 0 && neg.violations == 0,
                   std::to_string(neq.relevant) + " imperfect candidates up to "
                       + std::to_string(n) + " vertices; "
                       + std::to_string(neq.violations + neg.violations) + " violation(s)",
                   {{"max_vertices", n},
                    {"visited", neq.visited},
                    {"imperfect", neq.relevant},
                    {"gamma_neq_violations", neq.violations},
                    {"gamma_neg_violations", neg.violations}});
    }

    // Semantics demos.
    {
      auto onto      = build_O_neq(inst);
      auto well      = well_of_positivity(sig, onto.constants);
      auto without   = check_model(well, onto, {false, false}).ok();
      auto with_una  = check_model(well, onto, {true, false});
      bool una_flags = std::any_of(with_una.violations.begin(), with_una.violations.end(),
                                   [](ModelViolation const& v) { return v.kind == ViolationKind::una; });
      std::vector<ConjunctiveQuery> ineq{build_psi(inst)};
      for (std::size_t k = 1; k <= inst.rule_count(); ++k) {
        ineq.push_back(build_gamma_k(inst, k));
      }
      std::size_t satisfied = 0;
      for (auto const& q : ineq) {
        satisfied += evaluate(well, q) ? 1 : 0;
      }
      suite.expect("semantics.well_of_positivity", without && una_flags && satisfied == 0,
                   std::string("model without UNA: ") + (without ? "yes" : "no")
                       + ", rejected with UNA: " + (una_flags ? "yes" : "no") + ", "
                       + std::to_string(satisfied) + " inequality queries satisfied");

      Ontology omega1;
      omega1.constants = {slot_b(1), slot_c(1)};
      omega1.axioms    = build_Omega_n(1, sig);
      omega1.canonicalize();
      auto s = slot(1, sig);
      bool plain = check_model(s, omega1, {true, true}).ok();
      s.set_edge(sig.t_role(), *s.constant(slot_b(1)), *s.constant(slot_c(1)));
      bool rejected_pcwa = !check_model(s, omega1, {true, true}).ok();
      bool ok_no_pcwa    = check_model(s, omega1, {true, false}).ok();
      suite.expect("semantics.pcwa_extra_fact", plain && rejected_pcwa && ok_no_pcwa,
                   std::string("plain slot accepted: ") + (plain ? "yes" : "no")
                       + ", T(b1,c1) rejected with PCWA: " + (rejected_pcwa ? "yes" : "no")
                       + ", accepted without PCWA: " + (ok_no_pcwa ? "yes" : "no"));
    }

    // Chase.
    {
      auto onto = build_O_neq(inst);
      auto res  = chase(onto, sig, cfg.chase_depth);
      auto rep  = check_model(res.structure, onto, {true, true});
      std::size_t bad = 0;
      for (auto const& v : rep.violations) {
        bad += v.kind == ViolationKind::inclusion ? 0 : 1;
      }
      suite.expect("chase.assertions", bad == 0,
                   std::to_string(res.structure.size()) + " vertices after "
                       + std::to_string(res.rounds) + " round(s), fixpoint: "
                       + (res.fixpoint ? "yes" : "no"),
                   {{"fixpoint", res.fixpoint}, {"depth", cfg.chase_depth}});
    }

    CommandResult r;
    json          checks = json::array();
    std::size_t   passed = 0, failed = 0, skipped = 0;
    std::ostringstream t;
    t << "verify " << id << " (" << to_string(analysis.verdict) << ")\n";
    for (auto const& rec : suite.records()) {
      checks.push_back({{"name", rec.name},
                        {"property", rec.property},
                        {"verdict", rec.verdict},
                        {"detail", rec.detail},
                        {"payload", rec.payload}});
      passed += rec.verdict == "pass";
      failed += rec.verdict == "fail";
      skipped += rec.verdict == "skipped";
      t << "  " << rec.verdict << std::string(8 - std::min<std::size_t>(7, rec.verdict.size()), ' ')
        << rec.name << ": " << rec.detail << "\n";
    }
    t << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
    json rewrite;
    if (auto const* eq = std::get_if<Equivalent>(&analysis.rewrite)) {
      rewrite = {{"verdict", "equivalent"}, {"path", to_json(eq->path, inst)}};
    } else {
      rewrite = {{"verdict", "unknown"}, {"bound", bound_json(std::get<Unknown>(analysis.rewrite).report)}};
    }
    r.report = {{"command", "verify"},
                {"instance_id", id},
                {"instance", instance_json(inst)},
                {"verdict", to_string(analysis.verdict)},
                {"rewrite", rewrite},
                {"checks", checks},
                {"summary", {{"pass", passed}, {"fail", failed}, {"skipped", skipped}}},
                {"config", to_json(cfg)}};
    r.exit = failed == 0 ? exit_code::ok : exit_code::negative;
    r.text = t.str();
    return r;
  }

}  // namespace thue2dlite
