#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "thue2dlite/error.hpp"
#include "thue2dlite/harness.hpp"

namespace t2d = thue2dlite;

namespace {
  struct Overrides {
    std::size_t max_word_len = 0, max_steps = 0, max_order = 0, depth = 0, max_vertices = 0;
    bool        una = true, pcwa = true, phi_negate_T = false;
    std::string variant;

    std::vector<CLI::Option*> o_word_len;
    std::vector<CLI::Option*> o_steps;
    std::vector<CLI::Option*> o_order;
    std::vector<CLI::Option*> o_depth;
    std::vector<CLI::Option*> o_vertices;
    std::vector<CLI::Option*> o_una;
    std::vector<CLI::Option*> o_pcwa;
    std::vector<CLI::Option*> o_phi;
    std::vector<CLI::Option*> o_variant;

    void apply(t2d::Config& c) const {
      auto given = [](std::vector<CLI::Option*> const& os) {
        return std::any_of(os.begin(), os.end(), [](CLI::Option* x) { return x->count() > 0; });
      };
      if (given(o_word_len)) c.max_word_len = max_word_len;
      if (given(o_steps)) c.max_expansions = max_steps;
      if (given(o_order)) c.max_semigroup_order = max_order;
      if (given(o_depth)) c.chase_depth = depth;
      if (given(o_vertices)) c.enum_max_vertices = max_vertices;
      if (given(o_una)) c.una = una;
      if (given(o_pcwa)) c.pcwa = pcwa;
      if (given(o_phi)) c.phi_negate_T = phi_negate_T;
      if (given(o_variant)) c.variant = *t2d::parse_variant(variant);
    }
  };

  void add_search(CLI::App* app, Overrides& o) {
    o.o_word_len.push_back(app->add_option(
        "--max-word-len", o.max_word_len, "longest word the rewriting search visits (default |l|+|r|+8)"));
    o.o_steps.push_back(app->add_option("--max-steps", o.max_steps, "rewriting search expansions"));
    o.o_order.push_back(
        app->add_option("--max-order", o.max_order, "largest semigroup order to search"));
  }

  void add_variant(CLI::App* app, Overrides& o) {
    o.o_variant.push_back(
        app->add_option("--variant", o.variant, "neq (inequalities) or neg (negation)")
            ->check(CLI::IsMember({"neq", "neg"})));
    o.o_phi.push_back(app->add_flag("--phi-negate-T", o.phi_negate_T,
                                    "also forbid T between distinguished variables of phi"));
  }

  void add_semantics(CLI::App* app, Overrides& o) {
    o.o_una.push_back(
        app->add_flag("--una,!--no-una", o.una, "unique name assumption (default on)"));
    o.o_pcwa.push_back(app->add_flag("--pcwa,!--no-pcwa", o.pcwa,
                                     "partial closed world assumption (default on)"));
  }

  std::string instance_id(std::string const& path) {
    return std::filesystem::path(path).stem().string();
  }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thue systems to DL-Lite ontologies and conjunctive queries"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "print the JSON report instead of text");
  app.fallthrough();

  Overrides   o;
  std::string instance, query, model, onto, out_dir, check;

  auto* compile = app.add_subcommand("compile", "write ontology.onto, query.cq and manifest.json");
  compile->add_option("instance", instance, ".thue file")->required();
  compile->add_option("--out", out_dir, "output directory")->default_val("out");
  add_variant(compile, o);

  auto* rewrite = app.add_subcommand("rewrite", "bounded search for a rewriting path l -> r");
  rewrite->add_option("instance", instance, ".thue file")->required();
  add_search(rewrite, o);

  auto* counter = app.add_subcommand("countermodel", "build and verify a finite countermodel");
  counter->add_option("instance", instance, ".thue file")->required();
  counter->add_option("--out", out_dir, "directory for model.struct and report.json");
  add_variant(counter, o);
  add_search(counter, o);

  auto* eval = app.add_subcommand("eval", "evaluate a (union of) conjunctive queries");
  eval->add_option("query", query, ".cq file")->required();
  eval->add_option("model", model, ".struct file")->required();
  eval->add_option("--onto", onto, "check the model against this .onto file first");
  add_semantics(eval, o);

  auto* checkm = app.add_subcommand("check-model", "check a structure against an ontology");
  checkm->add_option("model", model, ".struct file")->required();
  checkm->add_option("ontology", onto, ".onto file")->required();
  add_semantics(checkm, o);

  auto* verify = app.add_subcommand("verify", "run the verification suite on an instance");
  verify->add_option("instance", instance, ".thue file")->required();
  add_search(verify, o);
  add_variant(verify, o);
  o.o_depth.push_back(verify->add_option("--depth", o.depth, "chase depth"));
  o.o_vertices.push_back(verify->add_option("--max-vertices", o.max_vertices,
                                            "largest enumerated candidate structure"));

  auto* enumerate = app.add_subcommand("enumerate", "exhaustive property run over small structures");
  enumerate->add_option("instance", instance, ".thue file (alphabet and rules)")->required();
  enumerate->add_option("--check", check, "property to check")
      ->required()
      ->check(CLI::IsMember(t2d::enumerate_checks()));
  auto* enum_vertices = enumerate->add_option("--max-vertices", o.max_vertices,
                                              "largest structure size");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForVersion const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return t2d::exit_code::usage;
  }

  try {
    auto cfg = t2d::config_from_env();
    o.apply(cfg);
    t2d::CommandResult r;
    if (*compile) {
      r = t2d::cmd_compile(t2d::parse_thue(t2d::read_file(instance)), cfg.variant, out_dir, cfg);
    } else if (*rewrite) {
      r = t2d::cmd_rewrite(t2d::parse_thue(t2d::read_file(instance)), cfg);
    } else if (*counter) {
      std::optional<std::filesystem::path> out;
      if (!out_dir.empty()) {
        out = out_dir;
      }
      r = t2d::cmd_countermodel(t2d::parse_thue(t2d::read_file(instance)), cfg.variant, out, cfg);
    } else if (*eval) {
      std::optional<t2d::Ontology> ontology;
      if (!onto.empty()) {
        ontology = t2d::parse_onto(t2d::read_file(onto));
      }
      r = t2d::cmd_eval(t2d::parse_ucq(t2d::read_file(query)),
                        t2d::parse_struct(t2d::read_file(model)), ontology, cfg);
    } else if (*checkm) {
      r = t2d::cmd_check_model(t2d::parse_struct(t2d::read_file(model)),
                               t2d::parse_onto(t2d::read_file(onto)), cfg);
    } else if (*verify) {
      r = t2d::cmd_verify(t2d::parse_thue(t2d::read_file(instance)), instance_id(instance), cfg);
    } else if (*enumerate) {
      auto inst = t2d::parse_thue(t2d::read_file(instance));
      auto n    = enum_vertices->count() > 0 ? o.max_vertices
                                             : cfg.enumeration_vertices(inst.letter_count());
      r = t2d::cmd_enumerate(inst, n, check, cfg);
    }
    if (as_json) {
      std::cout << r.report.dump(2) << "\n";
    } else {
      std::cout << r.text;
    }
    return r.exit;
  } catch (t2d::UnsafeQuery const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return t2d::exit_code::input_error;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return t2d::exit_code::input_error;
  }
}
