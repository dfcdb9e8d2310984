// tangentw: verification suites, hom enumeration, evaluation and
// expression search for the tangent structure on Weil rigs.
//
// Exit codes: 0 all requested checks pass, 1 some check failed, 2 bad
// flags or input, 3 an enumeration or search budget ran out.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tangent/suite.hpp"

namespace {

using tangent::json;
using tangent::suite::Config;
namespace weil = tangent::weil;

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct Output {
  std::string out;
  std::string format = "json";
};

void emit_text_report(std::ostream& os, const json& r) {
  if (r.contains("reports")) {
    for (const auto& sub : r["reports"]) emit_text_report(os, sub);
    os << (r["pass"].get<bool>() ? "PASS" : "FAIL") << " report\n";
    return;
  }
  std::size_t passed = 0;
  for (const auto& item : r["data"]) {
    const bool ok = item["pass"].get<bool>();
    passed += ok;
    if (!ok) {
      os << "FAIL " << item["diagram_id"].get<std::string>() << " [" << item["object"].get<std::string>() << "]";
      if (item.contains("counterexample")) os << " " << item["counterexample"].dump();
      os << "\n";
    }
  }
  if (r.contains("notes")) {
    for (const auto& n : r["notes"]) os << "note: " << n.get<std::string>() << "\n";
  }
  os << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["check"].get<std::string>() << ": " << passed << "/"
     << r["data"].size() << " items\n";
}

void write(const Output& o, const json& j) {
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw tangent::Error("cannot open " + o.out + " for writing");
  }
  std::ostream& os = o.out.empty() ? std::cout : file;
  if (o.format == "text" && j.contains("check") && (j.contains("data") || j.contains("reports"))) {
    emit_text_report(os, j);
  } else if (o.format == "text" && j.contains("term")) {
    os << j["term"].get<std::string>() << "\n";
  } else {
    os << j.dump(2) << "\n";
  }
}

int finish(const Output& o, json j) {
  j["schema"] = tangent::suite::kSchema;
  write(o, j);
  return j.value("pass", true) ? kPass : kFail;
}

json parse_json_arg(const std::string& s, const char* what) {
  try {
    return json::parse(s);
  } catch (const json::exception& e) {
    throw tangent::ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tangent structure on Weil rigs: verification and search"};
  app.require_subcommand(1);

  Config cfg;
  Output out;
  std::string truncation_file;
  std::string hom_arg, element_arg, dom_arg, cod_arg, component_arg, object_arg = "[]";
  unsigned jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--max-factors", cfg.max_factors, "factors per Weil object")->check(CLI::Range(1, 16));
    sub->add_option("--max-width", cfg.max_width, "width per factor")->check(CLI::Range(1, 15));
    sub->add_option("--coeff-bound", cfg.coeff_bound, "largest coefficient in enumerated homs");
    sub->add_option("--depth", cfg.depth, "search depth budget")->check(CLI::PositiveNumber);
    sub->add_option("--truncation", truncation_file, "JSON truncation file")->check(CLI::ExistingFile);
    sub->add_option("--out", out.out, "write the report here instead of stdout");
    sub->add_option("--format", out.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
  };

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->require_subcommand(1);
  auto* v_tangent = verify->add_subcommand("tangent", "tangent-category axioms and limit universality on Weil rigs");
  auto* v_functor = verify->add_subcommand("functor", "tangent functor checks: (Id, id), (T, c), a non-example");
  auto* v_module = verify->add_subcommand("module", "tangent module suite on a truncation");
  auto* v_embedding = verify->add_subcommand("embedding", "the Yoneda embedding into tangent modules");
  auto* v_repr = verify->add_subcommand("representability", "the currying bijection for ΔD");
  auto* v_coherence = verify->add_subcommand("coherence", "expression search, naturality and monoidality");
  for (auto* s : {v_tangent, v_functor, v_module, v_embedding, v_repr, v_coherence}) add_common(s);

  auto* homs = app.add_subcommand("homs", "enumerate Weil-rig homs with bounded coefficients");
  add_common(homs);
  homs->add_option("--dom", dom_arg, "domain widths, e.g. [1]")->required();
  homs->add_option("--cod", cod_arg, "codomain widths, e.g. [1,1]")->required();

  auto* eval = app.add_subcommand("eval", "apply a hom to an element");
  add_common(eval);
  auto* eval_hom = eval->add_option("--hom", hom_arg, "hom as JSON");
  auto* eval_component = eval->add_option("--component", component_arg, "structure component: p, e, m, l, c, w, pi_i(n)");
  eval_hom->excludes(eval_component);
  eval->add_option("--object", object_arg, "object the component sits at, e.g. []");
  eval->add_option("--element", element_arg, "element of the domain as JSON; omitted prints the hom");

  auto* express = app.add_subcommand("express", "express a hom as a structural term");
  add_common(express);
  express->add_option("--hom", hom_arg, "hom as JSON")->required();

  auto* report = app.add_subcommand("report", "run every suite and aggregate the reports");
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  cfg.jobs = jobs;

  std::string check = "verify";
  try {
    if (!truncation_file.empty()) {
      std::ifstream in(truncation_file);
      cfg.truncation = parse_json_arg(std::string(std::istreambuf_iterator<char>(in), {}), "truncation");
    }
    namespace suite = tangent::suite;
    if (v_tangent->parsed()) {
      check = "verify tangent";
      if (cfg.coeff_bound < 1) throw CLI::ValidationError("--coeff-bound", "must be at least 1");
      return finish(out, suite::run_tangent(cfg).to_json());
    }
    if (v_functor->parsed()) {
      check = "verify functor";
      return finish(out, suite::run_functor(cfg).to_json());
    }
    if (v_module->parsed()) {
      check = "verify module";
      return finish(out, suite::run_module(cfg).to_json());
    }
    if (v_embedding->parsed()) {
      check = "verify embedding";
      return finish(out, suite::run_embedding(cfg).to_json());
    }
    if (v_repr->parsed()) {
      check = "verify representability";
      return finish(out, suite::run_representability(cfg).to_json());
    }
    if (v_coherence->parsed()) {
      check = "coherence";
      return finish(out, suite::run_coherence(cfg).to_json());
    }
    if (homs->parsed()) {
      check = "homs";
      const auto a = parse_json_arg(dom_arg, "--dom").get<weil::WeilObject>();
      const auto b = parse_json_arg(cod_arg, "--cod").get<weil::WeilObject>();
      const auto hs = weil::enumerate_homs(a, b, cfg.coeff_bound);
      json list = json::array();
      for (const auto& f : hs) list.push_back(f);
      return finish(out, json{{"check", check}, {"pass", true}, {"dom", a}, {"cod", b},
                              {"coeff_bound", cfg.coeff_bound}, {"count", hs.size()}, {"homs", list}});
    }
    if (eval->parsed()) {
      check = "eval";
      if (hom_arg.empty() && component_arg.empty()) {
        throw CLI::ValidationError("eval", "one of --hom or --component is required");
      }
      const auto f = component_arg.empty()
                         ? weil::hom_from_json(parse_json_arg(hom_arg, "--hom"))
                         : tangent::weil_tangent::component(component_arg,
                                                            parse_json_arg(object_arg, "--object").get<weil::WeilObject>());
      if (element_arg.empty()) {
        return finish(out, json{{"check", check}, {"pass", true}, {"hom", f}, {"display", f.to_string()}});
      }
      const auto u = weil::element_from_json(parse_json_arg(element_arg, "--element"), f.dom());
      const auto v = weil::apply_hom(f, u);
      return finish(out, json{{"check", check}, {"pass", true}, {"input", u.to_string()},
                              {"output", v.to_string()}, {"element", weil::element_to_json(v)}});
    }
    if (express->parsed()) {
      check = "express";
      const auto f = weil::hom_from_json(parse_json_arg(hom_arg, "--hom"));
      tangent::coherence::ExpressOptions opt;
      opt.max_depth = cfg.depth;
      const auto res = tangent::coherence::express(f, opt);
      json table = json::array();
      const tangent::api::WeilInstance inst;
      for (const auto& x : {weil::WeilObject{}, weil::WeilObject{1}}) {
        table.push_back(json{{"object", x.to_string()}, {"component", tangent::coherence::eval(*res.term, inst, x)}});
      }
      return finish(out, json{{"check", check}, {"pass", true}, {"term", tangent::coherence::to_string(res.term)},
                              {"depth", res.depth}, {"target", f}, {"components", table}});
    }
    if (report->parsed()) {
      check = "report";
      json j = suite::run_all(cfg);
      write(out, j);
      return j["pass"].get<bool>() ? kPass : kFail;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const tangent::BudgetExceeded& e) {
    write(out, json{{"schema", tangent::suite::kSchema}, {"check", check}, {"pass", false}, {"budget_exhausted", e.what()}});
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const tangent::ExpressBudgetExceeded& e) {
    write(out, json{{"schema", tangent::suite::kSchema}, {"check", check}, {"pass", false}, {"budget_exhausted", e.what()}});
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const tangent::TruncationTooLarge& e) {
    write(out, json{{"schema", tangent::suite::kSchema}, {"check", check}, {"pass", false}, {"budget_exhausted", e.what()}});
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const tangent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
