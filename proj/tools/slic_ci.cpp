// slic-ci: command-line access to every pipeline stage.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "slic/elimgen.hpp"
#include "slic/interp.hpp"
#include "slic/oracle.hpp"
#include "slic/parser.hpp"
#include "slic/shred.hpp"
#include "slic/stan.hpp"
#include "slic/typing.hpp"
#include "slic/typing_ci.hpp"

namespace {

using namespace slic;

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

NameSet name_set(const std::string& s) {
  auto v = split_names(s);
  return {v.begin(), v.end()};
}

std::string join(const NameSet& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void report_violations(const std::string& path, const std::vector<Violation>& vs) {
  for (const auto& v : vs)
    std::cerr << path << ":" << v.loc.line << ":" << v.loc.column << ": " << v.rule << ": " << v.message << "\n";
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw SlicError("cannot write " + path);
  out << text;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("SLIC_SEED");
  if (!s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw SlicError(std::string("SLIC_SEED is not a number: ") + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-type checking, shredding and discrete-parameter elimination"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string input, output, data_path, store_path, other, fixture_path, order;
  std::string x1, x2, x3, zvar, shred_for;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int trials = 20;
  bool count = false, all = false, as_json = false;

  auto* check = app.add_subcommand("check", "infer levels and print the resolved environment");
  check->add_option("input", input, "program")->required();
  check->add_flag("--all", all, "print every entry, not only inferred ones");

  auto* sh = app.add_subcommand("shred", "print the three slices");
  sh->add_option("input", input, "program")->required();
  sh->add_option("--for", shred_for, "CI-shred the model slice with this variable at l2");

  auto* ci = app.add_subcommand("ci", "test whether x2 and x3 are independent given x1");
  ci->add_option("input", input, "program")->required();
  ci->add_option("--x1", x1, "conditioning parameters");
  ci->add_option("--x2", x2, "first independent set");
  ci->add_option("--x3", x3, "second independent set");

  auto* bl = app.add_subcommand("blanket", "Markov blanket of a parameter");
  bl->add_option("input", input, "program")->required();
  bl->add_option("--var", zvar, "parameter")->required();

  auto* tr = app.add_subcommand("transform", "eliminate discrete model parameters");
  tr->add_option("input", input, "program")->required();
  tr->add_option("--order", order, "comma-separated elimination order");

  auto* ev = app.add_subcommand("eval", "evaluate the density at a store");
  ev->add_option("input", input, "program")->required();
  ev->add_option("--data", data_path, "JSON data");
  ev->add_option("--store", store_path, "JSON store")->required();
  ev->add_flag("--count", count, "print evaluation counters");

  auto* pr = app.add_subcommand("preserve", "compare densities of two programs");
  pr->add_option("input", input, "program")->required();
  pr->add_option("--against", other, "second program")->required();
  pr->add_option("--fixture", fixture_path, "JSON fixture with data and example values");
  pr->add_option("--trials", trials, "context draws")->check(CLI::PositiveNumber);
  pr->add_flag("--json", as_json, "emit the report as JSON");

  auto* st = app.add_subcommand("emit-stan", "print Stan code");
  st->add_option("input", input, "program")->required();

  app.add_option("-o,--output", output, "output path");
  app.add_option("--seed", seed, "random seed (overrides SLIC_SEED)");
  app.add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.count("--seed") == 0) seed = seed_from_env();
    Program p = parse_file(input);

    if (*check) {
      TypingReport r = infer_levels(p);
      if (!r.ok) {
        report_violations(input, r.violations);
        return 1;
      }
      std::string line;
      for (const auto& e : r.resolved.entries()) {
        if (!all && p.gamma.at(e.name).slot.concrete()) continue;
        line += (line.empty() ? "" : ", ") + e.name + ": " + e.slot.str();
      }
      write_output(output, line + "\n");
      return 0;
    }
    if (*sh) {
      Gamma g = base_levels(p);
      Shredded parts = shred(g, p.body);
      const char* names[] = {"data", "model", "genquant"};
      if (!shred_for.empty()) {
        Gamma gm = gamma_to_z(g, p.body, shred_for);
        TypingReport r = infer_ci(gm, parts[1]);
        if (!r.ok) {
          report_violations(input, r.violations);
          return 1;
        }
        parts = shred(r.resolved, parts[1]);
        names[0] = "l1";
        names[1] = "l2";
        names[2] = "l3";
      }
      std::string text;
      for (int l = 0; l < 3; ++l) text += std::string("// ") + names[l] + "\n" + pretty(parts[l]);
      write_output(output, text);
      return 0;
    }
    if (*ci) {
      CIPartition part{name_set(x1), name_set(x2), name_set(x3), {}};
      CIQueryResult r = ci_query(p, part);
      if (r.derivable) {
        write_output(output, "derivable\n");
        return 0;
      }
      report_violations(input, r.violations);
      write_output(output, "not derivable\n");
      return 1;
    }
    if (*bl) {
      CIPartition part = markov_blanket(p, zvar);
      NameSet others = part.x2;
      others.erase(zvar);
      std::string text = "blanket: " + join(part.x1) + "\nindependent: " + join(part.x3) + "\n";
      if (!others.empty()) text += "with " + zvar + ": " + join(others) + "\n";
      write_output(output, text);
      return 0;
    }
    if (*tr) {
      Program q = transform_all(p, ElimPlan{split_names(order)});
      write_output(output, pretty(q));
      return 0;
    }
    if (*ev) {
      State store = data_path.empty() ? State{} : load_state(data_path);
      for (const auto& [k, v] : load_state(store_path)) store[k] = v;
      for (const auto& e : p.gamma.entries())
        if (!store.count(e.name)) store[e.name] = default_value(e.type);
      auto [w, counters] = density_counted(p, store);
      std::ostringstream os;
      os.precision(17);
      os << "weight: " << w << "\n";
      if (count) os << "pdf_evals: " << counters.pdf_evals << "\nfactor_evals: " << counters.factor_evals << "\n";
      write_output(output, os.str());
      return 0;
    }
    if (*pr) {
      Program q = parse_file(other);
      Fixture fx = load_fixture(fixture_path);
      PreservationReport r = check_preservation(p, q, fx, trials, tol, seed);
      write_output(output, (as_json ? r.to_json() : r.to_text()) + "\n");
      return r.pass ? 0 : 1;
    }
    if (*st) {
      write_output(output, emit_stan(p));
      return 0;
    }
  } catch (const SlicError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
