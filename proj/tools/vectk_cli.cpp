// vectk command line: scenario/input files in, JSON reports and bundle files
// out.  Talks to the library exclusively through the C interface.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vectk.h"

namespace {

using nlohmann::ordered_json;

[[noreturn]] void die_input(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(2);
}

void check(vectk_status st, const std::string& what) {
  if (st == VECTK_OK) return;
  std::cerr << "error: " << what << ": " << vectk_last_error() << "\n";
  std::exit(st == VECTK_FAIL ? 1 : 2);
}

// summary to stdout, then the report document; exit code from the verdict
int finish(vectk_report* rep, const std::string& report_path = "") {
  std::cout << vectk_report_summary(rep) << "\n";
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) die_input("cannot write '" + report_path + "'");
    out << vectk_report_json(rep);
  } else {
    std::cout << vectk_report_json(rep);
  }
  const int code = vectk_report_exit_code(rep);
  vectk_report_free(rep);
  return code;
}

std::string options_json(double lambda_max, double tol_doteq, double gap_tol, int jobs) {
  ordered_json j;
  j["lambda_max"] = lambda_max;
  if (tol_doteq > 0) j["eps_doteq"] = tol_doteq;
  if (gap_tol > 0) j["gap_tol"] = gap_tol;
  j["jobs"] = jobs;
  return j.dump();
}

int default_jobs() {
  if (const char* env = std::getenv("VECTK_JOBS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vectk — vectorial bundles from sampled Fredholm families"};
  app.require_subcommand(1);

  std::string complex_path, cocycle_path, lifts_path, family_path, bundle_path, out_path,
      report_path;
  int degree = 3;
  long rank = 1;
  double lambda_max = 1.0;
  double tol_doteq = 0;
  double gap_tol = 0;
  int jobs = default_jobs();
  std::string scenario_name;

  auto* cmd_cohomology = app.add_subcommand("cohomology", "integral cohomology of a complex");
  cmd_cohomology->add_option("--complex", complex_path, "complex JSON file")->required();
  cmd_cohomology->add_option("--degree", degree, "cohomology degree");

  auto* cmd_dd = app.add_subcommand("dd", "class of a U(1) 2-cocycle in H^3");
  cmd_dd->add_option("--complex", complex_path, "complex JSON file")->required();
  cmd_dd->add_option("--cocycle", cocycle_path, "cochain JSON file")->required();
  cmd_dd->add_option("--out", report_path, "write the JSON report here");

  auto* cmd_obstruction = app.add_subcommand("obstruction", "rank obstruction of a twist");
  cmd_obstruction->add_option("--complex", complex_path, "complex JSON file")->required();
  cmd_obstruction->add_option("--cocycle", cocycle_path, "cochain JSON file")->required();
  cmd_obstruction->add_option("--rank", rank, "bundle rank to test")->required();
  cmd_obstruction->add_option("--out", out_path, "write the witness cochain here when solvable");

  auto* cmd_approximate =
      app.add_subcommand("approximate", "truncate a family into a vectorial bundle");
  cmd_approximate->add_option("--family", family_path, "family JSON file")->required();
  cmd_approximate->add_option("--lifts", lifts_path, "unitary lift system JSON file");
  cmd_approximate->add_option("--lambda-max", lambda_max, "spectral search ceiling");
  cmd_approximate->add_option("--tol-doteq", tol_doteq, "low-spectrum agreement tolerance");
  cmd_approximate->add_option("--gap-tol", gap_tol, "spectral gap clearance");
  cmd_approximate->add_option("--jobs", jobs, "worker threads (VECTK_JOBS fallback)");
  cmd_approximate->add_option("--out", out_path, "write the bundle JSON here")->required();
  cmd_approximate->add_option("--report", report_path, "write the JSON report here");

  auto* cmd_verify = app.add_subcommand("verify", "check the (twisted) cocycle conditions");
  cmd_verify->add_option("--bundle", bundle_path, "bundle JSON file")->required();
  cmd_verify->add_option("--cocycle", cocycle_path, "twist cochain JSON file");
  cmd_verify->add_option("--tol-doteq", tol_doteq, "low-spectrum agreement tolerance");
  cmd_verify->add_option("--jobs", jobs, "worker threads");
  cmd_verify->add_option("--out", report_path, "write the JSON report here");

  auto* cmd_index = app.add_subcommand("index", "graded index per connected component");
  cmd_index->add_option("--bundle", bundle_path, "bundle JSON file")->required();

  auto* cmd_scenario = app.add_subcommand("scenario", "write a built-in scenario to a directory");
  cmd_scenario->add_option("--name", scenario_name, "point-operator | flow-s1 | bott-s2 | pauli-torsion")
      ->required();
  cmd_scenario->add_option("--out", out_path, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (cmd_cohomology->parsed()) {
    vectk_complex* cx = nullptr;
    check(vectk_complex_from_file(complex_path.c_str(), &cx), complex_path);
    vectk_report* rep = nullptr;
    check(vectk_cohomology(cx, degree, &rep), "cohomology");
    vectk_complex_free(cx);
    return finish(rep);
  }

  if (cmd_dd->parsed()) {
    vectk_complex* cx = nullptr;
    check(vectk_complex_from_file(complex_path.c_str(), &cx), complex_path);
    vectk_cochain* c = nullptr;
    check(vectk_cochain_from_file(cx, cocycle_path.c_str(), &c), cocycle_path);
    vectk_report* rep = nullptr;
    check(vectk_dd_class(cx, c, &rep), "dd");
    vectk_cochain_free(c);
    vectk_complex_free(cx);
    return finish(rep, report_path);
  }

  if (cmd_obstruction->parsed()) {
    vectk_complex* cx = nullptr;
    check(vectk_complex_from_file(complex_path.c_str(), &cx), complex_path);
    vectk_cochain* c = nullptr;
    check(vectk_cochain_from_file(cx, cocycle_path.c_str(), &c), cocycle_path);
    vectk_report* rep = nullptr;
    check(vectk_rank_obstruction(cx, c, rank, &rep), "obstruction");
    vectk_cochain_free(c);
    vectk_complex_free(cx);
    if (!out_path.empty()) {
      const ordered_json doc = ordered_json::parse(vectk_report_json(rep));
      if (doc.contains("witness")) {
        std::ofstream out(out_path);
        if (!out) die_input("cannot write '" + out_path + "'");
        out << doc["witness"].dump(2) << "\n";
      }
    }
    return finish(rep);
  }

  if (cmd_approximate->parsed()) {
    vectk_family* fam = nullptr;
    // a separate lift file turns a square plain family into a twisted one
    if (!lifts_path.empty()) {
      std::ifstream fin(family_path);
      if (!fin) die_input("cannot open '" + family_path + "'");
      ordered_json merged = ordered_json::parse(fin, nullptr, false);
      if (merged.is_discarded()) die_input("malformed JSON in '" + family_path + "'");
      std::ifstream lin(lifts_path);
      if (!lin) die_input("cannot open '" + lifts_path + "'");
      const ordered_json lifts_doc = ordered_json::parse(lin, nullptr, false);
      if (lifts_doc.is_discarded()) die_input("malformed JSON in '" + lifts_path + "'");
      merged["lifts"] = lifts_doc;
      const std::string base_dir = std::filesystem::path(family_path).parent_path().string();
      check(vectk_family_from_json(merged.dump().c_str(), base_dir.c_str(), &fam), family_path);
    } else {
      check(vectk_family_from_file(family_path.c_str(), &fam), family_path);
    }
    vectk_bundle* bundle = nullptr;
    vectk_report* rep = nullptr;
    check(vectk_approximate(fam, options_json(lambda_max, tol_doteq, gap_tol, jobs).c_str(),
                            &bundle, &rep),
          "approximate");
    vectk_family_free(fam);
    char* text = nullptr;
    check(vectk_bundle_to_json(bundle, &text), "bundle serialization");
    {
      std::ofstream out(out_path);
      if (!out) die_input("cannot write '" + out_path + "'");
      out << text;
    }
    vectk_string_free(text);
    vectk_bundle_free(bundle);
    return finish(rep, report_path);
  }

  if (cmd_verify->parsed()) {
    vectk_bundle* bundle = nullptr;
    check(vectk_bundle_from_file(bundle_path.c_str(), &bundle), bundle_path);
    vectk_cochain* twist = nullptr;
    if (!cocycle_path.empty()) {
      vectk_complex* cx = nullptr;
      check(vectk_bundle_complex(bundle, &cx), "bundle complex");
      check(vectk_cochain_from_file(cx, cocycle_path.c_str(), &twist), cocycle_path);
      vectk_complex_free(cx);
    }
    vectk_report* rep = nullptr;
    check(vectk_verify(bundle, twist, options_json(lambda_max, tol_doteq, gap_tol, jobs).c_str(),
                       &rep),
          "verify");
    if (twist) vectk_cochain_free(twist);
    vectk_bundle_free(bundle);
    return finish(rep, report_path);
  }

  if (cmd_index->parsed()) {
    vectk_bundle* bundle = nullptr;
    check(vectk_bundle_from_file(bundle_path.c_str(), &bundle), bundle_path);
    vectk_report* rep = nullptr;
    check(vectk_bundle_index(bundle, &rep), "index");
    vectk_bundle_free(bundle);
    return finish(rep);
  }

  if (cmd_scenario->parsed()) {
    vectk_report* rep = nullptr;
    check(vectk_scenario(scenario_name.c_str(), &rep), scenario_name);
    const ordered_json doc = ordered_json::parse(vectk_report_json(rep));
    std::filesystem::create_directories(out_path);
    for (auto it = doc["files"].begin(); it != doc["files"].end(); ++it) {
      const std::string path = (std::filesystem::path(out_path) / it.key()).string();
      std::ofstream out(path);
      if (!out) die_input("cannot write '" + path + "'");
      out << it.value().dump(2) << "\n";
    }
    std::cout << vectk_report_summary(rep) << " -> " << out_path << "\n";
    vectk_report_free(rep);
    return 0;
  }

  return 2;
}
