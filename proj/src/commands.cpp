#include "vectk/commands.hpp"

#include <sstream>

namespace vectk {

int exit_class(errc code) {
  switch (code) {
    case errc::ok:
      return 0;
    case errc::verification_failed:
    case errc::obstructed:
    case errc::no_gap:
    case errc::incompatible_section:
    case errc::inconsistent_index:
      return 1;
    default:
      return 2;
  }
}

tolerances tolerances_from_json(const ordered_json& opts) {
  tolerances tol;
  if (!opts.is_object()) return tol;
  tol.eps_herm = opts.value("eps_herm", tol.eps_herm);
  tol.eps_orth = opts.value("eps_orth", tol.eps_orth);
  tol.eps_eig = opts.value("eps_eig", tol.eps_eig);
  tol.gap_tol = opts.value("gap_tol", tol.gap_tol);
  tol.eps_doteq = opts.value("eps_doteq", tol.eps_doteq);
  tol.eps_scalar = opts.value("eps_scalar", tol.eps_scalar);
  tol.eps_compat = opts.value("eps_compat", tol.eps_compat);
  tol.support_tol = opts.value("support_tol", tol.support_tol);
  tol.lipschitz_bound = opts.value("lipschitz_bound", tol.lipschitz_bound);
  tol.q_max = opts.value("q_max", tol.q_max);
  tol.jobs = opts.value("jobs", tol.jobs);
  for (double v : {tol.eps_herm, tol.eps_orth, tol.eps_eig, tol.gap_tol, tol.eps_doteq,
                   tol.eps_scalar, tol.eps_compat, tol.support_tol})
    if (!(v > 0)) fail(errc::bad_input, "tolerances must be positive");
  if (tol.jobs < 1) fail(errc::bad_input, "jobs must be >= 1");
  if (tol.q_max < 1) fail(errc::bad_input, "q_max must be >= 1");
  return tol;
}

std::string group_string(int free_rank, const std::vector<bigint>& torsion) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " x ";
    first = false;
  };
  if (free_rank == 1) {
    sep();
    os << "Z";
  } else if (free_rank > 1) {
    sep();
    os << "Z^" << free_rank;
  }
  for (const auto& d : torsion) {
    sep();
    os << "Z/" << d.str();
  }
  if (first) os << "0";
  return os.str();
}

command_report cohomology_command(cohomology_cache& cc, int degree) {
  if (degree < 0) fail(errc::degree_out_of_range, "cohomology degree must be nonnegative");
  cohomology_group g;
  g.degree = degree;
  // above the dimension of the complex every group vanishes
  if (degree <= cc.complex().dim()) g = cc.cohomology(degree);
  command_report rep;
  rep.doc["command"] = "cohomology";
  rep.doc["degree"] = degree;
  rep.doc["free_rank"] = g.free_rank;
  ordered_json tors = ordered_json::array();
  for (const auto& d : g.torsion) tors.push_back(d.str());
  rep.doc["torsion"] = std::move(tors);
  rep.doc["group"] = group_string(g.free_rank, g.torsion);
  rep.summary = "H^" + std::to_string(degree) + " = " + group_string(g.free_rank, g.torsion);
  return rep;
}

namespace {

ordered_json coords_to_json(const class_coordinates& coords) {
  ordered_json j;
  ordered_json free = ordered_json::array();
  for (const auto& x : coords.free_coords) free.push_back(x.str());
  j["free"] = std::move(free);
  ordered_json tors = ordered_json::array();
  for (size_t i = 0; i < coords.torsion_coords.size(); ++i) {
    ordered_json t;
    t["modulus"] = coords.torsion_factors[i].str();
    t["coordinate"] = coords.torsion_coords[i].str();
    tors.push_back(std::move(t));
  }
  j["torsion"] = std::move(tors);
  j["zero"] = coords.is_zero();
  j["order"] = coords.order().str();  // "0" means infinite
  return j;
}

}  // namespace

command_report dd_command(cohomology_cache& cc, const u1_cochain& c) {
  auto info = dd_class(cc, c);
  command_report rep;
  rep.doc["command"] = "dd";
  rep.doc["class"] = coords_to_json(info.coords);
  if (info.zero()) {
    auto b = solve_u1_coboundary(cc, c);
    if (b) rep.doc["coboundary_witness"] = u1_cochain_to_json(cc.complex(), *b);
  }
  rep.summary = info.zero() ? "dd class: zero" : "dd class: order " + info.order().str();
  return rep;
}

command_report obstruction_command(cohomology_cache& cc, const u1_cochain& c, const bigint& rank) {
  auto res = rank_obstruction(cc, c, rank);
  command_report rep;
  rep.doc["command"] = "obstruction";
  rep.doc["rank"] = rank.str();
  rep.doc["solvable"] = res.solvable;
  if (res.solvable) {
    rep.doc["witness"] = u1_cochain_to_json(cc.complex(), *res.witness);
    rep.summary = "rank " + rank.str() + ": Solvable";
  } else {
    rep.status = errc::obstructed;
    rep.summary = "rank " + rank.str() + ": Obstructed";
  }
  return rep;
}

namespace {

void attach_bundle_report(command_report& rep, const approx_result& res, const tolerances& tol) {
  const vectorial_bundle& vb = res.bundle;
  const auto& k = *vb.base;
  ordered_json mus = ordered_json::object();
  for (const auto& [v, mu] : res.mu_per_patch) mus[std::to_string(v)] = round12(mu);
  rep.doc["mu_per_patch"] = std::move(mus);
  const auto idx = graded_index(vb);
  rep.doc["index"] = idx;
  const auto supp = support(vb, tol.support_tol);
  ordered_json sj = ordered_json::array();
  for (int sid : supp) sj.push_back(k.sample_key(sid));
  rep.doc["support"] = std::move(sj);
  rep.doc["support_size"] = supp.size();
  if (!res.spectra_jumps.empty()) {
    ordered_json jumps = ordered_json::array();
    for (auto [a, b] : res.spectra_jumps) jumps.push_back({k.sample_key(a), k.sample_key(b)});
    rep.doc["spectra_jumps"] = std::move(jumps);
  }
  rep.doc["verification"] = verify_report_to_json(res.verification);

  // Chern invariant of a line-bundle output over a closed oriented surface
  if (!vb.twist) {
    bool all_lines = true;
    for (const auto& [v, by_sample] : vb.fibers)
      for (const auto& [sid, f] : by_sample)
        if (f.r0 != 1 || f.r1 != 0 || !f.ambient) all_lines = false;
    if (all_lines && !vb.fibers.empty()) {
      try {
        const u1_cochain turns = extract_line_turns(vb, tol);
        rep.doc["kernel_chern"] = static_cast<long long>(chern_number(k, turns));
      } catch (const error&) {
        // base is not a closed oriented surface; nothing to report
      }
    }
  }

  std::ostringstream os;
  os << "index [";
  for (size_t i = 0; i < idx.size(); ++i) os << (i ? " " : "") << idx[i];
  os << "], support " << supp.size() << " of " << k.sample_count()
     << " samples, verification " << (res.verification.pass ? "PASS" : "FAIL");
  rep.summary = os.str();
}

}  // namespace

command_report approximate_command(const fredholm_family& f, double lambda_max,
                                   const tolerances& tol) {
  command_report rep;
  rep.doc["command"] = "approximate";
  rep.doc["twisted"] = false;
  rep.doc["lambda_max"] = round12(lambda_max);
  approx_result res = approximate_family(f, lambda_max, tol);
  attach_bundle_report(rep, res, tol);
  if (!res.verification.pass) rep.status = errc::verification_failed;
  rep.artifact = bundle_to_json(res.bundle);
  return rep;
}

command_report approximate_command(const twisted_family& t, double lambda_max,
                                   const tolerances& tol) {
  command_report rep;
  rep.doc["command"] = "approximate";
  rep.doc["twisted"] = true;
  rep.doc["lambda_max"] = round12(lambda_max);
  approx_result res = approximate_twisted_family(t, lambda_max, tol);
  rep.doc["dd_cocycle"] = u1_cochain_to_json(*t.base, *res.bundle.twist);
  attach_bundle_report(rep, res, tol);
  if (!res.verification.pass) rep.status = errc::verification_failed;
  rep.artifact = bundle_to_json(res.bundle);
  return rep;
}

command_report verify_command(const vectorial_bundle& vb, const u1_cochain* twist,
                              const tolerances& tol) {
  command_report rep;
  rep.doc["command"] = "verify";
  verify_report vr;
  if (twist) {
    vr = verify_twisted(vb, *twist, tol);
    rep.doc["twisted"] = true;
  } else if (vb.twist) {
    vr = verify_twisted(vb, *vb.twist, tol);
    rep.doc["twisted"] = true;
  } else {
    vr = verify_vectorial(vb, tol);
    rep.doc["twisted"] = false;
  }
  rep.doc["verification"] = verify_report_to_json(vr);
  rep.summary = vr.pass ? "verification PASS" : "verification FAIL";
  if (!vr.pass) rep.status = errc::verification_failed;
  return rep;
}

command_report index_command(const vectorial_bundle& vb) {
  const auto idx = graded_index(vb);
  command_report rep;
  rep.doc["command"] = "index";
  rep.doc["index"] = idx;
  std::ostringstream os;
  os << "index [";
  for (size_t i = 0; i < idx.size(); ++i) os << (i ? " " : "") << idx[i];
  os << "]";
  rep.summary = os.str();
  return rep;
}

command_report scenario_command(const std::string& name) {
  scenario sc = builtin_scenario(name);
  command_report rep;
  rep.doc["command"] = "scenario";
  rep.doc["name"] = sc.name;
  ordered_json files = ordered_json::object();
  files["complex.json"] = complex_to_json(*sc.base);

  ordered_json expected;
  expected["name"] = sc.name;
  expected["lambda_max"] = round12(sc.lambda_max);
  expected["index"] = sc.expected_index;
  ordered_json supp = ordered_json::array();
  for (int sid : sc.expected_support) supp.push_back(sc.base->sample_key(sid));
  expected["support"] = std::move(supp);
  if (sc.expected_chern) {
    expected["kernel_chern"] = *sc.expected_chern;
    expected["orientation"] = sc.orientation;
  }
  if (sc.expected_dd_order) expected["dd_order"] = *sc.expected_dd_order;

  if (sc.family) {
    ordered_json fam = family_to_json(*sc.family);
    ordered_json referenced;
    referenced["complex_file"] = "complex.json";
    referenced["shape"] = fam["shape"];
    referenced["samples"] = fam["samples"];
    files["family.json"] = std::move(referenced);
  }
  if (sc.twisted) {
    ordered_json fam = twisted_family_to_json(*sc.twisted);
    ordered_json referenced;
    referenced["complex_file"] = "complex.json";
    referenced["rank"] = fam["rank"];
    referenced["patches"] = fam["patches"];
    referenced["lifts"] = fam["lifts"];
    files["twisted_family.json"] = std::move(referenced);
    cohomology_cache cc(sc.base);
    const u1_cochain c = dd_cocycle(*sc.base, sc.twisted->lifts);
    files["cocycle.json"] = u1_cochain_to_json(*sc.base, c);
    expected["dd_class"] = coords_to_json(dd_class(cc, c).coords);
  }
  files["expected.json"] = std::move(expected);
  rep.doc["files"] = std::move(files);
  rep.summary = "scenario " + sc.name + ": " + std::to_string(rep.doc["files"].size()) + " files";
  return rep;
}

}  // namespace vectk
