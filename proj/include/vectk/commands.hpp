#pragma once

#include "vectk/json_io.hpp"
#include "vectk/kclass.hpp"

namespace vectk {

struct command_report {
  ordered_json doc;
  std::string summary;
  errc status = errc::ok;
  std::optional<ordered_json> artifact;  // e.g. the bundle written by approximate
};

// 0 success, 1 verdict failure (verification/obstruction/no gap), 2 input error
int exit_class(errc code);

tolerances tolerances_from_json(const ordered_json& opts);

std::string group_string(int free_rank, const std::vector<bigint>& torsion);

// object-level commands
command_report cohomology_command(cohomology_cache& cc, int degree);
command_report dd_command(cohomology_cache& cc, const u1_cochain& c);
command_report obstruction_command(cohomology_cache& cc, const u1_cochain& c, const bigint& rank);
command_report approximate_command(const fredholm_family& f, double lambda_max,
                                   const tolerances& tol);
command_report approximate_command(const twisted_family& t, double lambda_max,
                                   const tolerances& tol);
command_report verify_command(const vectorial_bundle& vb, const u1_cochain* twist,
                              const tolerances& tol);
command_report index_command(const vectorial_bundle& vb);
command_report scenario_command(const std::string& name);

}  // namespace vectk
