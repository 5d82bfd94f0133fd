#pragma once

#include <json.hpp>

#include "vectk/approx.hpp"
#include "vectk/scenario.hpp"

namespace vectk {

using ordered_json = nlohmann::ordered_json;

// doubles in reports are rounded to 12 significant digits before storing, so
// serialized output is reproducible digit for digit
double round12(double x);
ordered_json mu_to_json(double mu);  // "inf" sentinel for full agreement

ordered_json matrix_to_json(const cmat& m);
cmat matrix_from_json(const ordered_json& j);

ordered_json complex_to_json(const simplicial_complex& k);
simplicial_complex complex_from_json(const ordered_json& j);

ordered_json u1_cochain_to_json(const simplicial_complex& k, const u1_cochain& c);
u1_cochain u1_cochain_from_json(const simplicial_complex& k, const ordered_json& j);

ordered_json integer_cochain_to_json(const simplicial_complex& k, const integer_cochain& c);

ordered_json family_to_json(const fredholm_family& f);
fredholm_family family_from_json(std::shared_ptr<const simplicial_complex> base,
                                 const ordered_json& j);

ordered_json twisted_family_to_json(const twisted_family& t);
twisted_family twisted_family_from_json(std::shared_ptr<const simplicial_complex> base,
                                        const ordered_json& j);

ordered_json lifts_to_json(const simplicial_complex& k, const unitary_lift_system& lifts);
unitary_lift_system lifts_from_json(const simplicial_complex& k, const ordered_json& j);

ordered_json bundle_to_json(const vectorial_bundle& vb);
vectorial_bundle bundle_from_json(std::shared_ptr<const simplicial_complex> base,
                                  const ordered_json& j);

ordered_json verify_report_to_json(const verify_report& rep);

// embedded complex ("complex") or referenced one ("complex_file", resolved
// against base_dir)
std::shared_ptr<const simplicial_complex> load_embedded_complex(const ordered_json& j,
                                                                const std::string& base_dir);

ordered_json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const ordered_json& doc);

}  // namespace vectk
