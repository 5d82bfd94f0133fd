#include "vectk.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>

#include "vectk/commands.hpp"

using namespace vectk;

struct vectk_complex {
  std::shared_ptr<const simplicial_complex> k;
  std::shared_ptr<cohomology_cache> cache;
  cohomology_cache& cc() {
    if (!cache) cache = std::make_shared<cohomology_cache>(k);
    return *cache;
  }
};

struct vectk_cochain {
  u1_cochain c;
};

struct vectk_family {
  std::optional<fredholm_family> plain;
  std::optional<twisted_family> twisted;
};

struct vectk_bundle {
  vectorial_bundle vb;
};

struct vectk_report {
  command_report rep;
  std::string json_text;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

vectk_status status_of(errc code) {
  switch (exit_class(code)) {
    case 0:
      return VECTK_OK;
    case 1:
      return VECTK_FAIL;
    default:
      return code == errc::internal ? VECTK_EINTERNAL : VECTK_EINVAL;
  }
}

template <typename Fn>
vectk_status guard(Fn&& fn) {
  try {
    fn();
    return VECTK_OK;
  } catch (const error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VECTK_EINTERNAL;
  }
}

vectk_report* wrap_report(command_report rep) {
  auto* out = new vectk_report{std::move(rep), "", ""};
  out->json_text = out->rep.doc.dump(2) + "\n";
  out->summary = out->rep.summary;
  return out;
}

ordered_json parse_options(const char* options_json) {
  if (!options_json || !*options_json) return ordered_json::object();
  try {
    return ordered_json::parse(options_json);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::bad_input, std::string("malformed options JSON: ") + e.what());
  }
}

std::string dir_of(const char* path) {
  return std::filesystem::path(path).parent_path().string();
}

void load_family_doc(vectk_family& f, const ordered_json& doc, const std::string& base_dir) {
  auto base = load_embedded_complex(doc, base_dir);
  if (doc.contains("patches") || doc.contains("lifts"))
    f.twisted = twisted_family_from_json(base, doc);
  else
    f.plain = family_from_json(base, doc);
}

}  // namespace

extern "C" {

const char* vectk_version(void) { return "0.1.0"; }

const char* vectk_last_error(void) { return g_last_error.c_str(); }

void vectk_string_free(char* s) { std::free(s); }

vectk_status vectk_complex_from_json(const char* text, vectk_complex** out) {
  return guard([&] {
    if (!text || !out) fail(errc::bad_input, "null argument");
    auto doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(errc::bad_input, "malformed JSON");
    auto k = std::make_shared<simplicial_complex>(complex_from_json(doc));
    *out = new vectk_complex{std::move(k), nullptr};
  });
}

vectk_status vectk_complex_from_file(const char* path, vectk_complex** out) {
  return guard([&] {
    if (!path || !out) fail(errc::bad_input, "null argument");
    auto k = std::make_shared<simplicial_complex>(complex_from_json(load_json_file(path)));
    *out = new vectk_complex{std::move(k), nullptr};
  });
}

void vectk_complex_free(vectk_complex* c) { delete c; }

vectk_status vectk_cochain_from_json(const vectk_complex* cx, const char* text,
                                     vectk_cochain** out) {
  return guard([&] {
    if (!cx || !text || !out) fail(errc::bad_input, "null argument");
    auto doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(errc::bad_input, "malformed JSON");
    *out = new vectk_cochain{u1_cochain_from_json(*cx->k, doc)};
  });
}

vectk_status vectk_cochain_from_file(const vectk_complex* cx, const char* path,
                                     vectk_cochain** out) {
  return guard([&] {
    if (!cx || !path || !out) fail(errc::bad_input, "null argument");
    *out = new vectk_cochain{u1_cochain_from_json(*cx->k, load_json_file(path))};
  });
}

void vectk_cochain_free(vectk_cochain* c) { delete c; }

vectk_status vectk_family_from_json(const char* text, const char* base_dir, vectk_family** out) {
  return guard([&] {
    if (!text || !out) fail(errc::bad_input, "null argument");
    auto doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(errc::bad_input, "malformed JSON");
    auto* f = new vectk_family;
    try {
      load_family_doc(*f, doc, base_dir ? base_dir : "");
    } catch (...) {
      delete f;
      throw;
    }
    *out = f;
  });
}

vectk_status vectk_family_from_file(const char* path, vectk_family** out) {
  return guard([&] {
    if (!path || !out) fail(errc::bad_input, "null argument");
    auto* f = new vectk_family;
    try {
      load_family_doc(*f, load_json_file(path), dir_of(path));
    } catch (...) {
      delete f;
      throw;
    }
    *out = f;
  });
}

void vectk_family_free(vectk_family* f) { delete f; }

vectk_status vectk_bundle_from_json(const char* text, const char* base_dir, vectk_bundle** out) {
  return guard([&] {
    if (!text || !out) fail(errc::bad_input, "null argument");
    auto doc = ordered_json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(errc::bad_input, "malformed JSON");
    auto base = load_embedded_complex(doc, base_dir ? base_dir : "");
    *out = new vectk_bundle{bundle_from_json(base, doc)};
  });
}

vectk_status vectk_bundle_from_file(const char* path, vectk_bundle** out) {
  return guard([&] {
    if (!path || !out) fail(errc::bad_input, "null argument");
    auto doc = load_json_file(path);
    auto base = load_embedded_complex(doc, dir_of(path));
    *out = new vectk_bundle{bundle_from_json(base, doc)};
  });
}

vectk_status vectk_bundle_to_json(const vectk_bundle* b, char** out) {
  return guard([&] {
    if (!b || !out) fail(errc::bad_input, "null argument");
    const std::string text = bundle_to_json(b->vb).dump(2) + "\n";
    *out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!*out) fail(errc::internal, "allocation failed");
    std::memcpy(*out, text.c_str(), text.size() + 1);
  });
}

vectk_status vectk_bundle_complex(const vectk_bundle* b, vectk_complex** out) {
  return guard([&] {
    if (!b || !out) fail(errc::bad_input, "null argument");
    *out = new vectk_complex{b->vb.base, nullptr};
  });
}

void vectk_bundle_free(vectk_bundle* b) { delete b; }

vectk_status vectk_cohomology(const vectk_complex* cx, int degree, vectk_report** out) {
  return guard([&] {
    if (!cx || !out) fail(errc::bad_input, "null argument");
    *out = wrap_report(cohomology_command(const_cast<vectk_complex*>(cx)->cc(), degree));
  });
}

vectk_status vectk_dd_class(const vectk_complex* cx, const vectk_cochain* c, vectk_report** out) {
  return guard([&] {
    if (!cx || !c || !out) fail(errc::bad_input, "null argument");
    *out = wrap_report(dd_command(const_cast<vectk_complex*>(cx)->cc(), c->c));
  });
}

vectk_status vectk_rank_obstruction(const vectk_complex* cx, const vectk_cochain* c, long rank,
                                    vectk_report** out) {
  return guard([&] {
    if (!cx || !c || !out) fail(errc::bad_input, "null argument");
    *out = wrap_report(
        obstruction_command(const_cast<vectk_complex*>(cx)->cc(), c->c, bigint(rank)));
  });
}

vectk_status vectk_chern_number(const vectk_complex* cx, const vectk_cochain* transitions,
                                long long* out) {
  return guard([&] {
    if (!cx || !transitions || !out) fail(errc::bad_input, "null argument");
    *out = static_cast<long long>(chern_number(*cx->k, transitions->c));
  });
}

vectk_status vectk_approximate(const vectk_family* f, const char* options_json,
                               vectk_bundle** bundle_out, vectk_report** report_out) {
  return guard([&] {
    if (!f || !bundle_out || !report_out) fail(errc::bad_input, "null argument");
    const ordered_json opts = parse_options(options_json);
    const tolerances tol = tolerances_from_json(opts);
    const double lambda_max = opts.value("lambda_max", 1.0);
    command_report rep = f->twisted ? approximate_command(*f->twisted, lambda_max, tol)
                                    : approximate_command(*f->plain, lambda_max, tol);
    // rebuild the bundle handle from the artifact so handle and file agree
    auto base = f->twisted ? f->twisted->base : f->plain->base;
    auto* bundle = new vectk_bundle{bundle_from_json(base, *rep.artifact)};
    *bundle_out = bundle;
    *report_out = wrap_report(std::move(rep));
  });
}

vectk_status vectk_verify(const vectk_bundle* b, const vectk_cochain* twist_or_null,
                          const char* options_json, vectk_report** out) {
  return guard([&] {
    if (!b || !out) fail(errc::bad_input, "null argument");
    const tolerances tol = tolerances_from_json(parse_options(options_json));
    command_report rep =
        verify_command(b->vb, twist_or_null ? &twist_or_null->c : nullptr, tol);
    *out = wrap_report(std::move(rep));
  });
}

vectk_status vectk_bundle_index(const vectk_bundle* b, vectk_report** out) {
  return guard([&] {
    if (!b || !out) fail(errc::bad_input, "null argument");
    *out = wrap_report(index_command(b->vb));
  });
}

vectk_status vectk_scenario(const char* name, vectk_report** out) {
  return guard([&] {
    if (!name || !out) fail(errc::bad_input, "null argument");
    *out = wrap_report(scenario_command(name));
  });
}

const char* vectk_report_json(const vectk_report* r) { return r ? r->json_text.c_str() : ""; }

const char* vectk_report_summary(const vectk_report* r) { return r ? r->summary.c_str() : ""; }

int vectk_report_exit_code(const vectk_report* r) {
  return r ? exit_class(r->rep.status) : 2;
}

void vectk_report_free(vectk_report* r) { delete r; }

}  // extern "C"
