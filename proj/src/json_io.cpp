#include "vectk/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace vectk {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

ordered_json mu_to_json(double mu) {
  if (mu == kMuInfinite) return "inf";
  return round12(mu);
}

ordered_json matrix_to_json(const cmat& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back({round12(m(r, c).real()), round12(m(r, c).imag())});
    rows.push_back(std::move(row));
  }
  return rows;
}

cmat matrix_from_json(const ordered_json& j) {
  if (!j.is_array()) fail(errc::bad_input, "matrix must be an array of rows");
  const int rows = static_cast<int>(j.size());
  int cols = -1;
  for (const auto& row : j) {
    if (!row.is_array()) fail(errc::bad_input, "matrix row must be an array");
    if (cols < 0)
      cols = static_cast<int>(row.size());
    else if (cols != static_cast<int>(row.size()))
      fail(errc::bad_input, "ragged matrix");
  }
  cmat m(rows, std::max(cols, 0));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < m.cols(); ++c) {
      const auto& e = j[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        fail(errc::bad_input, "complex scalar must be [re, im]");
      m(r, c) = cxd(e[0].get<double>(), e[1].get<double>());
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag()))
        fail(errc::bad_input, "matrix entries must be finite");
    }
  return m;
}

namespace {

std::vector<simplex> maximal_simplices(const simplicial_complex& k) {
  std::vector<simplex> out;
  for (int d = 0; d <= k.dim(); ++d)
    for (const auto& s : k.simplices(d)) {
      bool is_face = false;
      if (d + 1 <= k.dim())
        for (int v = 0; v < k.vertex_count() && !is_face; ++v) {
          if (std::binary_search(s.begin(), s.end(), v)) continue;
          simplex bigger = s;
          bigger.insert(std::lower_bound(bigger.begin(), bigger.end(), v), v);
          if (k.has(bigger)) is_face = true;
        }
      if (!is_face) out.push_back(s);
    }
  return out;
}

}  // namespace

ordered_json complex_to_json(const simplicial_complex& k) {
  ordered_json j;
  j["vertices"] = k.vertex_count();
  ordered_json sims = ordered_json::array();
  for (const auto& s : maximal_simplices(k)) sims.push_back(s);
  j["maximal_simplices"] = std::move(sims);
  return j;
}

simplicial_complex complex_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("maximal_simplices"))
    fail(errc::bad_input, "complex file needs 'maximal_simplices'");
  std::vector<simplex> maximal;
  for (const auto& s : j["maximal_simplices"]) {
    simplex sv;
    for (const auto& v : s) {
      if (!v.is_number_integer()) fail(errc::bad_input, "vertex ids must be integers");
      sv.push_back(v.get<int>());
    }
    maximal.push_back(std::move(sv));
  }
  const int n = j.value("vertices", 0);
  return simplicial_complex::from_maximal(n, maximal);
}

ordered_json u1_cochain_to_json(const simplicial_complex& k, const u1_cochain& c) {
  ordered_json j;
  j["degree"] = c.degree;
  ordered_json turns = ordered_json::object();
  const auto& sims = k.simplices(c.degree);
  for (size_t i = 0; i < sims.size(); ++i) {
    if (c.turns[i] == 0) continue;
    turns[k.sample_key(k.sample_id(sims[i]))] = turn_to_string(c.turns[i]);
  }
  j["turns"] = std::move(turns);
  return j;
}

u1_cochain u1_cochain_from_json(const simplicial_complex& k, const ordered_json& j) {
  if (!j.is_object() || !j.contains("degree")) fail(errc::bad_input, "cochain file needs 'degree'");
  const int degree = j["degree"].get<int>();
  u1_cochain c = zero_u1_cochain(k, degree);
  if (j.contains("turns"))
    for (auto it = j["turns"].begin(); it != j["turns"].end(); ++it) {
      const int sid = k.sample_from_key(it.key());
      if (sid < 0 || static_cast<int>(k.sample_simplex(sid).size()) != degree + 1)
        fail(errc::bad_input, "turn key '" + it.key() + "' is not a " + std::to_string(degree) +
                                  "-simplex of the complex");
      const int idx = k.index_of(k.sample_simplex(sid));
      if (it.value().is_string())
        c.turns[idx] = turn_from_string(it.value().get<std::string>());
      else if (it.value().is_number_integer())
        c.turns[idx] = normalize_turn(bigrat(bigint(it.value().get<long long>())));
      else
        fail(errc::bad_input, "turn values must be fraction strings");
    }
  return c;
}

ordered_json integer_cochain_to_json(const simplicial_complex& k, const integer_cochain& c) {
  ordered_json j;
  j["degree"] = c.degree;
  ordered_json values = ordered_json::object();
  if (c.degree >= 0) {
    const auto& sims = k.simplices(c.degree);
    for (size_t i = 0; i < sims.size(); ++i) {
      if (c.values[i] == 0) continue;
      values[k.sample_key(k.sample_id(sims[i]))] = c.values[i].str();
    }
  }
  j["values"] = std::move(values);
  return j;
}

ordered_json family_to_json(const fredholm_family& f) {
  ordered_json j;
  j["complex"] = complex_to_json(*f.base);
  j["shape"] = {f.n0, f.n1};
  ordered_json samples = ordered_json::object();
  for (const auto& [sid, m] : f.samples) samples[f.base->sample_key(sid)] = matrix_to_json(m);
  j["samples"] = std::move(samples);
  return j;
}

fredholm_family family_from_json(std::shared_ptr<const simplicial_complex> base,
                                 const ordered_json& j) {
  fredholm_family f;
  f.base = std::move(base);
  if (!j.contains("shape") || !j["shape"].is_array() || j["shape"].size() != 2)
    fail(errc::bad_input, "family file needs 'shape': [n0, n1]");
  f.n0 = j["shape"][0].get<int>();
  f.n1 = j["shape"][1].get<int>();
  if (f.n0 < 0 || f.n1 < 0 || f.n0 + f.n1 == 0) fail(errc::bad_input, "invalid family shape");
  if (!j.contains("samples")) fail(errc::bad_input, "family file needs 'samples'");
  for (auto it = j["samples"].begin(); it != j["samples"].end(); ++it) {
    const int sid = f.base->sample_from_key(it.key());
    if (sid < 0) fail(errc::bad_input, "sample key '" + it.key() + "' is not a simplex");
    f.samples[sid] = matrix_from_json(it.value());
  }
  return f;
}

ordered_json lifts_to_json(const simplicial_complex& k, const unitary_lift_system& lifts) {
  ordered_json j;
  j["rank"] = lifts.rank;
  ordered_json u = ordered_json::object();
  for (const auto& [e, m] : lifts.unitaries)
    u[k.sample_key(k.sample_id(k.simplices(1)[e]))] = matrix_to_json(m);
  j["unitaries"] = std::move(u);
  return j;
}

unitary_lift_system lifts_from_json(const simplicial_complex& k, const ordered_json& j) {
  unitary_lift_system lifts;
  if (!j.contains("rank")) fail(errc::bad_input, "lift system needs 'rank'");
  lifts.rank = j["rank"].get<int>();
  if (!j.contains("unitaries")) fail(errc::bad_input, "lift system needs 'unitaries'");
  for (auto it = j["unitaries"].begin(); it != j["unitaries"].end(); ++it) {
    const int sid = k.sample_from_key(it.key());
    if (sid < 0 || k.sample_simplex(sid).size() != 2)
      fail(errc::bad_input, "lift key '" + it.key() + "' is not an edge");
    lifts.unitaries[k.index_of(k.sample_simplex(sid))] = matrix_from_json(it.value());
  }
  return lifts;
}

ordered_json twisted_family_to_json(const twisted_family& t) {
  ordered_json j;
  j["complex"] = complex_to_json(*t.base);
  j["rank"] = t.lifts.rank;
  ordered_json patches = ordered_json::object();
  for (const auto& [v, by_sample] : t.patches) {
    ordered_json p = ordered_json::object();
    for (const auto& [sid, m] : by_sample) p[t.base->sample_key(sid)] = matrix_to_json(m);
    patches[std::to_string(v)] = std::move(p);
  }
  j["patches"] = std::move(patches);
  j["lifts"] = lifts_to_json(*t.base, t.lifts);
  return j;
}

twisted_family twisted_family_from_json(std::shared_ptr<const simplicial_complex> base,
                                        const ordered_json& j) {
  twisted_family t;
  t.base = std::move(base);
  if (!j.contains("lifts")) fail(errc::bad_input, "twisted family needs 'lifts'");
  t.lifts = lifts_from_json(*t.base, j["lifts"]);
  if (!j.contains("patches")) {
    // a global square family with lifts: every patch carries the same local
    // family; the compatibility check decides whether that is consistent
    fredholm_family f = family_from_json(t.base, j);
    if (f.n0 != f.n1) fail(errc::shape_mismatch, "twisted families need n0 = n1");
    star_cover cover = make_star_cover(*t.base);
    for (int v = 0; v < t.base->vertex_count(); ++v)
      for (int sid : cover.patch_samples[v]) {
        auto it = f.samples.find(sid);
        if (it == f.samples.end())
          fail(errc::bad_input, "family misses sample " + t.base->sample_key(sid));
        t.patches[v][sid] = it->second;
      }
    return t;
  }
  for (auto it = j["patches"].begin(); it != j["patches"].end(); ++it) {
    int v = -1;
    try {
      v = std::stoi(it.key());
    } catch (const std::exception&) {
      fail(errc::bad_input, "patch keys must be vertex ids");
    }
    if (v < 0 || v >= t.base->vertex_count()) fail(errc::bad_input, "patch id out of range");
    for (auto s = it.value().begin(); s != it.value().end(); ++s) {
      const int sid = t.base->sample_from_key(s.key());
      if (sid < 0) fail(errc::bad_input, "sample key '" + s.key() + "' is not a simplex");
      t.patches[v][sid] = matrix_from_json(s.value());
    }
  }
  return t;
}

ordered_json bundle_to_json(const vectorial_bundle& vb) {
  ordered_json j;
  j["complex"] = complex_to_json(*vb.base);
  if (vb.twist) j["twist"] = u1_cochain_to_json(*vb.base, *vb.twist);
  ordered_json patches = ordered_json::object();
  for (const auto& [v, by_sample] : vb.fibers) {
    ordered_json p = ordered_json::object();
    for (const auto& [sid, f] : by_sample) {
      ordered_json fj;
      fj["dims"] = {f.r0, f.r1};
      fj["h"] = matrix_to_json(f.h);
      if (f.ambient && f.ambient_space) {
        fj["ambient"] = {f.ambient_space->dim_even, f.ambient_space->dim_odd};
        fj["basis"] = matrix_to_json(*f.ambient);
      }
      p[vb.base->sample_key(sid)] = std::move(fj);
    }
    patches[std::to_string(v)] = std::move(p);
  }
  j["patches"] = std::move(patches);
  ordered_json trans = ordered_json::object();
  for (const auto& [key, by_sample] : vb.transitions) {
    ordered_json t = ordered_json::object();
    for (const auto& [sid, m] : by_sample) t[vb.base->sample_key(sid)] = matrix_to_json(m);
    trans[std::to_string(key.first) + "|" + std::to_string(key.second)] = std::move(t);
  }
  j["transitions"] = std::move(trans);
  return j;
}

vectorial_bundle bundle_from_json(std::shared_ptr<const simplicial_complex> base,
                                  const ordered_json& j) {
  vectorial_bundle vb;
  vb.base = std::move(base);
  if (j.contains("twist")) vb.twist = u1_cochain_from_json(*vb.base, j["twist"]);
  if (!j.contains("patches")) fail(errc::bad_input, "bundle file needs 'patches'");
  for (auto it = j["patches"].begin(); it != j["patches"].end(); ++it) {
    int v = -1;
    try {
      v = std::stoi(it.key());
    } catch (const std::exception&) {
      fail(errc::bad_input, "patch keys must be vertex ids");
    }
    for (auto s = it.value().begin(); s != it.value().end(); ++s) {
      const int sid = vb.base->sample_from_key(s.key());
      if (sid < 0) fail(errc::bad_input, "sample key '" + s.key() + "' is not a simplex");
      const auto& fj = s.value();
      local_fiber f;
      if (!fj.contains("dims") || fj["dims"].size() != 2)
        fail(errc::bad_input, "fiber needs 'dims': [r0, r1]");
      f.r0 = fj["dims"][0].get<int>();
      f.r1 = fj["dims"][1].get<int>();
      f.h = fj.contains("h") ? matrix_from_json(fj["h"]) : cmat::Zero(f.total(), f.total());
      if (f.h.rows() != f.total() || f.h.cols() != f.total())
        fail(errc::bad_input, "fiber map shape does not match dims");
      if (fj.contains("basis") && fj.contains("ambient")) {
        f.ambient = matrix_from_json(fj["basis"]);
        f.ambient_space = graded_space{fj["ambient"][0].get<int>(), fj["ambient"][1].get<int>()};
      }
      vb.fibers[v][sid] = std::move(f);
    }
  }
  if (j.contains("transitions"))
    for (auto it = j["transitions"].begin(); it != j["transitions"].end(); ++it) {
      const std::string key = it.key();
      const auto bar = key.find('|');
      if (bar == std::string::npos) fail(errc::bad_input, "transition keys look like 'a|b'");
      int a = -1, b = -1;
      try {
        a = std::stoi(key.substr(0, bar));
        b = std::stoi(key.substr(bar + 1));
      } catch (const std::exception&) {
        fail(errc::bad_input, "transition keys look like 'a|b'");
      }
      for (auto s = it.value().begin(); s != it.value().end(); ++s) {
        const int sid = vb.base->sample_from_key(s.key());
        if (sid < 0) fail(errc::bad_input, "sample key '" + s.key() + "' is not a simplex");
        cmat m = matrix_from_json(s.value());
        // nested arrays cannot carry 0 x n shapes; restore them from the fibers
        if (m.size() == 0) {
          const auto pa = vb.fibers.find(a);
          const auto pb = vb.fibers.find(b);
          const int rows = pa != vb.fibers.end() && pa->second.count(sid)
                               ? pa->second.at(sid).total()
                               : 0;
          const int cols = pb != vb.fibers.end() && pb->second.count(sid)
                               ? pb->second.at(sid).total()
                               : 0;
          if (rows == 0 || cols == 0) m = cmat::Zero(rows, cols);
        }
        vb.transitions[{a, b}][sid] = std::move(m);
      }
    }
  return vb;
}

ordered_json verify_report_to_json(const verify_report& rep) {
  ordered_json j;
  j["pass"] = rep.pass;
  j["min_mu_agree"] = mu_to_json(rep.min_mu_agree);

  // aggregate per condition kind, list failures individually
  std::map<std::string, std::pair<int, double>> by_kind;  // count, min mu
  ordered_json failures = ordered_json::array();
  for (const auto& c : rep.conditions) {
    auto& [count, min_mu] = by_kind.try_emplace(c.kind, 0, kMuInfinite).first->second;
    ++count;
    min_mu = std::min(min_mu, c.mu_agree);
    if (!c.pass) {
      ordered_json f;
      f["kind"] = c.kind;
      f["patches"] = c.patches;
      f["sample"] = c.sample;
      f["mu_agree"] = mu_to_json(c.mu_agree);
      failures.push_back(std::move(f));
    }
  }
  ordered_json kinds = ordered_json::object();
  for (const auto& [kind, agg] : by_kind) {
    ordered_json k;
    k["checked"] = agg.first;
    k["min_mu_agree"] = mu_to_json(agg.second);
    kinds[kind] = std::move(k);
  }
  j["conditions"] = std::move(kinds);
  j["failures"] = std::move(failures);
  return j;
}

std::shared_ptr<const simplicial_complex> load_embedded_complex(const ordered_json& j,
                                                                const std::string& base_dir) {
  if (j.contains("complex"))
    return std::make_shared<simplicial_complex>(complex_from_json(j["complex"]));
  if (j.contains("complex_file")) {
    std::filesystem::path p = j["complex_file"].get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    return std::make_shared<simplicial_complex>(complex_from_json(load_json_file(p.string())));
  }
  fail(errc::bad_input, "file needs an embedded 'complex' or a 'complex_file' reference");
}

ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::bad_input, "cannot open '" + path + "'");
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::bad_input, "malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const ordered_json& doc) {
  std::ofstream out(path);
  if (!out) fail(errc::bad_input, "cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

}  // namespace vectk
