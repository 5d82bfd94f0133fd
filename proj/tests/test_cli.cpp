#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vectk/commands.hpp"

namespace fs = std::filesystem;
using vectk::ordered_json;

namespace {

struct run_result {
  int exit_code = -1;
  std::string output;
};

run_result run_cli(const std::string& args) {
  const std::string cmd = std::string(VECTK_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  run_result res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.output.append(buf.data(), n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "vectk_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("cohomology command prints group strings with the documented exit codes") {
  const fs::path dir = scratch_dir();
  write_file(dir / "s3.json",
             R"({"vertices": 5, "maximal_simplices": [[0,1,2,3],[0,1,2,4],[0,1,3,4],[0,2,3,4],[1,2,3,4]]})");
  write_file(dir / "s2.json",
             R"({"vertices": 4, "maximal_simplices": [[0,1,2],[0,1,3],[0,2,3],[1,2,3]]})");

  auto s3 = run_cli("cohomology --complex " + (dir / "s3.json").string() + " --degree 3");
  CHECK(s3.exit_code == 0);
  CHECK(s3.output.find("H^3 = Z\n") != std::string::npos);

  auto s2 = run_cli("cohomology --complex " + (dir / "s2.json").string() + " --degree 3");
  CHECK(s2.exit_code == 0);
  CHECK(s2.output.find("H^3 = 0\n") != std::string::npos);

  auto bad = run_cli("cohomology --complex " + (dir / "missing.json").string() + " --degree 3");
  CHECK(bad.exit_code == 2);

  write_file(dir / "broken.json", "{ this is not json");
  auto malformed = run_cli("cohomology --complex " + (dir / "broken.json").string());
  CHECK(malformed.exit_code == 2);
}

TEST_CASE("pauli pipeline: scenario, cohomology, dd, obstruction, approximate, verify") {
  const fs::path dir = scratch_dir() / "pauli";
  auto sc = run_cli("scenario --name pauli-torsion --out " + dir.string());
  REQUIRE(sc.exit_code == 0);
  REQUIRE(fs::exists(dir / "complex.json"));
  REQUIRE(fs::exists(dir / "twisted_family.json"));
  REQUIRE(fs::exists(dir / "cocycle.json"));

  auto coh = run_cli("cohomology --complex " + (dir / "complex.json").string() + " --degree 3");
  CHECK(coh.exit_code == 0);
  CHECK(coh.output.find("H^3 = Z/2\n") != std::string::npos);

  auto dd = run_cli("dd --complex " + (dir / "complex.json").string() + " --cocycle " +
                    (dir / "cocycle.json").string());
  CHECK(dd.exit_code == 0);
  CHECK(dd.output.find("dd class: order 2") != std::string::npos);

  auto blocked = run_cli("obstruction --complex " + (dir / "complex.json").string() +
                         " --cocycle " + (dir / "cocycle.json").string() + " --rank 3");
  CHECK(blocked.exit_code == 1);
  CHECK(blocked.output.find("Obstructed") != std::string::npos);

  auto witness_path = dir / "witness.json";
  auto solvable = run_cli("obstruction --complex " + (dir / "complex.json").string() +
                          " --cocycle " + (dir / "cocycle.json").string() + " --rank 4 --out " +
                          witness_path.string());
  CHECK(solvable.exit_code == 0);
  CHECK(solvable.output.find("Solvable") != std::string::npos);
  CHECK(fs::exists(witness_path));

  auto approx = run_cli("approximate --family " + (dir / "twisted_family.json").string() +
                        " --lambda-max 2.0 --out " + (dir / "bundle.json").string() +
                        " --report " + (dir / "approx_report.json").string());
  REQUIRE(approx.exit_code == 0);
  REQUIRE(fs::exists(dir / "bundle.json"));

  auto verify = run_cli("verify --bundle " + (dir / "bundle.json").string() + " --cocycle " +
                        (dir / "cocycle.json").string());
  CHECK(verify.exit_code == 0);
  CHECK(verify.output.find("verification PASS") != std::string::npos);

  auto index = run_cli("index --bundle " + (dir / "bundle.json").string());
  CHECK(index.exit_code == 0);
  CHECK(index.output.find("index [0]") != std::string::npos);

  // corrupt a transition at the support sample, where h has a kernel; the
  // perturbation lands on kernel vectors and must flip the verdict
  auto expected = ordered_json::parse(read_file(dir / "expected.json"));
  const std::string kernel_key = expected["support"][0].get<std::string>();
  auto doc = ordered_json::parse(read_file(dir / "bundle.json"));
  bool corrupted = false;
  for (auto& [pair_key, by_sample] : doc["transitions"].items())
    if (by_sample.contains(kernel_key) && !by_sample[kernel_key].empty()) {
      auto& matrix = by_sample[kernel_key];
      matrix[0][0][0] = matrix[0][0][0].get<double>() + 1e-6;
      corrupted = true;
      break;
    }
  REQUIRE(corrupted);
  write_file(dir / "bundle_bad.json", doc.dump(2));
  auto bad = run_cli("verify --bundle " + (dir / "bundle_bad.json").string() + " --cocycle " +
                     (dir / "cocycle.json").string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("verification FAIL") != std::string::npos);
}

TEST_CASE("flow pipeline and report determinism across jobs") {
  const fs::path dir = scratch_dir() / "flow";
  REQUIRE(run_cli("scenario --name flow-s1 --out " + dir.string()).exit_code == 0);

  const std::string family = (dir / "family.json").string();
  auto one = run_cli("approximate --family " + family + " --lambda-max 1.5 --jobs 1 --out " +
                     (dir / "b1.json").string() + " --report " + (dir / "r1.json").string());
  auto eight = run_cli("approximate --family " + family + " --lambda-max 1.5 --jobs 8 --out " +
                       (dir / "b8.json").string() + " --report " + (dir / "r8.json").string());
  REQUIRE(one.exit_code == 0);
  REQUIRE(eight.exit_code == 0);
  CHECK(read_file(dir / "b1.json") == read_file(dir / "b8.json"));
  CHECK(read_file(dir / "r1.json") == read_file(dir / "r8.json"));
  CHECK(one.output == eight.output);

  auto verify = run_cli("verify --bundle " + (dir / "b1.json").string());
  CHECK(verify.exit_code == 0);

  // expected metadata matches the report
  auto expected = ordered_json::parse(read_file(dir / "expected.json"));
  auto report = ordered_json::parse(read_file(dir / "r1.json"));
  CHECK(report["index"] == expected["index"]);
  CHECK(report["support"] == expected["support"]);
}

TEST_CASE("bott pipeline reports the kernel chern number") {
  const fs::path dir = scratch_dir() / "bott";
  REQUIRE(run_cli("scenario --name bott-s2 --out " + dir.string()).exit_code == 0);
  auto approx = run_cli("approximate --family " + (dir / "family.json").string() +
                        " --lambda-max 1.0 --out " + (dir / "bundle.json").string() +
                        " --report " + (dir / "report.json").string());
  REQUIRE(approx.exit_code == 0);
  auto report = ordered_json::parse(read_file(dir / "report.json"));
  auto expected = ordered_json::parse(read_file(dir / "expected.json"));
  CHECK(report["kernel_chern"] == expected["kernel_chern"]);
  CHECK(report["index"] == expected["index"]);
}
