#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sepsdp/matrix_io.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace sepsdp;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// One scratch directory per process; commands run with it as the report directory.
const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("sepsdp-cli-test-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const fs::path log = scratch() / "last.log";
  const std::string cmd = std::string(SEPSDP_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(log);
  return r;
}

std::string out_flag(const std::string& sub) { return "--out " + (scratch() / sub).string() + " "; }

std::string emit(const std::string& name, const std::string& param = "") {
  const fs::path p = scratch() / (name + param + ".json");
  if (!fs::exists(p)) {
    const Run r = run("catalog emit " + name + (param.empty() ? "" : " --param " + param) + " -o " + p.string());
    REQUIRE(r.code == 0);
  }
  return p.string();
}

// Path printed after `label` on its own output line.
std::string printed_path(const std::string& out, const std::string& label) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    const auto at = line.find(label + " ");
    if (at != std::string::npos && line.find_first_not_of(' ') == at) return line.substr(at + label.size() + 1);
  }
  return "";
}

}  // namespace

TEST_CASE("test verb exit codes") {
  const Run choi = run(out_flag("t") + "test " + emit("choi", "3.5") + " --k 2");
  CHECK(choi.code == 1);
  const std::string witness = printed_path(choi.out, "witness");
  REQUIRE_FALSE(witness.empty());
  const MatrixFile w = read_matrix_file(witness);
  CHECK(w.kind == MatrixKind::Operator);
  CHECK(w.dims == std::vector<int>{3, 3});

  CHECK(run(out_flag("t") + "test " + emit("bell") + " --k 1").code == 1);
  CHECK(run(out_flag("t") + "test " + emit("maxmixed", "3") + " --k 2").code == 0);
}

TEST_CASE("malformed input exits 64 and names the field") {
  const fs::path bad = scratch() / "bad.json";
  std::ofstream(bad) << R"({"dims":[2,2],"kind":"state","entries":[[1,0]]})";
  const Run r = run(out_flag("t") + "test " + bad.string());
  CHECK(r.code == 64);
  CHECK(r.out.find("entries") != std::string::npos);

  const fs::path not_state = scratch() / "trace2.json";
  MatrixFile f;
  f.dims = {2, 2};
  f.kind = MatrixKind::State;
  f.matrix = CMatrix::Identity(4, 4) / 2.0;
  write_matrix_file(not_state.string(), f);
  CHECK(run(out_flag("t") + "test " + not_state.string()).code == 64);
  CHECK(run(out_flag("t") + "test " + (scratch() / "missing.json").string()).code == 64);
  CHECK(run("test").code == 64);
  CHECK(run(out_flag("t") + "sweep nope --values 1").code == 64);
  CHECK(run("--out /proc/forbidden test " + emit("bell")).code == 64);
  CHECK(run(out_flag("t") + "--tol-gap -1 test " + emit("bell")).code == 64);
}

TEST_CASE("reports are reproducible byte for byte and round-trip") {
  const std::string state = emit("choi", "3.5");
  const Run a = run(out_flag("r1") + "test " + state + " --k 2");
  const Run b = run(out_flag("r2") + "test " + state + " --k 2");
  const std::string pa = printed_path(a.out, "report"), pb = printed_path(b.out, "report");
  REQUIRE_FALSE(pa.empty());
  CHECK(fs::path(pa).filename() == fs::path(pb).filename());
  CHECK(slurp(pa) == slurp(pb));

  const nlohmann::json doc = nlohmann::json::parse(slurp(pa));
  CHECK(doc.at("report").at("status") == "Entangled");
  const MatrixFile w = matrix_file_from_json(doc.at("report").at("witness"));
  CHECK(w.matrix.rows() == 9);
  // A different config lands in a different file.
  const Run c = run(out_flag("r1") + "test " + state + " --k 1");
  CHECK(printed_path(c.out, "report") != pa);
}

TEST_CASE("table1 reproduces the thresholds") {
  const Run r = run(out_flag("t1") + "table1 --kmax 8");
  REQUIRE(r.code == 0);
  const std::string tsv = printed_path(r.out, "table");
  std::istringstream in(slurp(tsv));
  std::string header;
  std::getline(in, header);
  CHECK(header == "k\talpha");
  const double expected[8] = {0.4, 0.58769, 0.68556, 0.72727, 0.77663, 0.80766, 0.823529, 0.846137};
  int k = 0;
  double alpha = 0;
  int rows = 0;
  while (in >> k >> alpha) {
    CHECK(std::abs(alpha - expected[k - 1]) < 1e-3);
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("decompose emits an indecomposable verdict and rho_opt") {
  const Run r = run(out_flag("d") + "decompose " + emit("choi-witness"));
  CHECK(r.code == 0);
  CHECK(r.out.find("Indecomposable") != std::string::npos);
  const std::string rho = printed_path(r.out, "rho_opt");
  REQUIRE_FALSE(rho.empty());
  CHECK(read_matrix_file(rho).kind == MatrixKind::State);
  // rho_opt is a valid state file for the test verb, and it is detected at level 2.
  CHECK(run(out_flag("d") + "test " + rho + " --k 2").code == 1);
}

TEST_CASE("posmap on the transpose is not CP and undetermined") {
  const Run r = run(out_flag("p") + "posmap " + emit("transpose", "3") + " --kmax 4");
  CHECK(r.code == 0);
  CHECK(r.out.find("NotCP") != std::string::npos);
  CHECK(r.out.find("Undetermined") != std::string::npos);
  CHECK(run(out_flag("p") + "posmap " + emit("transpose", "3") + " --direction sideways").code == 64);
}

TEST_CASE("sweep writes one row per parameter") {
  const Run r = run(out_flag("s") + "--jobs 2 sweep choi --values 2.5,3.5 --k 2");
  REQUIRE(r.code == 0);
  std::istringstream in(slurp(printed_path(r.out, "table")));
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha\tstatus\tmargin_t\tboundary");
  std::getline(in, line);
  CHECK(line.find("SeparableConsistent") != std::string::npos);
  std::getline(in, line);
  CHECK(line.find("Entangled") != std::string::npos);

  const Run g = run(out_flag("s") + "sweep choi --gamma --alpha 3.5 --values 0.1,1 --k 2");
  REQUIRE(g.code == 0);
  CHECK(g.out.find("gamma\tstatus") != std::string::npos);
}

TEST_CASE("verify-witness detects with an emitted witness") {
  const Run t = run(out_flag("v") + "test " + emit("choi", "3.5") + " --k 2");
  const std::string w = printed_path(t.out, "witness");
  REQUIRE_FALSE(w.empty());
  CHECK(run(out_flag("v") + "verify-witness " + w + " " + emit("choi", "3.5")).code == 1);
  CHECK(run(out_flag("v") + "verify-witness " + w + " " + emit("choi", "2")).code == 0);
  // A PSD operator is no witness for anything but also not negative on products.
  CHECK(run(out_flag("v") + "verify-witness " + emit("swap", "3")).code == 0);
}

TEST_CASE("catalog list names every entry") {
  const Run r = run("catalog list");
  CHECK(r.code == 0);
  for (const char* name : {"choi", "choi-witness", "gisin", "gisin-witness", "bell", "maxmixed", "swap", "transpose"})
    CHECK(r.out.find(name) != std::string::npos);
  CHECK(run("catalog emit nope").code == 64);
}
