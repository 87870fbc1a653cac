#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "htk/io.hpp"

using namespace htk;
namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

static Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

static std::string fixture(const std::string& name) { return (fs::path(HTK_FIXTURES) / name).string(); }

static std::string temp_file(const std::string& name, const std::string& text) {
  auto p = fs::temp_directory_path() / ("htk_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

static std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

TEST_CASE("certify-loop on the eta^10 fixture") {
  auto r = run({"certify-loop", fixture("eta10.json")});
  CHECK(r.code == 0);
  auto j = r.report();
  CHECK(j["schema"] == "v1");
  CHECK(j["kind"] == "report");
  CHECK(j["pass"] == true);
  CHECK(j["result"]["certificate"]["verdict"] == true);
  CHECK(j["result"]["certificate"]["C"] == 10);
  CHECK(j["result"]["certificate"]["bound"] == 4);
  CHECK(j["input_digest"].get<std::string>().rfind("crc32:", 0) == 0);
  CHECK(r.err.find("PASS") != std::string::npos);
}

TEST_CASE("malformed JSON exits 2") {
  auto bad = temp_file("bad.json", "{\"schema\": \"v1\", \"kind\": ");
  for (auto sub : cli::subcommands()) {
    auto r = run({sub, bad});
    CHECK_MESSAGE(r.code == 2, sub);
    CHECK(r.report()["kind"] == "error");
  }
  CHECK(run({"certify-loop", "/nonexistent/file.json"}).code == 2);
}

TEST_CASE("schema violations exit 2") {
  // right kind, missing field
  auto loop = temp_file("noloop.json", R"({"schema":"v1","kind":"loop","genus":2})");
  CHECK(run({"certify-loop", loop}).code == 2);
  // wrong kind for the subcommand
  CHECK(run({"reeb", fixture("eta10.json")}).code == 2);
  // spec that fails its own invariants (sigma not a permutation)
  auto bad_sigma = temp_file("sigma.json", R"({"schema":"v1","kind":"loop","genus":1,
      "spec":{"p":2,"n":9,"B":[[],[]],"O":[[],[]],"sigma":[0,0]}})");
  CHECK(run({"certify-loop", bad_sigma}).code == 2);
  // edge 7 does not exist on the genus-1 surface
  auto arc = temp_file("arc.json", R"({"schema":"v1","kind":"arc","genus":1,
      "alpha":{"start":0.5,"end":2.5,"path":[7]},"monodromy":"Ta1","sign":1,"slopes":[]})");
  CHECK(run({"good-sequence", arc}).code == 2);
  CHECK(run({"certify-loop"}).code == 2);
  CHECK(run({"no-such-command", fixture("eta10.json")}).code == 2);
  CHECK(run({"fill", fixture("fill.json"), "--csv", "x.csv"}).code == 2);
  CHECK(run({"moser-verify", fixture("moser-bump.json"), "--jobs", "0"}).code == 2);
}

TEST_CASE("contact-check on the flat profile exits 1") {
  auto r = run({"contact-check", fixture("flat.json")});
  CHECK(r.code == 1);
  auto j = r.report();
  CHECK(j["pass"] == false);
  CHECK(j["checks"][0]["name"] == "contact");
  CHECK(j["checks"][0]["pass"] == false);
  CHECK(r.err.find("FAIL") != std::string::npos);
  // and the Reeb field is undefined there
  CHECK(run({"reeb", fixture("flat.json")}).code == 1);
}

TEST_CASE("every fixture runs with the expected outcome") {
  struct Case {
    std::string sub, file;
    int code;
  };
  std::vector<Case> cases{
      {"certify-loop", "eta10.json", 0},
      {"certify-loop", "random-loops.json", 0},
      {"good-sequence", "twist.json", 0},
      {"good-sequence", "genus2-sequence.json", 0},
      {"slope-interval", "twist.json", 0},
      {"contact-check", "model.json", 0},
      {"contact-check", "spiral.json", 0},
      {"contact-check", "flat.json", 1},
      {"reeb", "model.json", 0},
      {"reeb", "spiral.json", 0},
      {"slope", "slope.json", 0},
      {"length-adjust", "length.json", 0},
      {"fill", "fill.json", 0},
      {"hierarchy-check", "hierarchy-product-ball.json", 0},
      {"hierarchy-check", "hierarchy-thickened-torus.json", 0},
      {"hierarchy-check", "hierarchy-genus2-handlebody.json", 0},
      {"gluing-ledger", "gluing.json", 0},
  };
  for (auto& c : cases) {
    auto r = run({c.sub, fixture(c.file)});
    CHECK_MESSAGE(r.code == c.code, c.sub, " ", c.file, "\n", r.err);
  }
}

TEST_CASE("check failures inside a valid document exit 1") {
  auto slope = temp_file("slope_pos.json", R"({"schema":"v1","kind":"slope","form":{"u0":0.2},"eps":[0.1]})");
  CHECK(run({"slope", slope}).code == 1);
  auto length = temp_file("short.json", R"({"schema":"v1","kind":"length",
      "germ":{"kind":"cos_x","h0":2.0,"amp":0.2},"a":1.8849555921538759,"b":2.356194490192345,"L":0.2})");
  CHECK(run({"length-adjust", length}).code == 1);
  auto fill = temp_file("fill_bad.json", R"({"schema":"v1","kind":"fill","u":0,"v":-1,"p":-1,"q":10})");
  CHECK(run({"fill", fill}).code == 1);
  auto glue = temp_file("glue_bad.json", R"({"schema":"v1","kind":"gluing","epsilon":0.1,
      "toric":[{"id":"t","plus_length":2,"minus_length":3}]})");
  CHECK(run({"gluing-ledger", glue}).code == 1);
  auto twist = temp_file("twist_out.json", R"({"schema":"v1","kind":"arc","genus":1,
      "alpha":{"start":0.5,"end":2.5,"path":[1]},"monodromy":"Ta1","sign":1,"slopes":["-1/2"]})");
  auto r = run({"slope-interval", twist});
  CHECK(r.code == 0);  // outside the interval and correctly without weights
  auto doc = io::normalize(json::parse(slurp(fixture("hierarchy-genus2-handlebody.json"))));
  doc["steps"][0]["surface"][0]["pi1_injective_declared"] = false;
  auto h = temp_file("h_bad.json", doc.dump());
  auto hr = run({"hierarchy-check", h});
  CHECK(hr.code == 1);
  CHECK(hr.report()["result"]["report"]["citation"] == "pi1-injectivity");
  CHECK(hr.report()["result"]["report"]["failed_step"] == 0);
}

TEST_CASE("tolerance override") {
  auto r = run({"reeb", fixture("model.json"), "--tol", "1e-20"});
  CHECK(r.code == 1);
  CHECK(r.report()["tol"] == 1e-20);
  CHECK(run({"reeb", fixture("model.json")}).report()["tol"] == 1e-12);
}

TEST_CASE("reports are byte-stable and seeded") {
  for (auto& [sub, file] : std::vector<std::pair<std::string, std::string>>{
           {"certify-loop", "random-loops.json"}, {"slope-interval", "twist.json"}, {"reeb", "spiral.json"}}) {
    auto a = run({sub, fixture(file), "--seed", "7"});
    auto b = run({sub, fixture(file), "--seed", "7"});
    CHECK(a.out == b.out);
    CHECK_FALSE(a.report().contains("wall_time_s"));
  }
  auto timed = run({"reeb", fixture("spiral.json"), "--timing"});
  CHECK(timed.report().contains("wall_time_s"));
  auto s7 = run({"certify-loop", fixture("random-loops.json"), "--seed", "7"}).report();
  auto s8 = run({"certify-loop", fixture("random-loops.json"), "--seed", "8"}).report();
  CHECK(s7["seed"] == 7);
  CHECK(s7["result"]["random_trials"]["disagreements"] == 0);
  CHECK(s8["result"]["random_trials"]["disagreements"] == 0);
}

TEST_CASE("moser-verify: jobs do not change the report, CSV output") {
  auto doc = json::parse(slurp(fixture("moser-bump.json")));
  doc["grid"]["n"] = 24;
  doc["steps"] = 40;
  doc["tol"] = 0.01;  // coarse grid
  auto small = temp_file("moser_small.json", doc.dump());
  auto csv1 = (fs::temp_directory_path() / "htk_test_moser1.csv").string();
  auto csv2 = (fs::temp_directory_path() / "htk_test_moser2.csv").string();
  auto a = run({"moser-verify", small, "--jobs", "1", "--csv", csv1});
  auto b = run({"moser-verify", small, "--jobs", "3", "--csv", csv2});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto c1 = slurp(csv1);
  CHECK(c1 == slurp(csv2));
  CHECK(c1.rfind("x,y,steps,error,order\n", 0) == 0);
  CHECK(std::count(c1.begin(), c1.end(), '\n') == 5);
}

TEST_CASE("--out and CSV for the slope curve") {
  auto out = (fs::temp_directory_path() / "htk_test_slope.json").string();
  auto csv = (fs::temp_directory_path() / "htk_test_slope.csv").string();
  auto r = run({"slope", fixture("slope.json"), "--out", out, "--csv", csv});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  auto j = json::parse(slurp(out));
  CHECK(j["result"]["curve"].size() == 4);
  auto text = slurp(csv);
  CHECK(text.rfind("eps,slope,slope_error_bound,dalpha_residual\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("the binary reports exit codes to the shell") {
  auto status = [](const std::string& cmd) {
    int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  std::string bin = HTK_BINARY;
  CHECK(status(bin + " certify-loop " + fixture("eta10.json")) == 0);
  CHECK(status(bin + " contact-check " + fixture("flat.json")) == 1);
  CHECK(status(bin + " certify-loop " + temp_file("bad2.json", "not json")) == 2);
  CHECK(status(bin + " --help") == 0);
}
