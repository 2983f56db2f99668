#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome mram(const std::string& args) {
  std::string cmd = std::string(MRAM_CLI) + " " + args + " 2>/dev/null";
  Outcome o{-1, {}};
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, p)) o.out.append(buf, got);
  int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string corpus(const std::string& file) { return std::string(MRAM_CORPUS) + "/" + file; }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run and fmt") {
  auto r = mram("run " + corpus("sum.masm") + " --input 3,4,5");
  CHECK(r.code == 0);
  CHECK(r.out.find("output: 12") != std::string::npos);
  CHECK(r.out.find("log_cost:") != std::string::npos);

  r = mram("run " + corpus("square.masm") + " --input 9 --cost unit --trace");
  CHECK(r.code == 0);
  CHECK(r.out.find("output: 81") != std::string::npos);
  CHECK(r.out.find("log_cost") == std::string::npos);

  CHECK(mram("run " + corpus("sum.masm") + " --fuel 3").code == 1);
  CHECK(mram("run /nonexistent.masm").code == 2);
  CHECK(mram("run " + corpus("sum.masm") + " --cost fancy").code == 2);
  CHECK(mram("frobnicate").code == 2);
  CHECK(mram("").code == 2);
  CHECK(mram("--help").code == 0);

  auto f = mram("fmt " + corpus("sum.masm"));
  CHECK(f.code == 0);
  CHECK(f.out.find("loop:\n") != std::string::npos);
}

TEST_CASE("ndtm subcommands") {
  auto gb = corpus("guess_bit.json");
  CHECK(mram("ndtm validate " + gb).out == "ok\n");
  auto o = mram("ndtm oracle " + gb + " --space 2 --time 2");
  CHECK(o.code == 0);
  CHECK(o.out.rfind("accept", 0) == 0);
  CHECK(mram("ndtm simulate " + corpus("parity.json") + " --input 11 --space 3 --time 3").out.rfind("reject", 0) == 0);
  CHECK(mram("ndtm triple " + corpus("parity.json") + " --input 111 --space 4 --time 4").code == 0);
  CHECK(mram("ndtm oracle " + corpus("parity.json") + " --input 2").code == 2);

  auto dir = std::filesystem::temp_directory_path() / "mram_cli_test";
  std::filesystem::create_directories(dir);
  auto masm = (dir / "p.masm").string();
  auto layout = (dir / "p.json").string();
  CHECK(mram("ndtm compile " + gb + " --space 2 --time 2 -o " + masm + " --layout " + layout).code == 0);
  auto j = nlohmann::json::parse(slurp(layout));
  auto run = mram("run " + masm + " --input " + j["initial_index"].get<std::string>());
  CHECK(run.code == 0);
  CHECK(run.out.find("output: 1\n") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sat and sort subcommands") {
  auto s = mram("sat oracle " + corpus("example.cnf"));
  CHECK(s.code == 0);
  CHECK(s.out.rfind("sat -1 -2 3\n", 0) == 0);
  CHECK(mram("sat oracle " + corpus("unsat.cnf")).out.rfind("unsat", 0) == 0);
  CHECK(mram("sat check " + corpus("example.cnf")).code == 0);
  auto c = mram("sat compile " + corpus("unsat.cnf"));
  CHECK(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["bounds"]["time"] == 3);

  auto sort = mram("sort emit --n 3 --max-key 4");
  CHECK(sort.code == 0);
  CHECK(sort.out.find("HALT") != std::string::npos);
}

TEST_CASE("bench scaling is reproducible") {
  auto dir = std::filesystem::temp_directory_path() / "mram_cli_bench";
  std::filesystem::create_directories(dir);
  auto a = (dir / "a.csv").string();
  auto b = (dir / "b.csv").string();
  CHECK(mram("bench scaling --problem sat --sizes 1..3 --seed 7 --report " + a).code == 0);
  CHECK(mram("bench scaling --problem sat --sizes 1..3 --seed 7 --report " + b).code == 0);
  auto strip = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  CHECK(strip(slurp(a)) == strip(slurp(b)));
  CHECK(std::filesystem::exists(dir / "a.json"));
  CHECK(mram("bench scaling --problem sat --sizes 3..1").code == 2);
  std::filesystem::remove_all(dir);
}
