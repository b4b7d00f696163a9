#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + TITCHLAB_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  Run r;
  char buf[4096];
  while (const std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("kloosterman at c = 3") {
  const auto r = run("kloosterman --m 1 --n 1 --c 3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("experiment,scale,lhs,main_term,abs_err,rel_err,wall_s,params_json\n", 0) == 0);
  CHECK(r.out.find(",-1,") != std::string::npos);
}

TEST_CASE("json output is one object per line") {
  const auto r = run("titchmarsh --x 1000 --format json");
  CHECK(r.code == 0);
  CHECK(r.out.front() == '{');
  CHECK(r.out.find("\"experiment\"") != std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
}

TEST_CASE("output files are byte-identical across runs and thread counts") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = (dir / "titchlab_cli_a.csv").string(), b = (dir / "titchlab_cli_b.csv").string(),
             c = (dir / "titchlab_cli_c.csv").string();
  const std::string args = "trend --experiment titchmarsh --scales 1000,10000,100000 --output ";
  CHECK(run(args + a + " --threads 1").code == 0);
  CHECK(run(args + b + " --threads 1").code == 0);
  CHECK(run(args + c + " --threads 4").code == 0);
  const auto sa = slurp(a);
  CHECK(!sa.empty());
  CHECK(sa == slurp(b));
  CHECK(sa == slurp(c));
  for (const auto& p : {a, b, c}) std::filesystem::remove(p);
}

TEST_CASE("exit codes") {
  CHECK(run("titchmarsh --x 0").code == 1);
  CHECK(run("no-such-command").code == 1);
  CHECK(run("titchmarsh --x 1000 --format xml").code == 1);
  CHECK(run("kloosterman --m 1 --n 1 --c 2000000000").code == 2);
  CHECK(run("titchmarsh --x 100000", "TITCHLAB_MEM_MB=abc").code == 1);
  CHECK(run("--help").code == 0);
}
