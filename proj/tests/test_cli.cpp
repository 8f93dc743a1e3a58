#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

// Runs the CLI with stdout captured to a file and stderr discarded.
Result trains(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "trains_cli_stdout.txt";
  const std::string cmd = std::string(TRAINS_BIN) + " " + args + " >" + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text.str()};
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / name; }

std::size_t line_count(const fs::path& file) {
  std::ifstream in(file);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(trains("").code == 1);
  CHECK(trains("simulate").code == 1);
  CHECK(trains("simulate --graph ring:8 --bogus").code == 1);
  CHECK(trains("simulate --graph moebius:3").code == 1);
  CHECK(trains("simulate --graph ring:8 --init sideways").code == 1);
  CHECK(trains("simulate --graph ring:8 --bign 4").code == 1);
  CHECK(trains("check --graph ring:8 --snapshot /nonexistent.jsonl").code == 1);
  CHECK(trains("campaign --suite nope --graphs ring:6").code == 1);
  CHECK(trains("--help").code == 0);
}

TEST_CASE("simulate, then check the last trace record") {
  const fs::path trace = temp("trains_cli_trace.jsonl");
  const fs::path metrics = temp("trains_cli_metrics.jsonl");
  const Result r = trains("simulate --graph ring:8 --init all-leaders --seed 3 --verify-window 200"
                          " --trace " + trace.string() + " --metrics " + metrics.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("\"stop_reason\":\"converged\"") != std::string::npos);
  CHECK(r.out.find("\"regime\":\"in-regime\"") != std::string::npos);
  CHECK(line_count(trace) == line_count(metrics));
  CHECK(line_count(trace) > 200);

  const Result c = trains("check --graph ring:8 --snapshot " + trace.string());
  CHECK(c.code == 0);
  CHECK(c.out.rfind("legitimate: leader ", 0) == 0);

  CHECK(trains("check --graph ring:9 --snapshot " + trace.string()).code == 1);
  fs::remove(trace);
  fs::remove(metrics);
}

TEST_CASE("round cap and illegitimate snapshots") {
  const fs::path trace = temp("trains_cli_cap.jsonl");
  const Result r = trains("simulate --graph ring:8 --init uniform:4 --max-rounds 0 --trace " +
                          trace.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("\"stop_reason\":\"cap\"") != std::string::npos);
  CHECK(line_count(trace) == 1);
  const Result c = trains("check --graph ring:8 --snapshot " + trace.string());
  CHECK(c.code == 3);
  CHECK(c.out.rfind("not legitimate: ", 0) == 0);
  fs::remove(trace);
}

TEST_CASE("replay is deterministic") {
  auto traced = [](const std::string& extra) {
    const fs::path trace = temp("trains_cli_replay.jsonl");
    trains("simulate --graph gnp:8:0.4 --init uniform --seed 9 --max-rounds 300 --trace " +
           trace.string() + extra);
    std::ifstream in(trace);
    std::stringstream text;
    text << in.rdbuf();
    fs::remove(trace);
    return text.str();
  };
  const std::string a = traced("");
  CHECK(line_count(temp("trains_cli_stdout.txt")) == 1);
  CHECK(a == traced(""));
  CHECK(a != traced(" --rng zero"));
}

TEST_CASE("small N needs the opt-in flag") {
  CHECK(trains("simulate --graph ring:40 --max-rounds 5").code == 1);
  const Result r = trains("simulate --graph ring:40 --max-rounds 5 --allow-small-N");
  CHECK(r.code == 2);
  CHECK(r.out.find("out-of-regime") != std::string::npos);
}

TEST_CASE("scripted random bits") {
  const fs::path script = temp("trains_cli_script.txt");
  {
    std::ofstream out(script);
    out << "# round node x\n0 0 1\n";
  }
  CHECK(trains("simulate --graph path:4 --max-rounds 3 --rng script:" + script.string()).code == 2);
  CHECK(trains("simulate --graph path:4 --rng script:/nonexistent").code == 1);
  fs::remove(script);
}

TEST_CASE("campaign exit codes and report file") {
  const fs::path report = temp("trains_cli_report.jsonl");
  const Result r = trains("campaign --suite convergence --graphs ring:6,path:5 --runs 2 --workers 2"
                          " --report " + report.string());
  CHECK(r.code == 0);
  CHECK(line_count(report) == 9);
  const Result purge = trains("campaign --suite local-error-purge --graphs ring:6 --runs 3");
  CHECK((purge.code == 0 || purge.code == 4));
  fs::remove(report);
}
