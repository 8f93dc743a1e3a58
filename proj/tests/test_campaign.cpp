#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "trains/campaign.hpp"
#include "trains/fuzz.hpp"

using namespace trains;

namespace {

CampaignConfig config(Suite suite, std::vector<std::string> graphs, std::size_t runs) {
  CampaignConfig c;
  c.suite = suite;
  c.graphs = std::move(graphs);
  c.runs = runs;
  c.seed = 100;
  return c;
}

std::string report_text(const CampaignConfig& c) {
  std::ostringstream out;
  write_report(out, run_campaign(c));
  return out.str();
}

}  // namespace

TEST_CASE("suite names") {
  for (auto s : {Suite::Closure, Suite::LeaderCreation, Suite::MarkedVanish, Suite::TrainIncr,
                 Suite::LegGrow, Suite::Convergence, Suite::LocalErrorPurge})
    CHECK(parse_suite(to_string(s)) == s);
  CHECK(to_string(Suite::LegGrow) == "leg-grow");
  CHECK_THROWS(parse_suite("closed"));
}

TEST_CASE("reports are byte-identical across runs and worker counts") {
  CampaignConfig c = config(Suite::Convergence, {"ring:6", "gnp:7:0.5"}, 3);
  c.workers = 1;
  const std::string one = report_text(c);
  c.workers = 4;
  CHECK(report_text(c) == one);
  CHECK(report_text(c) == one);
  CHECK(one.find("\"summary\"") != std::string::npos);

  c.seed = 101;
  CHECK(report_text(c) != one);
}

TEST_CASE("small suites pass") {
  struct Case {
    Suite suite;
    std::vector<std::string> graphs;
  };
  const Case cases[] = {
      {Suite::Closure, {"ring:6", "path:5"}},
      {Suite::LeaderCreation, {"ring:10", "grid:2x3"}},
      {Suite::MarkedVanish, {"path:6", "ring:8"}},
      {Suite::TrainIncr, {"ring:10", "path:8"}},
      {Suite::LegGrow, {"ring:7", "path:6"}},
      {Suite::Convergence, {"ring:8", "complete:6"}},
  };
  for (const Case& k : cases) {
    CAPTURE(to_string(k.suite));
    CampaignConfig c = config(k.suite, k.graphs, 3);
    c.closure_window = 500;
    c.workers = 2;
    const CampaignReport r = run_campaign(c);
    CHECK(r.summary.pass);
    CHECK(r.summary.failed == 0);
    CHECK(r.audit.space_violations == 0);
    CHECK(r.audit.bit_violations == 0);
    CHECK(r.audit.incr_violations == 0);
    CHECK(r.audit.local_errors_later == 0);
    CHECK(r.audit.tail_carry_later == 0);
  }
}

TEST_CASE("row counts and closure outcome") {
  CampaignConfig c = config(Suite::Convergence, {"ring:6", "path:5"}, 4);
  CHECK(run_campaign(c).rows.size() == 16);  // two starts per seed

  c = config(Suite::Closure, {"ring:6"}, 2);
  c.closure_window = 200;
  const CampaignReport r = run_campaign(c);
  REQUIRE(r.rows.size() == 2);
  for (const RunRow& row : r.rows) {
    CHECK(row.outcome == "converged");
    CHECK(row.violations.empty());
    CHECK(row.audit.rounds >= *row.rounds + 200);
  }

  c.max_rounds = 3;
  const CampaignReport capped = run_campaign(c);
  CHECK(capped.rows[0].outcome == "cap");
  CHECK(capped.summary.converged == 0);
}

TEST_CASE("train-incr logs qualifying pairs") {
  const CampaignReport r = run_campaign(config(Suite::TrainIncr, {"ring:12"}, 4));
  for (const RunRow& row : r.rows) CHECK(row.audit.incr_pairs > 0);
  CHECK_THROWS_AS(run_campaign(config(Suite::TrainIncr, {"complete:6"}, 1)), InfeasibleFuzz);
}

TEST_CASE("leg-grow needs a ring or path") {
  CHECK_THROWS_AS(run_campaign(config(Suite::LegGrow, {"grid:3x3"}, 1)), InfeasibleFuzz);
  const CampaignReport r = run_campaign(config(Suite::LegGrow, {"ring:9"}, 2));
  for (const RunRow& row : r.rows) CHECK(row.init.find("emitter=") != std::string::npos);
}

TEST_CASE("bad input") {
  CHECK_THROWS(run_campaign(config(Suite::Closure, {"moebius:4"}, 1)));
  CampaignConfig c = config(Suite::Closure, {"ring:6"}, 1);
  c.train_length = 3;
  CHECK_THROWS(run_campaign(c));
}
