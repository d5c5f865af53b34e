#include <nlohmann/json.hpp>

#include "doctest.h"
#include "meter.hpp"

using namespace trivar;

TEST_CASE("ledger totals by phase and degree") {
  SignTestLedger led;
  led.record(Phase::search, 2, 4);
  led.record(Phase::search, 2, 4, 3);
  led.record(Phase::oracle, 1);
  CHECK(led.total() == 5);
  CHECK(led.total(Phase::search) == 4);
  CHECK(led.total(Phase::oracle) == 1);
  auto by_deg = led.by_degree(Phase::search);
  CHECK(by_deg[2] == 4);
}

TEST_CASE("partition build excluded from the headline count") {
  SignTestLedger led;
  led.record(Phase::partition_build, 2, 2, 10);
  led.record(Phase::search, 2, 4, 7);
  CHECK(led.total() == 17);
  CHECK(led.total_excluding_partition_build() == 7);
}

TEST_CASE("memoized tests charge once per identity") {
  SignTestLedger led;
  CHECK(led.record_memo(Phase::sign_resolution, 2, 4, 12345));
  CHECK(!led.record_memo(Phase::sign_resolution, 2, 4, 12345));
  CHECK(led.record_memo(Phase::sign_resolution, 2, 4, 54321));
  CHECK(led.total() == 2);
  CHECK(led.memo_hits() == 1);
}

TEST_CASE("merge and reset") {
  SignTestLedger a, b;
  a.record(Phase::search, 2);
  b.record(Phase::search, 3);
  b.record(Phase::degeneracy, 1, 2, 4);
  a.merge(b);
  CHECK(a.total() == 6);
  CHECK(a.total(Phase::degeneracy) == 4);
  a.reset();
  CHECK(a.total() == 0);
}

TEST_CASE("report json shape") {
  SignTestLedger led;
  led.record(Phase::fredman_primal, 2, 4, 5);
  led.record(Phase::partition_build, 1, 2, 2);
  auto j = nlohmann::json::parse(led.report_json());
  CHECK(j["total"] == 7);
  CHECK(j["total_excluding_partition_build"] == 5);
  CHECK(j["phases"].contains("fredman_primal"));
  CHECK(j["phases"]["fredman_primal"]["total"] == 5);
  CHECK(j["phases"]["fredman_primal"]["by_degree"]["2"] == 5);
}

TEST_CASE("degree clamp keeps huge degrees countable") {
  SignTestLedger led;
  led.record(Phase::search, 1000);
  CHECK(led.total() == 1);
  auto by_deg = led.by_degree(Phase::search);
  CHECK(by_deg.begin()->first <= 63);
}
