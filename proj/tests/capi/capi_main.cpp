// Exercises the shared library through its C surface only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "trivar/trivar.h"

using nlohmann::json;

namespace {

// Wraps a char* the library allocated.
struct CStr {
  char* p = nullptr;
  ~CStr() { trivar_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Inst {
  trivar_instance* h = nullptr;
  ~Inst() { trivar_instance_free(h); }
};

Inst make(const char* spec) {
  Inst inst;
  REQUIRE(trivar_instance_generate(spec, &inst.h) == TRIVAR_OK);
  REQUIRE(inst.h != nullptr);
  return inst;
}

}  // namespace

TEST_CASE("version and error strings have static storage") {
  const char* v = trivar_version();
  REQUIRE(v != nullptr);
  CHECK(std::strlen(v) > 0);
  CHECK(trivar_last_error() != nullptr);
}

TEST_CASE("generate, serialize, reload, digest") {
  Inst inst = make(R"({"family":"planted-collinear","n":12,"seed":7})");
  CStr js, digest;
  REQUIRE(trivar_instance_to_json(inst.h, 1, &js.p) == TRIVAR_OK);
  REQUIRE(trivar_instance_digest(inst.h, &digest.p) == TRIVAR_OK);
  CHECK(digest.str().size() == 16);  // zero-padded 64-bit hex

  trivar_instance* back = nullptr;
  REQUIRE(trivar_instance_from_json(js.p, &back) == TRIVAR_OK);
  CStr digest2;
  REQUIRE(trivar_instance_digest(back, &digest2.p) == TRIVAR_OK);
  CHECK(digest2.str() == digest.str());
  trivar_instance_free(back);

  // Same spec regenerates the same instance.
  Inst again = make(R"({"family":"planted-collinear","n":12,"seed":7})");
  CStr digest3;
  REQUIRE(trivar_instance_digest(again.h, &digest3.p) == TRIVAR_OK);
  CHECK(digest3.str() == digest.str());
}

TEST_CASE("solve reports a verified decision") {
  Inst inst = make(R"({"family":"planted-collinear","n":12,"seed":3})");
  CStr rep;
  REQUIRE(trivar_solve(inst.h, R"({"pipeline":"211-line","check_oracle":true})", &rep.p) ==
          TRIVAR_OK);
  json j = json::parse(rep.str());
  CHECK(j["pipeline"] == "211-line");
  CHECK(j["decision"]["verdict"] == "found");
  CHECK(j["decision"]["ledger"]["total"].get<uint64_t>() > 0);
  CHECK(j["oracle_match"] == true);
  CHECK(j.contains("instance_digest"));
  CHECK(j["wall_seconds"].get<double>() >= 0.0);
}

TEST_CASE("solve dispatches every pipeline name") {
  Inst line = make(R"({"family":"uniform-random","n":10,"seed":5})");
  for (const char* p : {"auto", "211-line", "211-general", "211-alt", "direct-sort"}) {
    CStr rep;
    std::string opts = std::string(R"({"check_oracle":true,"pipeline":")") + p + "\"}";
    REQUIRE(trivar_solve(line.h, opts.c_str(), &rep.p) == TRIVAR_OK);
    CHECK(json::parse(rep.str())["oracle_match"] == true);
  }
  Inst hd = make(R"({"family":"highdim-flats","n":10,"d":3,"seed":5,"plant":true})");
  CStr rep;
  REQUIRE(trivar_solve(hd.h, R"({"pipeline":"highdim","check_oracle":true})", &rep.p) ==
          TRIVAR_OK);
  json j = json::parse(rep.str());
  CHECK(j["oracle_match"] == true);
  CHECK(j["decision"]["verdict"] == "found");
}

TEST_CASE("oracle endpoint lists triples up to the limit") {
  Inst inst = make(R"({"family":"grid","n":16,"seed":1})");
  CStr rep;
  REQUIRE(trivar_oracle(inst.h, R"({"limit":4})", &rep.p) == TRIVAR_OK);
  json j = json::parse(rep.str());
  CHECK(j["found"] == true);
  CHECK(j["count"].get<uint64_t>() >= 1);
  CHECK(j["triples"].size() <= 4);
  CHECK(j["ledger"]["total"] == 16 * 16 * 16);
}

TEST_CASE("partition stats cover the hierarchy and crossing sample") {
  Inst inst = make(R"({"family":"uniform-random","n":128,"seed":9})");
  CStr rep;
  REQUIRE(trivar_partition_stats(inst.h, R"({"r":16,"D":2,"queries":8,"seed":4})", &rep.p) ==
          TRIVAR_OK);
  json j = json::parse(rep.str());
  CHECK(j["bounds_ok"] == true);
  CHECK(j.contains("levels"));
  CHECK(j["crossing_sample"]["queries"] == 8);
  CHECK(j["crossing_sample"]["mean_reached_bottom"].get<double>() > 0);
}

TEST_CASE("bench endpoint returns fits") {
  CStr rep;
  const char* cfg = R"({"family":"planted-collinear","pipeline":"211-line",
                        "sizes":[8,12,16,20],"seeds":1,"baselines":"none","threads":1})";
  REQUIRE(trivar_bench(cfg, &rep.p) == TRIVAR_OK);
  json j = json::parse(rep.str());
  CHECK(j["main"]["per_size"].size() == 4);
  CHECK(!j["main"]["fit"].is_null());
}

TEST_CASE("input errors set status and message") {
  trivar_instance* out = nullptr;
  CHECK(trivar_instance_from_json("{\"A\": [[\"1/0\", \"2\"]]}", &out) == TRIVAR_ERR_INPUT);
  CHECK(out == nullptr);
  CHECK(std::strlen(trivar_last_error()) > 0);

  CHECK(trivar_instance_from_json("not json", &out) == TRIVAR_ERR_INPUT);
  CHECK(trivar_instance_generate(R"({"family":"nonesuch"})", &out) == TRIVAR_ERR_INPUT);

  Inst inst = make(R"({"family":"uniform-random","n":8,"seed":1})");
  char* rep = nullptr;
  CHECK(trivar_solve(inst.h, R"({"pipeline":"nonesuch"})", &rep) == TRIVAR_ERR_INPUT);
  CHECK(rep == nullptr);

  // Null arguments are input errors, not crashes.
  CHECK(trivar_solve(nullptr, "{}", &rep) == TRIVAR_ERR_INPUT);
  CHECK(trivar_instance_to_json(nullptr, 0, &rep) == TRIVAR_ERR_INPUT);
  CHECK(trivar_bench(nullptr, &rep) == TRIVAR_ERR_INPUT);
}

TEST_CASE("regime violations surface as input errors") {
  // Both flats proportional: the pipeline refuses the regime.
  const char* raw = R"({
    "highdim": {
      "d": 3,
      "A": [["1","2","3"]],
      "B": [["1","0","0"]],
      "C": [["2","0","0"]],
      "h1": ["0","0","0","1"],
      "h2": ["0","0","0","2"]
    }})";
  trivar_instance* h = nullptr;
  trivar_status st = trivar_instance_from_json(raw, &h);
  if (st == TRIVAR_OK) {
    char* rep = nullptr;
    CHECK(trivar_solve(h, R"({"pipeline":"highdim"})", &rep) == TRIVAR_ERR_INPUT);
    CHECK(std::string(trivar_last_error()).find("coincide") != std::string::npos);
    trivar_instance_free(h);
  } else {
    CHECK(st == TRIVAR_ERR_INPUT);
  }
}

TEST_CASE("string free tolerates null") { trivar_string_free(nullptr); }
