#include "trivar/trivar.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "bench.hpp"
#include "curve.hpp"
#include "instance.hpp"
#include "oracle.hpp"
#include "partition.hpp"
#include "pipeline.hpp"
#include "rng.hpp"

using nlohmann::json;

struct trivar_instance {
  trivar::Instance inst;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

trivar_status map_code(trivar::Error::Code c) {
  switch (c) {
    case trivar::Error::Code::invalid_input:
    case trivar::Error::Code::domain:
      return TRIVAR_ERR_INPUT;
    case trivar::Error::Code::budget:
      return TRIVAR_ERR_BUDGET;
    case trivar::Error::Code::internal:
      return TRIVAR_ERR_INTERNAL;
  }
  return TRIVAR_ERR_INTERNAL;
}

template <typename Fn>
trivar_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const trivar::Error& e) {
    g_last_error = e.what();
    return map_code(e.code);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TRIVAR_ERR_NOMEM;
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return TRIVAR_ERR_INPUT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TRIVAR_ERR_INTERNAL;
  }
}

trivar_status emit(const json& j, int indent, char** out) {
  std::string text = j.dump(indent);
  *out = dup_string(text);
  if (!*out) {
    g_last_error = "out of memory";
    return TRIVAR_ERR_NOMEM;
  }
  return TRIVAR_OK;
}

json parse_options(const char* options_json) {
  if (!options_json || !*options_json) return json::object();
  json j = json::parse(options_json);
  if (!j.is_object()) throw trivar::input_error("options must be a JSON object");
  return j;
}

uint64_t digest_of(const trivar::Instance& inst) { return inst.digest(); }

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

extern "C" {

const char* trivar_version(void) { return "trivar 1.0.0"; }

const char* trivar_last_error(void) { return g_last_error.c_str(); }

void trivar_string_free(char* s) { std::free(s); }

trivar_status trivar_instance_from_json(const char* text, trivar_instance** out) {
  if (!text || !out) {
    g_last_error = "null argument";
    return TRIVAR_ERR_INPUT;
  }
  return guarded([&]() {
    auto* h = new trivar_instance{trivar::Instance::from_json(text)};
    *out = h;
    return TRIVAR_OK;
  });
}

trivar_status trivar_instance_generate(const char* spec_json, trivar_instance** out) {
  if (!out) {
    g_last_error = "null argument";
    return TRIVAR_ERR_INPUT;
  }
  return guarded([&]() {
    json j = parse_options(spec_json);
    trivar::InstanceSpec spec;
    spec.family = j.value("family", spec.family);
    spec.n = j.value("n", spec.n);
    spec.seed = j.value("seed", spec.seed);
    spec.curve_b = j.value("curve_b", spec.curve_b);
    spec.curve_c = j.value("curve_c", spec.curve_c);
    spec.predicate = j.value("predicate", spec.predicate);
    spec.mag = j.value("mag", spec.mag);
    spec.perturb_k = j.value("perturb_k", spec.perturb_k);
    spec.d = j.value("d", spec.d);
    spec.plant = j.value("plant", spec.plant);
    spec.parallel_flats = j.value("parallel_flats", spec.parallel_flats);
    auto* h = new trivar_instance{trivar::generate(spec)};
    *out = h;
    return TRIVAR_OK;
  });
}

trivar_status trivar_instance_to_json(const trivar_instance* inst, int indent, char** out) {
  if (!inst || !out) {
    g_last_error = "null argument";
    return TRIVAR_ERR_INPUT;
  }
  return guarded([&]() {
    std::string text = inst->inst.to_json(indent);
    *out = dup_string(text);
    if (!*out) {
      g_last_error = "out of memory";
      return TRIVAR_ERR_NOMEM;
    }
    return TRIVAR_OK;
  });
}

trivar_status trivar_instance_digest(const trivar_instance* inst, char** out) {
  if (!inst || !out) {
    g_last_error = "null argument";
    return TRIVAR_ERR_INPUT;
  }
  return guarded([&]() {
    *out = dup_string(hex64(digest_of(inst->inst)));
    if (!*out) {
      g_last_error = "out of memory";
      return TRIVAR_ERR_NOMEM;
    }
    return TRIVAR_OK;
  });
}

void trivar_instance_free(trivar_instance* inst) { delete inst; }

trivar_status trivar_solve(const trivar_instance* inst, const char* options_json,
                           char** report_out) {
  if (!inst || !report_out) {
    g_last_error = "null argument";
    return TRIVAR_ERR_INPUT;
  }
  return guarded([&]() {
    json j = parse_options(options_json);
    std::string pipeline = j.value("pipeline", std::string("auto"));
    trivar::PipelineOptions opt;
    opt.seed = j.value("seed", uint64_t{1});
    if (j.contains("g")) opt.g = j.at("g").get<size_t>();
    if (j.contains("h")) opt.h = j.at("h").get<size_t>();
    opt.D = j.value("D", opt.D);
    opt.provider = j.value("provider", opt.provider);
    opt.direct_sort = j.value("direct_sort", opt.direct_sort);
    int indent = j.value("indent", -1);

    auto t0 = std::chrono::steady_clock::now();
    trivar::Decision dec = pipeline == "direct-sort"
                               ? trivar::collinear_211_directsort(inst->inst)
                               : trivar::run_pipeline(pipeline, inst->inst, opt);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json report;
    report["instance_digest"] = hex64(digest_of(inst->inst));
    report["pipeline"] = pipeline;
    report["decision"] = json::parse(dec.to_json());
    report["wall_seconds"] = secs;
    report["config"] = j;
    if (j.value("check_oracle", false)) {
      trivar::SignTestLedger led;
      bool oracle = trivar::oracle_has_triple(inst->inst, &led);
      report["oracle_match"] = (oracle == dec.found);
      report["oracle_found"] = oracle;
    }
    return emit(report, indent, report_out);
  });
}

trivar_status trivar_oracle(const trivar_instance* inst, const char* options_json,
                            char** report_out) {
  if (!inst || !report_out) {
    g_last_error = "null argument";
    return TRIVAR_ERR_INPUT;
  }
  return guarded([&]() {
    json j = parse_options(options_json);
    size_t limit = j.value("limit", size_t{16});
    int indent = j.value("indent", -1);
    const trivar::Instance& in = inst->inst;

    trivar::SignTestLedger led;
    std::vector<trivar::Triple> triples;
    if (in.highdim) {
      triples = trivar::brute_collinear_ddim(in.highdim->A, in.highdim->B, in.highdim->C, &led);
    } else if (in.F || in.G) {
      trivar::MultiPoly F = in.F ? *in.F : trivar::collinearity_poly();
      triples = trivar::brute_vanish(F, in.G ? &*in.G : nullptr, in.A, in.B_points(),
                                     in.C_points(), &led);
    } else {
      triples = trivar::brute_collinear(in.A, in.B_points(), in.C_points(), &led);
    }

    json report;
    report["found"] = !triples.empty();
    report["count"] = triples.size();
    json arr = json::array();
    for (size_t k = 0; k < triples.size() && k < limit; ++k)
      arr.push_back({triples[k].i, triples[k].j, triples[k].k});
    report["triples"] = arr;
    report["ledger"] = json::parse(led.report_json());
    return emit(report, indent, report_out);
  });
}

trivar_status trivar_partition_stats(const trivar_instance* inst, const char* options_json,
                                     char** report_out) {
  if (!inst || !report_out) {
    g_last_error = "null argument";
    return TRIVAR_ERR_INPUT;
  }
  return guarded([&]() {
    json j = parse_options(options_json);
    const trivar::Instance& in = inst->inst;
    if (in.A.empty()) throw trivar::input_error("partition stats: instance has no A points");
    size_t r = j.value("r", size_t{16});
    int D = j.value("D", 2);
    uint64_t seed = j.value("seed", uint64_t{1});
    std::string provider = j.value("provider", std::string("iterated-ham-sandwich"));
    size_t queries = j.value("queries", size_t{0});
    int indent = j.value("indent", -1);

    trivar::SignTestLedger led;
    trivar::PartitionTree tree =
        trivar::build_hierarchy(in.A, r, D, trivar::provider_by_name(provider), seed, &led);

    json report = json::parse(tree.stats_json());
    report["build_ledger"] = json::parse(led.report_json());

    if (queries > 0) {
      // Random secant lines through the cloud's integer bounding box.
      long lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
      bool first = true;
      for (const auto& p : in.A) {
        double x = p[0].to_double(), y = p[1].to_double();
        long xl = static_cast<long>(std::floor(x)), xh = static_cast<long>(std::ceil(x));
        long yl = static_cast<long>(std::floor(y)), yh = static_cast<long>(std::ceil(y));
        if (first) {
          lo0 = xl;
          hi0 = xh;
          lo1 = yl;
          hi1 = yh;
          first = false;
        } else {
          lo0 = std::min(lo0, xl);
          hi0 = std::max(hi0, xh);
          lo1 = std::min(lo1, yl);
          hi1 = std::max(hi1, yh);
        }
      }
      if (hi0 <= lo0) hi0 = lo0 + 1;
      if (hi1 <= lo1) hi1 = lo1 + 1;
      trivar::SplitMix64 rng(seed ^ 0x9e3779b97f4a7c15ull);
      trivar::SignTestLedger qled;
      uint64_t reach_all = 0, reach_bottom = 0;
      for (size_t q = 0; q < queries; ++q) {
        long x0 = rng.uniform(lo0, hi0), y0 = rng.uniform(lo1, hi1);
        long x1 = rng.uniform(lo0, hi0), y1 = rng.uniform(lo1, hi1);
        if (x0 == x1 && y0 == y1) ++x1;
        trivar::ParamCurve line(
            trivar::UniPoly({trivar::Rational(x0), trivar::Rational(x1 - x0)}),
            trivar::UniPoly({trivar::Rational(y0), trivar::Rational(y1 - y0)}));
        auto reached = trivar::cells_reached_by_curve(tree, line, &qled);
        reach_all += reached.size();
        for (uint32_t nid : reached)
          if (tree.node(nid).bottom) ++reach_bottom;
      }
      report["crossing_sample"] = {
          {"queries", queries},
          {"mean_reached_nodes", static_cast<double>(reach_all) / static_cast<double>(queries)},
          {"mean_reached_bottom",
           static_cast<double>(reach_bottom) / static_cast<double>(queries)},
          {"query_ledger", json::parse(qled.report_json())}};
    }
    return emit(report, indent, report_out);
  });
}

trivar_status trivar_bench(const char* config_json, char** report_out) {
  if (!report_out) {
    g_last_error = "null argument";
    return TRIVAR_ERR_INPUT;
  }
  return guarded([&]() {
    json j = parse_options(config_json);
    trivar::BenchConfig cfg;
    cfg.family = j.value("family", cfg.family);
    cfg.pipeline = j.value("pipeline", cfg.pipeline);
    if (j.contains("sizes")) cfg.sizes = j.at("sizes").get<std::vector<size_t>>();
    cfg.seeds = j.value("seeds", cfg.seeds);
    cfg.seed0 = j.value("seed0", cfg.seed0);
    cfg.baselines = j.value("baselines", cfg.baselines);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.budget_seconds = j.value("budget_seconds", cfg.budget_seconds);
    if (j.contains("g")) cfg.opt.g = j.at("g").get<size_t>();
    if (j.contains("h")) cfg.opt.h = j.at("h").get<size_t>();
    cfg.opt.D = j.value("D", cfg.opt.D);
    cfg.opt.provider = j.value("provider", cfg.opt.provider);
    int indent = j.value("indent", -1);
    return emit(trivar::run_bench(cfg), indent, report_out);
  });
}

}  // extern "C"
