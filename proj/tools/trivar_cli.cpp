// Command-line surface. Everything goes through the shared library's C API;
// this file only parses arguments, moves JSON strings around, and maps
// status codes to exit codes (0 solved, 1 internal failure, 2 input error,
// 3 budget abort).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trivar/trivar.h"

using nlohmann::json;

namespace {

int exit_code(trivar_status st) {
  switch (st) {
    case TRIVAR_OK:
      return 0;
    case TRIVAR_ERR_INPUT:
      return 2;
    case TRIVAR_ERR_BUDGET:
      return 3;
    case TRIVAR_ERR_INTERNAL:
    case TRIVAR_ERR_NOMEM:
      return 1;
  }
  return 1;
}

int fail(trivar_status st) {
  std::cerr << "error: " << trivar_last_error() << "\n";
  return exit_code(st);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("input", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << text << "\n";
  return out.good();
}

// Owns strings coming back from the library.
struct CStr {
  char* p = nullptr;
  ~CStr() { trivar_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct InstanceHandle {
  trivar_instance* h = nullptr;
  ~InstanceHandle() { trivar_instance_free(h); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trivar: degeneracy detection for structured triple systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(trivar_version()));

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a reproducible instance");
  std::string g_family = "uniform-random", g_curve_b = "parabola", g_curve_c = "x-axis";
  std::string g_predicate = "collinear", g_out;
  uint64_t g_n = 16, g_seed = 1;
  long long g_mag = 1 << 16;
  int g_perturb = 40, g_d = 3, g_indent = 1;
  bool g_plant = false, g_parallel = false;
  gen->add_option("--family", g_family,
                  "uniform-random|planted-collinear|planted-sparse|planted-vanishing|"
                  "on-curves|grid|near-degenerate|highdim-flats");
  gen->add_option("--n", g_n, "points per set");
  gen->add_option("--seed", g_seed, "generator seed");
  gen->add_option("--curve-b", g_curve_b, "parabola|x-axis|line|hline|cubic|circle|hyperbola");
  gen->add_option("--curve-c", g_curve_c, "curve carrying C");
  gen->add_option("--predicate", g_predicate, "collinear|unit-area|pair");
  gen->add_option("--mag", g_mag, "coordinate magnitude bound");
  gen->add_option("--perturb-k", g_perturb, "near-degenerate offset exponent");
  gen->add_option("--d", g_d, "ambient dimension (highdim-flats)");
  gen->add_flag("--plant", g_plant, "plant a witness (highdim-flats)");
  gen->add_flag("--parallel-flats", g_parallel, "parallel hyperplanes (highdim-flats)");
  gen->add_option("-o,--out", g_out, "output path (default stdout)");
  gen->add_option("--indent", g_indent, "JSON indent, negative for compact");

  // --- solve ---
  auto* solve = app.add_subcommand("solve", "run a decision pipeline on an instance");
  std::string s_input, s_pipeline = "auto", s_provider, s_report;
  uint64_t s_seed = 1;
  std::optional<uint64_t> s_g, s_h;
  int s_D = 2, s_indent = 1;
  bool s_check_oracle = false, s_direct = false;
  solve->add_option("input", s_input, "instance JSON file")->required();
  solve->add_option("--pipeline", s_pipeline,
                    "auto|211-line|211-general|211-alt|highdim|pair-demo|direct-sort");
  solve->add_option("--seed", s_seed, "pipeline seed");
  solve->add_option("--g", s_g, "partition parameter g");
  solve->add_option("--h", s_h, "partition parameter h");
  solve->add_option("--D", s_D, "partition degree");
  solve->add_option("--provider", s_provider, "partition provider name");
  solve->add_flag("--check-oracle", s_check_oracle, "cross-check with the brute-force oracle");
  solve->add_flag("--direct-sort", s_direct, "charge cell sorts instead of batched lookups");
  solve->add_option("--report", s_report, "write the run report here as well");
  solve->add_option("--indent", s_indent, "JSON indent, negative for compact");

  // --- oracle ---
  auto* orc = app.add_subcommand("oracle", "exhaustive reference decision");
  std::string o_input, o_report;
  uint64_t o_limit = 16;
  int o_indent = 1;
  orc->add_option("input", o_input, "instance JSON file")->required();
  orc->add_option("--limit", o_limit, "max triples listed");
  orc->add_option("--report", o_report, "write the report here as well");
  orc->add_option("--indent", o_indent, "JSON indent, negative for compact");

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "scaling sweep with slope fits");
  std::string b_family = "planted-sparse", b_pipeline = "211-line", b_baselines = "auto";
  std::string b_provider, b_report;
  std::vector<uint64_t> b_sizes;
  uint64_t b_seeds = 3, b_seed0 = 1;
  unsigned b_threads = 0;
  double b_budget = 0.0;
  std::optional<uint64_t> b_g, b_h;
  int b_D = 2, b_indent = 1;
  bench->add_option("--family", b_family, "instance family");
  bench->add_option("--pipeline", b_pipeline, "pipeline | direct-sort | oracle");
  bench->add_option("--sizes", b_sizes, "ascending sizes, comma separated")
      ->delimiter(',')
      ->required();
  bench->add_option("--seeds", b_seeds, "instances per size");
  bench->add_option("--seed0", b_seed0, "base seed");
  bench->add_option("--baselines", b_baselines, "auto|none|all");
  bench->add_option("--threads", b_threads, "worker threads (0: $TRIVAR_THREADS, then hardware)");
  bench->add_option("--budget-seconds", b_budget, "soft wall-clock budget; 0 = unlimited");
  bench->add_option("--g", b_g, "partition parameter g");
  bench->add_option("--h", b_h, "partition parameter h");
  bench->add_option("--D", b_D, "partition degree");
  bench->add_option("--provider", b_provider, "partition provider name");
  bench->add_option("--report", b_report, "write the report here as well");
  bench->add_option("--indent", b_indent, "JSON indent, negative for compact");

  // --- partition-stats ---
  auto* pstats = app.add_subcommand("partition-stats", "hierarchy statistics and crossings");
  std::string p_input, p_provider, p_report;
  uint64_t p_r = 16, p_seed = 1, p_queries = 0;
  int p_D = 2, p_indent = 1;
  pstats->add_option("input", p_input, "instance JSON file")->required();
  pstats->add_option("--r", p_r, "partition parameter r");
  pstats->add_option("--D", p_D, "partition degree");
  pstats->add_option("--provider", p_provider, "partition provider name");
  pstats->add_option("--seed", p_seed, "provider seed");
  pstats->add_option("--queries", p_queries, "random line queries to sample");
  pstats->add_option("--report", p_report, "write the report here as well");
  pstats->add_option("--indent", p_indent, "JSON indent, negative for compact");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      json spec{{"family", g_family}, {"n", g_n},
                {"seed", g_seed},     {"curve_b", g_curve_b},
                {"curve_c", g_curve_c}, {"predicate", g_predicate},
                {"mag", g_mag},       {"perturb_k", g_perturb},
                {"d", g_d},           {"plant", g_plant},
                {"parallel_flats", g_parallel}};
      InstanceHandle inst;
      if (auto st = trivar_instance_generate(spec.dump().c_str(), &inst.h); st != TRIVAR_OK)
        return fail(st);
      CStr text;
      if (auto st = trivar_instance_to_json(inst.h, g_indent, &text.p); st != TRIVAR_OK)
        return fail(st);
      return write_output(text.str(), g_out) ? 0 : 1;
    }

    if (solve->parsed()) {
      InstanceHandle inst;
      if (auto st = trivar_instance_from_json(read_file(s_input).c_str(), &inst.h);
          st != TRIVAR_OK)
        return fail(st);
      json opts{{"pipeline", s_direct ? std::string("direct-sort") : s_pipeline},
                {"seed", s_seed},
                {"D", s_D},
                {"check_oracle", s_check_oracle},
                {"indent", s_indent}};
      if (s_g) opts["g"] = *s_g;
      if (s_h) opts["h"] = *s_h;
      if (!s_provider.empty()) opts["provider"] = s_provider;
      CStr report;
      if (auto st = trivar_solve(inst.h, opts.dump().c_str(), &report.p); st != TRIVAR_OK)
        return fail(st);
      bool ok = write_output(report.str(), "");
      if (!s_report.empty()) ok = write_output(report.str(), s_report) && ok;
      if (s_check_oracle) {
        json parsed = json::parse(report.str());
        if (parsed.contains("oracle_match") && parsed["oracle_match"] == false) {
          std::cerr << "error: pipeline verdict disagrees with the oracle\n";
          return 1;
        }
      }
      return ok ? 0 : 1;
    }

    if (orc->parsed()) {
      InstanceHandle inst;
      if (auto st = trivar_instance_from_json(read_file(o_input).c_str(), &inst.h);
          st != TRIVAR_OK)
        return fail(st);
      json opts{{"limit", o_limit}, {"indent", o_indent}};
      CStr report;
      if (auto st = trivar_oracle(inst.h, opts.dump().c_str(), &report.p); st != TRIVAR_OK)
        return fail(st);
      bool ok = write_output(report.str(), "");
      if (!o_report.empty()) ok = write_output(report.str(), o_report) && ok;
      return ok ? 0 : 1;
    }

    if (bench->parsed()) {
      json cfg{{"family", b_family},     {"pipeline", b_pipeline},
               {"sizes", b_sizes},       {"seeds", b_seeds},
               {"seed0", b_seed0},       {"baselines", b_baselines},
               {"threads", b_threads},   {"budget_seconds", b_budget},
               {"D", b_D},               {"indent", b_indent}};
      if (b_g) cfg["g"] = *b_g;
      if (b_h) cfg["h"] = *b_h;
      if (!b_provider.empty()) cfg["provider"] = b_provider;
      CStr report;
      if (auto st = trivar_bench(cfg.dump().c_str(), &report.p); st != TRIVAR_OK)
        return fail(st);
      bool ok = write_output(report.str(), "");
      if (!b_report.empty()) ok = write_output(report.str(), b_report) && ok;
      return ok ? 0 : 1;
    }

    if (pstats->parsed()) {
      InstanceHandle inst;
      if (auto st = trivar_instance_from_json(read_file(p_input).c_str(), &inst.h);
          st != TRIVAR_OK)
        return fail(st);
      json opts{{"r", p_r},       {"D", p_D},           {"seed", p_seed},
                {"queries", p_queries}, {"indent", p_indent}};
      if (!p_provider.empty()) opts["provider"] = p_provider;
      CStr report;
      if (auto st = trivar_partition_stats(inst.h, opts.dump().c_str(), &report.p);
          st != TRIVAR_OK)
        return fail(st);
      bool ok = write_output(report.str(), "");
      if (!p_report.empty()) ok = write_output(report.str(), p_report) && ok;
      return ok ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
