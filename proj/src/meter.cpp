#include "meter.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "rational.hpp"

namespace trivar {

const char* phase_name(Phase ph) {
  switch (ph) {
    case Phase::partition_build: return "partition_build";
    case Phase::fredman_primal: return "fredman_primal";
    case Phase::fredman_dual: return "fredman_dual";
    case Phase::sign_resolution: return "sign_resolution";
    case Phase::search: return "search";
    case Phase::degeneracy: return "degeneracy";
    case Phase::oracle: return "oracle";
  }
  return "unknown";
}

namespace {
inline size_t cell_index(int degree, int arity) {
  int d = std::clamp(degree, 0, 63);
  int a = std::clamp(arity, 0, 7);
  return static_cast<size_t>(d) * 8 + static_cast<size_t>(a);
}
}  // namespace

void SignTestLedger::record(Phase ph, int degree, int arity, uint64_t times) {
  cells_[static_cast<size_t>(ph)][cell_index(degree, arity)] += times;
}

bool SignTestLedger::record_memo(Phase ph, int degree, int arity, uint64_t identity) {
  uint64_t key = hash_mix(hash_mix(static_cast<uint64_t>(ph), identity),
                          (static_cast<uint64_t>(degree) << 8) | static_cast<uint64_t>(arity));
  if (!seen_.insert(key).second) {
    ++memo_hits_;
    return false;
  }
  record(ph, degree, arity);
  return true;
}

uint64_t SignTestLedger::total() const {
  uint64_t t = 0;
  for (const auto& phase : cells_)
    for (uint64_t c : phase) t += c;
  return t;
}

uint64_t SignTestLedger::total(Phase ph) const {
  uint64_t t = 0;
  for (uint64_t c : cells_[static_cast<size_t>(ph)]) t += c;
  return t;
}

uint64_t SignTestLedger::total_excluding_partition_build() const {
  return total() - total(Phase::partition_build);
}

std::map<int, uint64_t> SignTestLedger::by_degree(Phase ph) const {
  std::map<int, uint64_t> out;
  const auto& phase = cells_[static_cast<size_t>(ph)];
  for (int d = 0; d <= kMaxDegree; ++d) {
    uint64_t t = 0;
    for (int a = 0; a <= kMaxArity; ++a) t += phase[cell_index(d, a)];
    if (t > 0) out[d] = t;
  }
  return out;
}

void SignTestLedger::merge(const SignTestLedger& other) {
  for (int p = 0; p < kNumPhases; ++p)
    for (size_t i = 0; i < cells_[p].size(); ++i) cells_[p][i] += other.cells_[p][i];
  seen_.insert(other.seen_.begin(), other.seen_.end());
  memo_hits_ += other.memo_hits_;
}

void SignTestLedger::reset() {
  for (auto& phase : cells_) phase.fill(0);
  seen_.clear();
  memo_hits_ = 0;
}

std::string SignTestLedger::report_json(int indent) const {
  nlohmann::json phases = nlohmann::json::object();
  for (int p = 0; p < kNumPhases; ++p) {
    Phase ph = static_cast<Phase>(p);
    uint64_t t = total(ph);
    if (t == 0) continue;
    nlohmann::json deg = nlohmann::json::object();
    for (auto& [d, c] : by_degree(ph)) deg[std::to_string(d)] = c;
    phases[phase_name(ph)] = {{"total", t}, {"by_degree", std::move(deg)}};
  }
  nlohmann::json j = {
      {"total", total()},
      {"total_excluding_partition_build", total_excluding_partition_build()},
      {"memo_hits", memo_hits_},
      {"phases", std::move(phases)},
  };
  return j.dump(indent);
}

}  // namespace trivar
