#include "support/checks.hpp"

#include "sgs/matrix_game.hpp"

namespace sgs::checks {

namespace {

void note(std::vector<std::string>* why, const std::string& text) {
  if (why != nullptr) why->push_back(text);
}

}  // namespace

int ordering_violations(const ConcurrentGame& absorbed,
                        const std::vector<IterationRecord>& records, const Valuation& final_v,
                        std::vector<std::string>* why) {
  const int n = absorbed.n();
  int bad = 0;
  std::vector<Valuation> vs;
  std::vector<bool> applied;   // an improvement was applied after vs[i]
  std::vector<bool> pre_step;  // that improvement was a single-state round
  for (const auto& rec : records) {
    vs.push_back(rec.valuation);
    applied.push_back(rec.kind != StepKind::Terminal);
    pre_step.push_back(rec.kind == StepKind::PreStep);
  }
  if (vs.empty()) return 0;
  if (records.back().kind == StepKind::Terminal) {
    // Terminal records already carry the final valuation; nothing follows.
    if (final_v != vs.back()) {
      ++bad;
      note(why, "terminal run's final valuation differs from its last record");
    }
    applied.pop_back();
    pre_step.pop_back();
  } else {
    // Capped and gap-stopped runs apply one more improvement than they record.
    vs.push_back(final_v);
  }
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    if (static_cast<int>(vs[i].size()) != n || static_cast<int>(vs[i + 1].size()) != n) {
      ++bad;
      note(why, "iteration " + std::to_string(i) + ": valuation size mismatch");
      continue;
    }
    bool strict = false;
    for (int s = 0; s < n; ++s) {
      if (vs[i + 1][s] < vs[i][s]) {
        ++bad;
        note(why, "iteration " + std::to_string(i) + ": value decreased at state " +
                      absorbed.states[s]);
      }
      strict = strict || vs[i + 1][s] > vs[i][s];
    }
    const bool selector_changed =
        i + 1 < records.size() && records[i].selector.dist != records[i + 1].selector.dist;
    if ((applied[i] || selector_changed) && !strict) {
      ++bad;
      note(why, "iteration " + std::to_string(i) + ": applied improvement raised nothing");
    }
    if (pre_step[i]) {
      for (int s = 0; s < n; ++s) {
        if (vs[i + 1][s] < one_shot_value(absorbed, s, vs[i])) {
          ++bad;
          note(why, "iteration " + std::to_string(i) +
                        ": single-state round fell below the one-shot backup at state " +
                        absorbed.states[s]);
        }
      }
    }
  }
  return bad;
}

}  // namespace sgs::checks
