/*
 * Copyright 2026 The signemo Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "signemo/emotion.hpp"

namespace signemo::evaluation {

struct LabelPair {
  Emotion gold;
  Emotion pred;
};

/// Rows are gold labels, columns are predictions.
class ConfusionMatrix {
 public:
  void add(Emotion gold, Emotion pred) { ++counts_[index_of(gold)][index_of(pred)]; }
  std::size_t at(Emotion gold, Emotion pred) const {
    return counts_[index_of(gold)][index_of(pred)];
  }
  std::size_t total() const;
  std::size_t gold_support(Emotion e) const;
  std::size_t predicted_count(Emotion e) const;
  const PerEmotion<PerEmotion<std::size_t>>& counts() const { return counts_; }

 private:
  PerEmotion<PerEmotion<std::size_t>> counts_{};
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

/// Metrics in fractions internally; the *_percent members are the same
/// values times 100. Rounding happens only in the formatters.
struct EvaluationReport {
  ConfusionMatrix confusion;
  PerEmotion<ClassMetrics> per_class{};
  /// Mean per-class recall over classes present in gold (balanced accuracy).
  double wacc_percent = 0.0;
  /// Mean per-class F1 over classes present in gold.
  double macro_f1_percent = 0.0;
  /// Plain instance accuracy, reported alongside for reference.
  double accuracy_percent = 0.0;
  std::size_t n = 0;
  std::size_t classes_present = 0;
};

EvaluationReport evaluate(const std::vector<LabelPair>& pairs);
EvaluationReport evaluate(const ConfusionMatrix& confusion);

nlohmann::ordered_json to_json(const EvaluationReport& report);

/// Fixed-width table with per-class F1 columns (Joy .. Neu.) and the macro
/// total, e.g. for pasting model comparisons side by side.
std::string format_f1_table(const std::vector<std::pair<std::string, EvaluationReport>>& rows);

/// Human-readable summary: wAcc, macro F1, per-class P/R/F1 and the confusion.
std::string format_report(const EvaluationReport& report);

}  // namespace signemo::evaluation
