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
#include <vector>

#include <nlohmann/json.hpp>

#include "signemo/corpus/types.hpp"
#include "signemo/emotion.hpp"

namespace signemo::evaluation {

/// Agreement between two raters over item-aligned label lists.
struct AgreementReport {
  std::size_t n = 0;
  double p_o = 0.0;
  double p_e = 0.0;
  double ac1 = 0.0;
  /// Cohen's kappa, diagnostic only.
  double cohen_kappa = 0.0;
  /// Indices (into the input lists) where both raters agree.
  std::vector<std::size_t> consensus_items;
  ClassCounts per_class_consensus{};
};

/// Gwet's first-order agreement coefficient from observed and chance
/// agreement. Requires p_e < 1.
double ac1_from_agreements(double p_o, double p_e);

/// Chance agreement with K = 7: (1/(K-1)) * sum_k pi_k (1 - pi_k), where pi_k
/// is the mean of the two raters' prevalence of class k.
double gwet_chance_agreement(const std::vector<Emotion>& labels_a,
                             const std::vector<Emotion>& labels_b);

AgreementReport gwet_ac1(const std::vector<Emotion>& labels_a,
                         const std::vector<Emotion>& labels_b);

struct ConsensusResult {
  /// Copies of the agreeing records, each carrying a consensus label.
  std::vector<corpus::ClipRecord> records;
  /// Ids of records missing at least one of the two annotator labels.
  std::vector<std::string> missing;
  /// Number of records labeled by both annotators.
  std::size_t compared = 0;
  ClassCounts per_class{};
  AgreementReport agreement;
};

ConsensusResult consensus_subset(const std::vector<corpus::ClipRecord>& records,
                                 const std::string& annotator_a,
                                 const std::string& annotator_b);

nlohmann::ordered_json to_json(const AgreementReport& report);
nlohmann::ordered_json to_json(const ConsensusResult& result,
                               const std::string& annotator_a,
                               const std::string& annotator_b);

}  // namespace signemo::evaluation
