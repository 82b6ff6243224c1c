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

#include "signemo/evaluation/agreement.hpp"

#include "signemo/error.hpp"

namespace signemo::evaluation {

double ac1_from_agreements(double p_o, double p_e) {
  if (!(p_e < 1.0)) throw ValidationError("AC1 undefined for chance agreement p_e >= 1");
  return (p_o - p_e) / (1.0 - p_e);
}

namespace {

void check_lists(const std::vector<Emotion>& a, const std::vector<Emotion>& b) {
  if (a.empty() || b.empty()) throw ValidationError("agreement: empty label list");
  if (a.size() != b.size()) {
    throw ValidationError("agreement: label lists differ in length (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

double gwet_chance_agreement(const std::vector<Emotion>& a, const std::vector<Emotion>& b) {
  check_lists(a, b);
  ClassCounts ca{}, cb{};
  for (Emotion e : a) ++ca[index_of(e)];
  for (Emotion e : b) ++cb[index_of(e)];
  const double n = static_cast<double>(a.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < kNumEmotions; ++k) {
    const double pi = (static_cast<double>(ca[k]) + static_cast<double>(cb[k])) / (2.0 * n);
    sum += pi * (1.0 - pi);
  }
  return sum / static_cast<double>(kNumEmotions - 1);
}

AgreementReport gwet_ac1(const std::vector<Emotion>& a, const std::vector<Emotion>& b) {
  check_lists(a, b);
  AgreementReport r;
  r.n = a.size();
  ClassCounts ca{}, cb{};
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[index_of(a[i])];
    ++cb[index_of(b[i])];
    if (a[i] == b[i]) {
      ++agree;
      r.consensus_items.push_back(i);
      ++r.per_class_consensus[index_of(a[i])];
    }
  }
  const double n = static_cast<double>(r.n);
  r.p_o = static_cast<double>(agree) / n;
  r.p_e = gwet_chance_agreement(a, b);
  r.ac1 = ac1_from_agreements(r.p_o, r.p_e);

  double p_e_cohen = 0.0;
  for (std::size_t k = 0; k < kNumEmotions; ++k) {
    p_e_cohen += (static_cast<double>(ca[k]) / n) * (static_cast<double>(cb[k]) / n);
  }
  r.cohen_kappa = p_e_cohen < 1.0 ? (r.p_o - p_e_cohen) / (1.0 - p_e_cohen) : 1.0;
  return r;
}

ConsensusResult consensus_subset(const std::vector<corpus::ClipRecord>& records,
                                 const std::string& annotator_a,
                                 const std::string& annotator_b) {
  using corpus::LabelSource;
  ConsensusResult out;
  std::vector<Emotion> la, lb;
  std::vector<const corpus::ClipRecord*> compared;
  for (const auto& r : records) {
    const auto* a = r.find_label(LabelSource::kAnnotator, annotator_a);
    const auto* b = r.find_label(LabelSource::kAnnotator, annotator_b);
    if (!a || !b) {
      out.missing.push_back(r.clip_id);
      continue;
    }
    la.push_back(a->label);
    lb.push_back(b->label);
    compared.push_back(&r);
  }
  out.compared = compared.size();
  if (compared.empty()) return out;
  out.agreement = gwet_ac1(la, lb);
  for (std::size_t i : out.agreement.consensus_items) {
    corpus::ClipRecord rec = *compared[i];
    rec.set_label({la[i], corpus::LabelProvenance::consensus()});
    out.records.push_back(std::move(rec));
  }
  out.per_class = out.agreement.per_class_consensus;
  return out;
}

nlohmann::ordered_json to_json(const AgreementReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["p_o"] = r.p_o;
  j["p_e"] = r.p_e;
  j["ac1"] = r.ac1;
  j["cohen_kappa"] = r.cohen_kappa;
  j["consensus_count"] = r.consensus_items.size();
  nlohmann::ordered_json pc;
  for (Emotion e : kAllEmotions) pc[std::string(to_string(e))] = r.per_class_consensus[index_of(e)];
  j["per_class_consensus"] = std::move(pc);
  return j;
}

nlohmann::ordered_json to_json(const ConsensusResult& c, const std::string& annotator_a,
                               const std::string& annotator_b) {
  nlohmann::ordered_json j;
  j["annotator_a"] = annotator_a;
  j["annotator_b"] = annotator_b;
  j["compared"] = c.compared;
  j["consensus_ids"] = nlohmann::ordered_json::array();
  for (const auto& r : c.records) j["consensus_ids"].push_back(r.clip_id);
  j["missing"] = c.missing;
  if (c.compared) j["agreement"] = to_json(c.agreement);
  return j;
}

}  // namespace signemo::evaluation
