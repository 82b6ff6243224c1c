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

#include "signemo/evaluation/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "signemo/error.hpp"

namespace signemo::evaluation {

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts_)
    for (auto c : row) t += c;
  return t;
}

std::size_t ConfusionMatrix::gold_support(Emotion e) const {
  std::size_t t = 0;
  for (auto c : counts_[index_of(e)]) t += c;
  return t;
}

std::size_t ConfusionMatrix::predicted_count(Emotion e) const {
  std::size_t t = 0;
  for (const auto& row : counts_) t += row[index_of(e)];
  return t;
}

EvaluationReport evaluate(const std::vector<LabelPair>& pairs) {
  if (pairs.empty()) throw ValidationError("evaluate: no (gold, prediction) pairs");
  ConfusionMatrix cm;
  for (const auto& p : pairs) cm.add(p.gold, p.pred);
  return evaluate(cm);
}

EvaluationReport evaluate(const ConfusionMatrix& cm) {
  EvaluationReport r;
  r.confusion = cm;
  r.n = cm.total();
  if (r.n == 0) throw ValidationError("evaluate: empty confusion matrix");

  double recall_sum = 0.0;
  double f1_sum = 0.0;
  std::size_t correct = 0;
  for (Emotion e : kAllEmotions) {
    const std::size_t tp = cm.at(e, e);
    const std::size_t support = cm.gold_support(e);
    const std::size_t predicted = cm.predicted_count(e);
    correct += tp;
    auto& m = r.per_class[index_of(e)];
    m.support = support;
    m.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = support ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    const double pr = m.precision + m.recall;
    m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
    if (support > 0) {
      ++r.classes_present;
      recall_sum += m.recall;
      f1_sum += m.f1;
    }
  }
  const double present = static_cast<double>(r.classes_present);
  r.wacc_percent = 100.0 * recall_sum / present;
  r.macro_f1_percent = 100.0 * f1_sum / present;
  r.accuracy_percent = 100.0 * static_cast<double>(correct) / static_cast<double>(r.n);
  return r;
}

nlohmann::ordered_json to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["wacc_percent"] = r.wacc_percent;
  j["macro_f1_percent"] = r.macro_f1_percent;
  j["accuracy_percent"] = r.accuracy_percent;
  j["classes_present"] = r.classes_present;
  nlohmann::ordered_json per_class;
  for (Emotion e : kAllEmotions) {
    const auto& m = r.per_class[index_of(e)];
    per_class[std::string(to_string(e))] = {{"precision", m.precision},
                                            {"recall", m.recall},
                                            {"f1", m.f1},
                                            {"support", m.support}};
  }
  j["per_class"] = std::move(per_class);
  nlohmann::ordered_json confusion;
  confusion["labels"] = nlohmann::ordered_json::array();
  for (Emotion e : kAllEmotions) confusion["labels"].push_back(std::string(to_string(e)));
  confusion["rows_gold_cols_pred"] = nlohmann::ordered_json::array();
  for (const auto& row : r.confusion.counts()) confusion["rows_gold_cols_pred"].push_back(row);
  j["confusion"] = std::move(confusion);
  return j;
}

namespace {

constexpr std::array<const char*, kNumEmotions> kTableHeaders = {
    "Joy", "Sad.", "Ang.", "Dis.", "Fear", "Sur.", "Neu."};

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string format_f1_table(const std::vector<std::pair<std::string, EvaluationReport>>& rows) {
  std::size_t name_width = 5;
  for (const auto& [name, _] : rows) name_width = std::max(name_width, name.size());
  std::ostringstream out;
  char buf[64];
  out << std::string("Model") << std::string(name_width - 5, ' ') << " |";
  for (const char* h : kTableHeaders) {
    std::snprintf(buf, sizeof buf, " %6s", h);
    out << buf;
  }
  out << " |  Total\n";
  for (const auto& [name, r] : rows) {
    out << name << std::string(name_width - name.size(), ' ') << " |";
    for (Emotion e : kTableOrder) {
      std::snprintf(buf, sizeof buf, " %6s", fixed2(100.0 * r.per_class[index_of(e)].f1).c_str());
      out << buf;
    }
    std::snprintf(buf, sizeof buf, " | %6s\n", fixed2(r.macro_f1_percent).c_str());
    out << buf;
  }
  return out.str();
}

std::string format_report(const EvaluationReport& r) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "n=%zu  wAcc=%.2f%%  macroF1=%.2f%%  acc=%.2f%%\n", r.n,
                r.wacc_percent, r.macro_f1_percent, r.accuracy_percent);
  out << buf;
  out << "class      precision  recall     f1  support\n";
  for (Emotion e : kAllEmotions) {
    const auto& m = r.per_class[index_of(e)];
    std::snprintf(buf, sizeof buf, "%-9s %9.2f %7.2f %6.2f %8zu\n",
                  std::string(to_string(e)).c_str(), 100.0 * m.precision, 100.0 * m.recall,
                  100.0 * m.f1, m.support);
    out << buf;
  }
  out << "confusion (rows gold, cols pred; anger..surprise)\n";
  for (const auto& row : r.confusion.counts()) {
    for (auto c : row) {
      std::snprintf(buf, sizeof buf, "%6zu", c);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace signemo::evaluation
