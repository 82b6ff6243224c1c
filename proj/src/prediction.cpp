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

#include "signemo/prediction.hpp"

#include <nlohmann/json.hpp>

#include "signemo/error.hpp"
#include "signemo/util/io.hpp"

namespace signemo {

Prediction Prediction::from_distribution(std::string clip_id, const EmotionDistribution& dist) {
  if (!is_distribution(dist)) {
    throw ValidationError("prediction for '" + clip_id + "' is not a probability distribution");
  }
  return {std::move(clip_id), dist, argmax(dist)};
}

std::string serialize_predictions(const std::vector<Prediction>& predictions) {
  std::string out;
  for (const auto& p : predictions) {
    nlohmann::ordered_json j;
    j["clip_id"] = p.clip_id;
    j["label"] = std::string(to_string(p.label));
    nlohmann::ordered_json d;
    for (Emotion e : kAllEmotions) d[std::string(to_string(e))] = p.distribution[index_of(e)];
    j["distribution"] = std::move(d);
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_predictions(const std::filesystem::path& path,
                      const std::vector<Prediction>& predictions) {
  util::write_file_atomic(path, serialize_predictions(predictions));
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  util::for_each_line(path, [&](std::string_view line, std::size_t n) {
    try {
      const auto j = nlohmann::json::parse(line);
      EmotionDistribution dist{};
      for (Emotion e : kAllEmotions) {
        dist[index_of(e)] = j.at("distribution").at(std::string(to_string(e))).get<double>();
      }
      auto p = Prediction::from_distribution(j.at("clip_id").get<std::string>(), dist);
      if (j.contains("label") && parse_emotion(j["label"].get<std::string>()) != p.label) {
        throw ValidationError("label is not the argmax of the distribution");
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), n, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(path.string(), n, e.what());
    }
  });
  return out;
}

}  // namespace signemo
