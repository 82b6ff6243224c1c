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

#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "../support/oracles.hpp"
#include "httplib.h"
#include "signemo/annotation/server.hpp"
#include "signemo/annotation/service.hpp"
#include "signemo/util/io.hpp"

namespace signemo::annotation {
namespace {

using nlohmann::json;

std::vector<corpus::ClipRecord> clips(std::size_t n) {
  std::vector<corpus::ClipRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    corpus::ClipRecord r;
    r.clip_id = "t" + std::to_string(i + 1);
    r.video_path = "clips/t" + std::to_string(i + 1) + ".mp4";
    r.signer_id = "s";
    r.end_s = 2;
    r.subtitle_text = "line " + std::to_string(i + 1);
    out.push_back(r);
  }
  return out;
}

struct Fixture {
  explicit Fixture(std::size_t n, ServiceOptions opt = {}) : dir(testing::temp_dir("annot")) {
    records = clips(n);
    opt.event_log = dir / "events.jsonl";
    options = opt;
  }
  std::unique_ptr<AnnotationService> make() {
    return std::make_unique<AnnotationService>(records, options, std::make_shared<SteppingClock>());
  }
  std::filesystem::path dir;
  std::vector<corpus::ClipRecord> records;
  ServiceOptions options;
};

AnnotationEvent press(const std::string& annotator, const std::string& clip, char key,
                      std::optional<std::uint64_t> attempt = std::nullopt) {
  AnnotationEvent ev;
  ev.annotator_id = annotator;
  ev.clip_id = clip;
  ev.key_pressed = key;
  ev.attempt = attempt;
  return ev;
}

// Serves and labels every task for `annotator` with keys[i % keys.size()].
void label_all(AnnotationService& svc, const std::string& annotator, const std::string& keys) {
  svc.open_session(annotator);
  for (std::size_t i = 0;; ++i) {
    const auto next = svc.next_task(annotator);
    if (!next.task) break;
    svc.submit_label(press(annotator, next.task->clip_id, keys[i % keys.size()]));
  }
}

TEST(Keymap, FixedTable) {
  EXPECT_EQ(emotion_for_key('u'), Emotion::kSurprise);
  EXPECT_EQ(emotion_for_key('a'), Emotion::kAnger);
  EXPECT_EQ(emotion_for_key('q'), std::nullopt);
  EXPECT_EQ(emotion_for_key('U'), std::nullopt);
  for (const auto& b : kKeymap) EXPECT_EQ(key_for(b.label), b.key);
  EXPECT_EQ(keymap_text(), "a=anger, d=disgust, f=fear, j=joy, n=neutral, s=sadness, u=surprise");
  EXPECT_EQ(keymap_json()["keys"].size(), kNumEmotions);
}

TEST(Tasks, ContextFromSubtitledNeighbours) {
  auto recs = clips(5);
  recs[2].subtitle_text.reset();
  const auto tasks = build_tasks(recs, 2, "/media/");
  ASSERT_EQ(tasks.size(), 4u);
  EXPECT_EQ(tasks[2].clip_id, "t4");
  EXPECT_EQ(tasks[2].context_before, (std::vector<std::string>{"line 1", "line 2"}));
  EXPECT_EQ(tasks[2].context_after, (std::vector<std::string>{"line 5"}));
  EXPECT_EQ(tasks[0].video_url, "/media/clips/t1.mp4");
}

TEST(Service, FreshSessionServesFirstTaskThenDone) {
  Fixture fx(3);
  auto svc = fx.make();
  svc->open_session("a1");
  const auto first = svc->next_task("a1");
  ASSERT_TRUE(first.task);
  EXPECT_EQ(first.task->clip_id, "t1");
  EXPECT_EQ(first.progress.done, 0u);
  EXPECT_EQ(first.progress.total, 3u);
  // Asking again without labeling returns the same task.
  EXPECT_EQ(svc->next_task("a1").task->clip_id, "t1");
  label_all(*svc, "a1", "n");
  const auto done = svc->next_task("a1");
  EXPECT_FALSE(done.task);
  EXPECT_EQ(done.progress.done, 3u);
}

TEST(Service, UnknownAnnotatorAndRegistry) {
  Fixture fx(2);
  fx.options.annotators = {"a1", "a2"};
  auto svc = fx.make();
  try {
    svc->next_task("ghost");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "unknown_annotator");
  }
  EXPECT_THROW(svc->open_session("intruder"), Error);
  const auto tok = svc->open_session("a1");
  EXPECT_EQ(svc->open_session("a1"), tok);
  EXPECT_TRUE(svc->check_token("a1", tok));
  EXPECT_FALSE(svc->check_token("a1", "nope"));
  EXPECT_THROW(svc->open_session(" "), ValidationError);
}

TEST(Service, KeyMapsToLabelAndInvalidKeyListsKeymap) {
  Fixture fx(2);
  auto svc = fx.make();
  svc->open_session("a1");
  const auto t = *svc->next_task("a1").task;
  try {
    svc->submit_label(press("a1", t.clip_id, 'q'));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "invalid_key");
    EXPECT_NE(std::string(e.what()).find("u=surprise"), std::string::npos);
  }
  EXPECT_EQ(svc->progress("a1").done, 0u);
  const auto r = svc->submit_label(press("a1", t.clip_id, 'u'));
  EXPECT_EQ(r.event.label, Emotion::kSurprise);
  EXPECT_EQ(r.event.timestamp, "2026-01-01T00:00:02.000Z");
  EXPECT_EQ(svc->label_of("a1", t.clip_id), Emotion::kSurprise);
}

TEST(Service, NotServedIsRejected) {
  Fixture fx(3);
  auto svc = fx.make();
  svc->open_session("a1");
  try {
    svc->submit_label(press("a1", "t3", 'j'));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "not_served");
  }
  EXPECT_THROW(svc->submit_label(press("a1", "t99", 'j')), Error);
}

TEST(Service, RelabelReplacesAndIsAudited) {
  Fixture fx(2);
  fx.options.revisit = true;
  auto svc = fx.make();
  label_all(*svc, "a1", "j");
  const auto again = svc->task("a1", "t1");
  EXPECT_EQ(again.clip_id, "t1");
  const auto r = svc->submit_label(press("a1", "t1", 's'));
  EXPECT_TRUE(r.replaced);
  EXPECT_EQ(svc->label_of("a1", "t1"), Emotion::kSadness);
  EXPECT_EQ(svc->progress("a1").done, 2u);
  ASSERT_EQ(svc->audit().size(), 1u);
  EXPECT_EQ(svc->audit()[0], (std::pair<std::string, std::string>{"a1", "t1"}));
  const auto log = util::read_file(fx.options.event_log);
  EXPECT_NE(log.find("\"replaces_previous\":true"), std::string::npos);
}

TEST(Service, RevisitOffRefusesLabeledTask) {
  Fixture fx(1);
  auto svc = fx.make();
  label_all(*svc, "a1", "j");
  try {
    svc->task("a1", "t1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "already_labeled");
  }
}

TEST(Service, DuplicateAttemptIsIdempotent) {
  Fixture fx(2);
  auto svc = fx.make();
  svc->open_session("a1");
  const auto t = *svc->next_task("a1").task;
  const auto first = svc->submit_label(press("a1", t.clip_id, 'f', 7));
  const auto size_after_first = std::filesystem::file_size(fx.options.event_log);
  const auto second = svc->submit_label(press("a1", t.clip_id, 'f', 7));
  EXPECT_TRUE(second.duplicate);
  EXPECT_FALSE(second.replaced);
  EXPECT_EQ(second.event, first.event);
  EXPECT_EQ(std::filesystem::file_size(fx.options.event_log), size_after_first);
  EXPECT_TRUE(svc->audit().empty());
}

TEST(Export, IdenticalLabelsGiveFullConsensus) {
  Fixture fx(10);
  auto svc = fx.make();
  label_all(*svc, "a1", "jsnafud");
  label_all(*svc, "a2", "jsnafud");
  const auto ex = svc->export_annotations({"a1", "a2"});
  ASSERT_TRUE(ex.consensus);
  EXPECT_EQ(ex.consensus->records.size(), 10u);
  EXPECT_DOUBLE_EQ(ex.consensus->agreement.ac1, 1.0);
  EXPECT_EQ(ex.layers.at("a1").size(), 10u);
  EXPECT_EQ(ex.layers.at("a2")[4].find_label(corpus::LabelSource::kAnnotator, std::string("a2"))->label,
            Emotion::kFear);
  EXPECT_EQ(ex.consensus->records[0].find_label(corpus::LabelSource::kConsensus)->label, Emotion::kJoy);
}

TEST(Export, NoMatchesGiveEmptyConsensus) {
  Fixture fx(6);
  auto svc = fx.make();
  label_all(*svc, "a1", "j");
  label_all(*svc, "a2", "s");
  const auto ex = svc->export_annotations({"a1", "a2"});
  EXPECT_TRUE(ex.consensus->records.empty());
  EXPECT_DOUBLE_EQ(ex.consensus->agreement.p_o, 0.0);
  const auto j = to_json(ex);
  EXPECT_TRUE(j["consensus"].empty());
}

TEST(Export, IncompleteNeedsPartialFlag) {
  Fixture fx(4);
  auto svc = fx.make();
  label_all(*svc, "a1", "n");
  svc->open_session("a2");
  svc->submit_label(press("a2", svc->next_task("a2").task->clip_id, 'n'));
  try {
    svc->export_annotations({"a1", "a2"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "incomplete");
    EXPECT_NE(std::string(e.what()).find("'a2' has 3 remaining tasks"), std::string::npos);
  }
  const auto ex = svc->export_annotations({"a1", "a2"}, true);
  EXPECT_EQ(ex.consensus->compared, 1u);
  EXPECT_EQ(ex.consensus->missing.size(), 3u);
}

TEST(Persistence, ReplayReproducesExport) {
  Fixture fx(8);
  std::string before;
  {
    auto svc = fx.make();
    label_all(*svc, "a1", "jjsn");
    label_all(*svc, "a2", "jsnn");
    before = to_json(svc->export_annotations({"a1", "a2"})).dump();
  }
  auto reloaded = fx.make();
  EXPECT_EQ(to_json(reloaded->export_annotations({"a1", "a2"})).dump(), before);
  EXPECT_FALSE(reloaded->next_task("a1").task);
}

TEST(Persistence, TornLastLineIsDropped) {
  Fixture fx(3);
  {
    auto svc = fx.make();
    svc->open_session("a1");
    svc->submit_label(press("a1", svc->next_task("a1").task->clip_id, 'j'));
  }
  {
    std::ofstream f(fx.options.event_log, std::ios::app | std::ios::binary);
    f << R"({"type":"label","annotator_id":"a1","clip_id":"t2","lab)";
  }
  auto svc = fx.make();
  EXPECT_EQ(svc->progress("a1").done, 1u);
  // The next append must land on its own line.
  svc->next_task("a1");
  auto again = fx.make();
  EXPECT_EQ(again->progress("a1").done, 1u);
}

TEST(Persistence, CorruptMiddleLineIsAParseError) {
  Fixture fx(2);
  {
    std::ofstream f(fx.options.event_log, std::ios::binary);
    f << R"({"type":"session","annotator_id":"a1","token":"x","timestamp":"t"})" << "\n"
      << "garbage\n"
      << R"({"type":"served","annotator_id":"a1","clip_id":"t1","timestamp":"t"})" << "\n";
  }
  try {
    fx.make();
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Concurrency, ParallelAnnotatorsDoNotInterfere) {
  Fixture fx(30);
  auto svc = fx.make();
  std::vector<std::thread> threads;
  for (int k = 0; k < 4; ++k) {
    threads.emplace_back([&, k] { label_all(*svc, "w" + std::to_string(k), "jsfa"); });
  }
  for (auto& t : threads) t.join();
  for (int k = 0; k < 4; ++k) EXPECT_EQ(svc->progress("w" + std::to_string(k)).done, 30u);
  auto reloaded = fx.make();
  EXPECT_EQ(to_json(reloaded->export_annotations({"w0", "w3"})).dump(),
            to_json(svc->export_annotations({"w0", "w3"})).dump());
}

class HttpApi : public ::testing::Test {
 protected:
  void SetUp() override {
    fx = std::make_unique<Fixture>(3);
    std::filesystem::create_directories(fx->dir / "media" / "clips");
    util::write_file_atomic(fx->dir / "media" / "clips" / "t1.mp4", "fakevideo");
    fx->options.media_prefix = "/media/";
    svc = fx->make();
    ServerOptions so;
    so.port = 0;
    so.media_dir = fx->dir / "media";
    server = std::make_unique<AnnotationServer>(*svc, so);
    port = server->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  void TearDown() override { server->stop(); }

  json post(const std::string& path, const json& body, int expect_status) {
    auto res = client->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, expect_status) << res->body;
    return json::parse(res->body);
  }
  json get(const std::string& path, int expect_status) {
    auto res = client->Get(path);
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, expect_status) << res->body;
    return json::parse(res->body);
  }

  std::unique_ptr<Fixture> fx;
  std::unique_ptr<AnnotationService> svc;
  std::unique_ptr<AnnotationServer> server;
  std::unique_ptr<httplib::Client> client;
  int port = 0;
};

TEST_F(HttpApi, FullSessionFlow) {
  EXPECT_EQ(get("/api/keymap", 200)["keys"][6]["key"], "u");
  const auto session = post("/api/session", {{"annotator_id", "a1"}}, 200);
  const std::string token = session["token"];
  EXPECT_EQ(session["progress"]["total"], 3);

  auto next = get("/api/session/a1/next", 200);
  EXPECT_FALSE(next["done"].get<bool>());
  EXPECT_EQ(next["task"]["clip_id"], "t1");
  EXPECT_EQ(next["task"]["video_url"], "/media/clips/t1.mp4");
  auto media = client->Get("/media/clips/t1.mp4");
  ASSERT_TRUE(media);
  EXPECT_EQ(media->body, "fakevideo");

  auto bad = post("/api/labels", {{"clip_id", "t1"}, {"annotator_id", "a1"}, {"key_pressed", "q"}, {"token", token}}, 400);
  EXPECT_EQ(bad["error"]["code"], "invalid_key");
  EXPECT_EQ(bad["error"]["keymap"].size(), 7u);

  post("/api/labels", {{"clip_id", "t1"}, {"annotator_id", "a1"}, {"key_pressed", "j"}, {"token", "wrong"}}, 401);
  post("/api/labels", {{"clip_id", "t1"}, {"annotator_id", "a1"}, {"key_pressed", "j"}, {"label", "fear"}, {"token", token}}, 400);
  post("/api/labels", {{"clip_id", "t3"}, {"annotator_id", "a1"}, {"key_pressed", "j"}, {"token", token}}, 409);

  const auto ok = post("/api/labels", {{"clip_id", "t1"}, {"annotator_id", "a1"}, {"key_pressed", "u"}, {"token", token}, {"attempt", 1}}, 200);
  EXPECT_EQ(ok["event"]["label"], "surprise");
  EXPECT_EQ(ok["progress"]["done"], 1);
  const auto dup = post("/api/labels", {{"clip_id", "t1"}, {"annotator_id", "a1"}, {"key_pressed", "u"}, {"token", token}, {"attempt", 1}}, 200);
  EXPECT_TRUE(dup["duplicate"].get<bool>());

  EXPECT_EQ(get("/api/session/a1/next", 200)["task"]["clip_id"], "t2");
  EXPECT_EQ(get("/api/session/a1/task/t1", 409)["error"]["code"], "already_labeled");
  EXPECT_EQ(get("/api/session/ghost/next", 404)["error"]["code"], "unknown_annotator");
  EXPECT_EQ(get("/api/export?annotators=a1", 409)["error"]["code"], "incomplete");
  const auto partial = get("/api/export?annotators=a1&partial=1", 200);
  EXPECT_EQ(partial["layers"]["a1"].size(), 1u);
  EXPECT_TRUE(partial["consensus"].is_null());
}

TEST_F(HttpApi, HeaderTokenAndMalformedBody) {
  const std::string token = post("/api/session", {{"annotator_id", "a9"}}, 200)["token"];
  get("/api/session/a9/next", 200);
  httplib::Headers h{{"X-Session-Token", token}};
  auto res = client->Post("/api/labels", h, R"({"clip_id":"t1","annotator_id":"a9","key_pressed":"n"})",
                          "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client->Post("/api/labels", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(json::parse(res->body)["error"]["code"], "bad_request");
}

}  // namespace
}  // namespace signemo::annotation
