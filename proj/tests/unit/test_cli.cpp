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

#include <sstream>

#include <nlohmann/json.hpp>

#include "../support/oracles.hpp"
#include "signemo/annotation/service.hpp"
#include "signemo/cli/cli.hpp"
#include "signemo/corpus/manifest.hpp"
#include "signemo/util/io.hpp"

namespace signemo::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "signemo");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

// Synthetic corpus shared by the tests in this file, generated once.
const fs::path& corpus_dir() {
  static const fs::path dir = [] {
    const auto d = testing::temp_dir("cli");
    const auto r = cli({"--log-level", "off", "synth-fixtures", "--out", d.string(),
                        "--weak-per-class", "2", "--eval-per-class", "2", "--acted-per-class", "2",
                        "--frames", "12", "--base-epochs", "1"});
    if (r.code != 0) throw std::runtime_error("fixture generation failed: " + r.err);
    return d;
  }();
  return dir;
}

std::string p(const std::string& name) { return (corpus_dir() / name).string(); }

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  EXPECT_EQ(cli({}).code, kExitUsage);
  const auto unknown = cli({"frobnicate"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_NE(unknown.err.find("usage error"), std::string::npos);
  EXPECT_EQ(cli({"validate", "--manifest", "x", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"validate"}).code, kExitUsage);
  EXPECT_EQ(cli({"finetune", "--base", "b", "--manifest", "m", "--features", "f", "--out", "o",
                 "--freeze-all", "--head-only"})
                .code,
            kExitUsage);
}

TEST(Cli, RuntimeErrorPrintsOneJsonLine) {
  const auto r = cli({"--log-level", "off", "validate", "--manifest", "/nonexistent/m.jsonl"});
  EXPECT_EQ(r.code, kExitFailure);
  const auto pos = r.err.find("error: ");
  ASSERT_NE(pos, std::string::npos) << r.err;
  const auto line = r.err.substr(pos + 7, r.err.find('\n', pos) - pos - 7);
  const auto j = json::parse(line);
  EXPECT_EQ(j["code"], "io_error");
  EXPECT_FALSE(j["message"].get<std::string>().empty());
}

TEST(Cli, ValidateReportsCounts) {
  const auto r = cli({"--log-level", "off", "validate", "--manifest", p("eval.jsonl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["records"], 14);
}

TEST(Cli, MalformedManifestNamesTheLine) {
  const auto bad = testing::temp_dir("cli_bad") / "m.jsonl";
  const auto good = util::read_file(p("eval.jsonl"));
  util::write_file_atomic(bad, good.substr(0, good.find('\n') + 1) + "{\"clip_id\": 3}\n");
  const auto r = cli({"--log-level", "off", "validate", "--manifest", bad.string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("parse_error"), std::string::npos);
  EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
}

TEST(Cli, WeakLabelThenEvaluateWritesReport) {
  const auto dir = testing::temp_dir("cli_weak");
  const auto weak = (dir / "weak.labeled.jsonl").string();
  auto r = cli({"--log-level", "off", "weak-label", "--manifest", p("weak.jsonl"), "--model-id",
                "lexicon-v1", "--out", weak});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(weak + ".report.json"));
  const auto report = json::parse(util::read_file(weak + ".report.json"));
  EXPECT_EQ(report["model_id"], "lexicon-v1");

  const auto preds = (dir / "preds.jsonl").string();
  r = cli({"--log-level", "off", "llm-predict", "--manifest", p("eval.jsonl"), "--model", "mock-model",
           "--mock", p("llm_mock.json"), "--out", preds});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  r = cli({"--log-level", "off", "evaluate", "--gold", p("eval.jsonl"), "--pred", preds});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto eval = json::parse(util::read_file(preds + ".eval.json"));
  EXPECT_TRUE(eval.contains("missing_predictions"));
  EXPECT_TRUE(eval.dump().find("wacc_percent") != std::string::npos);
  EXPECT_TRUE(eval.contains("missing_predictions"));
  EXPECT_NE(r.out.find("joy"), std::string::npos);
}

TEST(Cli, ExportOnlyFromAnnotationLog) {
  const auto dir = testing::temp_dir("cli_ann");
  const auto log = (dir / "events.jsonl").string();
  const auto out = (dir / "export.json").string();
  // No sessions yet: exporting nobody is a validation error.
  auto r = cli({"--log-level", "off", "annotate-serve", "--manifest", p("eval.jsonl"), "--log", log,
                "--export-only", "--export", out});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("invalid"), std::string::npos) << r.err;

  {
    annotation::ServiceOptions opt;
    opt.event_log = log;
    annotation::AnnotationService svc(corpus::load_manifest(p("eval.jsonl")).records, opt);
    for (const std::string id : {"a1", "a2"}) {
      svc.open_session(id);
      for (std::size_t i = 0;; ++i) {
        const auto next = svc.next_task(id);
        if (!next.task) break;
        annotation::AnnotationEvent ev;
        ev.annotator_id = id;
        ev.clip_id = next.task->clip_id;
        ev.key_pressed = (id == "a2" && i % 2) ? 'n' : 'j';
        svc.submit_label(ev);
      }
    }
  }
  r = cli({"--log-level", "off", "annotate-serve", "--manifest", p("eval.jsonl"), "--log", log,
           "--export-only", "--export", out, "--annotators", "a1,a2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto ex = json::parse(util::read_file(out));
  EXPECT_EQ(ex["layers"]["a1"].size(), 14u);
  EXPECT_EQ(ex["consensus"].size(), 7u);
}

}  // namespace
}  // namespace signemo::cli
