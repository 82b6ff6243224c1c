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

#include "signemo/cli/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "signemo/annotation/server.hpp"
#include "signemo/annotation/service.hpp"
#include "signemo/cli/fixtures.hpp"
#include "signemo/corpus/manifest.hpp"
#include "signemo/evaluation/agreement.hpp"
#include "signemo/evaluation/metrics.hpp"
#include "signemo/features/extract.hpp"
#include "signemo/features/feature_file.hpp"
#include "signemo/kernels/kernels.hpp"
#include "signemo/llm/llm_baseline.hpp"
#include "signemo/model/checkpoint.hpp"
#include "signemo/model/pipeline.hpp"
#include "signemo/prediction.hpp"
#include "signemo/util/io.hpp"
#include "signemo/weak/weak_labeler.hpp"

namespace signemo::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string log_level = "info";
  std::size_t jobs = 1;
};

struct Ctx {
  Globals g;
  std::ostream& out;
  spdlog::logger& log;
};

void write_json(const fs::path& path, const ordered_json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  util::write_file_atomic(path, j.dump(2) + "\n");
}

corpus::Manifest load_checked(const std::string& path) {
  auto m = corpus::load_manifest(path);
  corpus::validate_manifest(m);
  return m;
}

std::vector<corpus::ClipRecord> select(const corpus::Manifest& m, const std::string& split) {
  if (split.empty()) return m.records;
  const auto name = corpus::parse_split_name(split);
  const bool known = std::any_of(m.splits.begin(), m.splits.end(),
                                 [&](const auto& s) { return s.name == name; });
  if (!known) throw ValidationError("manifest has no '" + split + "' split");
  return m.split_records(name);
}

// Keeps only clips that have a usable label and a feature file.
std::vector<corpus::ClipRecord> trainable_records(const std::vector<corpus::ClipRecord>& records,
                                                  const fs::path& features_dir, Ctx& ctx) {
  std::vector<corpus::ClipRecord> out;
  std::size_t unlabeled = 0, missing = 0;
  for (const auto& r : records) {
    if (!corpus::resolve_label(r)) {
      ++unlabeled;
    } else if (!fs::exists(features::feature_path(features_dir, r.clip_id))) {
      ++missing;
    } else {
      out.push_back(r);
    }
  }
  if (unlabeled || missing) {
    ctx.log.warn("skipping {} clips without a label and {} without a feature file", unlabeled,
                 missing);
  }
  if (out.empty()) throw ValidationError("no trainable clips (need a label and a feature file)");
  return out;
}

void log_epoch(Ctx& ctx, const model::EpochStats& s) {
  ctx.log.info("epoch {} loss {:.6f}", s.epoch, s.loss);
}

// ---- subcommand actions ---------------------------------------------------

struct ValidateArgs {
  std::string manifest, splits;
};

void do_validate(Ctx& ctx, const ValidateArgs& a) {
  auto m = a.splits.empty() ? corpus::load_manifest(a.manifest)
                            : corpus::load_manifest(a.manifest, fs::path(a.splits));
  corpus::validate_manifest(m);
  ordered_json j;
  j["records"] = m.records.size();
  ordered_json splits = ordered_json::object();
  for (const auto& s : m.splits) splits[std::string(to_string(s.name))] = s.clip_ids.size();
  j["splits"] = splits;
  std::map<std::string, std::size_t> sources;
  for (const auto& r : m.records) {
    for (const auto& l : r.labels) ++sources[std::string(to_string(l.provenance.source))];
  }
  j["labels"] = sources;
  ctx.out << j.dump() << "\n";
}

struct WeakArgs {
  std::string manifest, model_id, out, report;
  std::optional<double> min_confidence;
};

void do_weak_label(Ctx& ctx, const WeakArgs& a) {
  auto m = load_checked(a.manifest);
  const auto classifier = weak::make_classifier(a.model_id);
  weak::WeakLabelOptions opt;
  opt.min_confidence = a.min_confidence;
  opt.jobs = ctx.g.jobs;
  auto result = weak::weak_label(m.records, *classifier, opt);
  result.run.manifest_out = a.out;
  m.records = std::move(result.records);
  corpus::save_manifest(a.out, m);
  const fs::path report = a.report.empty() ? util::with_suffix(a.out, ".report.json") : fs::path(a.report);
  write_json(report, weak::to_json(result.run));
  ctx.log.info("weak-labeled {} of {} clips ({} skipped)", result.run.records_labeled,
               result.run.input_records, result.run.skipped());
}

struct ExtractArgs {
  std::string manifest, out, segment = "full", split;
  std::string face = "stub-projection", hands = "stub-synthetic";
  double window_s = 2.0;
};

void do_extract(Ctx& ctx, const ExtractArgs& a) {
  const auto m = load_checked(a.manifest);
  const auto records = select(m, a.split);
  const auto kind = features::parse_segment_kind(a.segment);
  const auto face = features::make_face_embedder(a.face);
  const auto hands = features::make_hand_detector(a.hands);
  features::SyntheticFrameSource source;
  const auto run = features::extract_manifest(records, source, *face, *hands, a.out,
                                              {kind, ctx.g.seed, a.window_s, ctx.g.jobs});
  ordered_json report;
  report["segment"] = std::string(features::to_string(kind));
  report["window_s"] = a.window_s;
  report["seed"] = ctx.g.seed;
  report["face_embedder"] = face->id();
  report["hand_detector"] = hands->id();
  const auto run_json = features::to_json(run);
  for (const auto& [k, v] : run_json.items()) report[k] = v;
  write_json(fs::path(a.out) / "extract.report.json", report);
  for (const auto& f : run.failures) ctx.log.warn("clip {}: {}", f.clip_id, f.error);
  ctx.log.info("wrote {} feature files to {}", run.written, a.out);
}

struct HyperArgs {
  std::size_t epochs = 30, batch = 8;
  double lr = 1e-4, clip_norm = 5.0;
};

model::TrainHyper to_hyper(const HyperArgs& h, std::uint64_t seed) {
  model::TrainHyper hyper;
  hyper.epochs = h.epochs;
  hyper.batch = h.batch;
  hyper.lr = h.lr;
  hyper.clip_norm = h.clip_norm;
  hyper.seed = seed;
  return hyper;
}

struct TrainArgs {
  std::string manifest, features, out, split;
  std::size_t input_dim = 596, hidden1 = 512, hidden2 = 256, max_seq_len = 300;
  std::string class_weights = "none";
  HyperArgs hyper;
};

void do_train(Ctx& ctx, const TrainArgs& a) {
  const auto m = load_checked(a.manifest);
  const auto records = trainable_records(select(m, a.split), a.features, ctx);
  model::ModelConfig cfg;
  cfg.input_dim = a.input_dim;
  cfg.hidden1 = a.hidden1;
  cfg.hidden2 = a.hidden2;
  cfg.max_seq_len = a.max_seq_len;
  auto hyper = to_hyper(a.hyper, ctx.g.seed);
  if (a.class_weights == "auto") {
    hyper.class_weights =
        model::inverse_frequency_weights(model::load_training_set(records, a.features, cfg));
  } else if (a.class_weights != "none") {
    throw ValidationError("--class-weights must be 'none' or 'auto'");
  }
  ctx.log.info("training on {} clips, kernels={}", records.size(),
               kernels::to_string(kernels::active().isa));
  const auto ckpt = model::train(records, a.features, cfg, hyper, a.manifest,
                                 [&](const auto& s) { log_epoch(ctx, s); });
  model::save_checkpoint(a.out, ckpt);
}

struct FinetuneArgs {
  std::string base, manifest, features, out, split;
  bool freeze_all = false, unfreeze_all = false, head_only = false, no_class_weights = false;
  HyperArgs hyper;
};

void do_finetune(Ctx& ctx, const FinetuneArgs& a) {
  const auto base = model::load_checkpoint(a.base);
  const auto m = load_checked(a.manifest);
  const auto records = trainable_records(select(m, a.split), a.features, ctx);
  model::FinetuneOptions opt;
  opt.trainable = a.freeze_all  ? model::Trainable::kNone
                  : a.head_only ? model::Trainable::kHeadOnly
                                : model::Trainable::kTemporalAndHead;
  opt.auto_class_weights = !a.no_class_weights;
  opt.base_name = a.base;
  ctx.log.info("fine-tuning {} on {} clips (trainable: {})", a.base, records.size(),
               model::to_string(opt.trainable));
  const auto ckpt = model::finetune(base, records, a.features, to_hyper(a.hyper, ctx.g.seed), opt,
                                    a.manifest, [&](const auto& s) { log_epoch(ctx, s); });
  model::save_checkpoint(a.out, ckpt);
}

struct PredictArgs {
  std::string checkpoint, manifest, features, out, split, report;
  bool fail_fast = false;
};

void do_predict(Ctx& ctx, const PredictArgs& a) {
  const auto ckpt = model::load_checkpoint(a.checkpoint);
  const auto m = load_checked(a.manifest);
  const auto run = model::predict_manifest(select(m, a.split), a.features, ckpt,
                                           {a.fail_fast, ctx.g.jobs});
  save_predictions(a.out, run.predictions);
  ordered_json report;
  report["predicted"] = run.predictions.size();
  ordered_json skipped = ordered_json::array();
  for (const auto& s : run.skipped) {
    skipped.push_back({{"clip_id", s.clip_id}, {"reason", s.reason}});
    ctx.log.warn("skipped {}: {}", s.clip_id, s.reason);
  }
  report["skipped"] = skipped;
  write_json(a.report.empty() ? util::with_suffix(a.out, ".report.json") : fs::path(a.report), report);
}

struct EvaluateArgs {
  std::string gold, pred, out, split, gold_source;
};

void do_evaluate(Ctx& ctx, const EvaluateArgs& a) {
  const auto m = load_checked(a.gold);
  const auto records = select(m, a.split);
  std::vector<corpus::LabelSource> priority = {corpus::LabelSource::kConsensus,
                                               corpus::LabelSource::kAnnotator,
                                               corpus::LabelSource::kGoldActed};
  if (!a.gold_source.empty()) priority = {corpus::parse_label_source(a.gold_source)};
  std::map<std::string, Emotion> preds;
  for (const auto& p : load_predictions(a.pred)) preds[p.clip_id] = p.label;

  std::vector<evaluation::LabelPair> pairs;
  std::vector<std::string> missing;
  std::size_t unlabeled = 0;
  for (const auto& r : records) {
    const auto gold = corpus::resolve_label(r, priority);
    if (!gold) {
      ++unlabeled;
      continue;
    }
    const auto it = preds.find(r.clip_id);
    if (it == preds.end()) {
      missing.push_back(r.clip_id);
      continue;
    }
    pairs.push_back({*gold, it->second});
  }
  if (pairs.empty()) throw ValidationError("no clips with both a gold label and a prediction");
  const auto report = evaluation::evaluate(pairs);
  ordered_json j;
  j["gold"] = a.gold;
  j["pred"] = a.pred;
  j["evaluated"] = pairs.size();
  j["missing_predictions"] = missing;
  j["gold_unlabeled"] = unlabeled;
  j["metrics"] = evaluation::to_json(report);
  write_json(a.out.empty() ? util::with_suffix(a.pred, ".eval.json") : fs::path(a.out), j);
  ctx.out << evaluation::format_report(report);
  if (!missing.empty()) ctx.log.warn("{} gold clips have no prediction", missing.size());
}

struct AgreeArgs {
  std::string manifest, a, b, out, consensus_out;
};

void do_agree(Ctx& ctx, const AgreeArgs& a) {
  auto m = load_checked(a.manifest);
  const auto result = evaluation::consensus_subset(m.records, a.a, a.b);
  const auto j = evaluation::to_json(result, a.a, a.b);
  if (!a.out.empty()) write_json(a.out, j);
  if (!a.consensus_out.empty()) corpus::save_records(a.consensus_out, result.records);
  ctx.out << j.dump() << "\n";
}

struct LlmArgs {
  std::string manifest, provider = "openai", model, out, mock, record, prompt, split, report;
  llm::LlmEndpointConfig cfg;
};

void do_llm(Ctx& ctx, LlmArgs a) {
  a.cfg.provider_id = a.provider;
  a.cfg.model_name = a.model;
  a.cfg.max_concurrent = std::min(a.cfg.max_concurrent, ctx.g.jobs);
  const auto m = load_checked(a.manifest);
  const auto records = select(m, a.split);
  std::unique_ptr<llm::Transport> transport;
  if (!a.mock.empty()) {
    transport = llm::MockTransport::from_file(a.mock);
  } else {
    transport = std::make_unique<llm::HttpChatTransport>(a.cfg);
  }
  std::unique_ptr<llm::RecordingTransport> recorder;
  llm::Transport* used = transport.get();
  if (!a.record.empty()) {
    recorder = std::make_unique<llm::RecordingTransport>(*transport);
    used = recorder.get();
  }
  const auto prompt = a.prompt.empty() ? llm::default_prompt() : llm::load_prompt(a.prompt);
  features::SyntheticFrameSource source;
  const auto run = llm::run_llm_baseline(records, source, a.cfg, *used, prompt);
  save_predictions(a.out, run.predictions);
  write_json(a.report.empty() ? util::with_suffix(a.out, ".report.json") : fs::path(a.report),
             llm::to_json(run, a.cfg));
  if (recorder) write_json(a.record, recorder->fixtures());
  ctx.log.info("llm baseline: {} predicted, {} unparsable, {} failed", run.predictions.size(),
               run.unparsable.size(), run.failed.size());
}

struct ServeArgs {
  std::string manifest, log, host = "127.0.0.1", media, static_dir, export_path, split;
  int port = 8080;
  std::vector<std::string> annotators;
  std::size_t context = 2;
  bool revisit = false, partial = false, export_only = false;
};

std::atomic<bool> g_stop{false};

void do_serve(Ctx& ctx, const ServeArgs& a) {
  const auto m = load_checked(a.manifest);
  annotation::ServiceOptions opt;
  opt.event_log = a.log;
  opt.context_window = a.context;
  opt.revisit = a.revisit;
  opt.annotators = a.annotators;
  if (!a.media.empty()) opt.media_prefix = "/media/";
  annotation::AnnotationService service(select(m, a.split), opt);
  if (a.export_only) {
    const auto ids = a.annotators.empty() ? service.annotators() : a.annotators;
    const auto j = annotation::to_json(service.export_annotations(ids, a.partial));
    if (a.export_path.empty()) {
      ctx.out << j.dump() << "\n";
    } else {
      write_json(a.export_path, j);
    }
    return;
  }
  annotation::AnnotationServer server(service, {a.host, a.port, a.media, a.static_dir});
  const int port = server.start();
  ctx.out << "listening on http://" << a.host << ":" << port << std::endl;
  ctx.log.info("{} tasks, event log {}", service.tasks().size(), a.log);
  g_stop = false;
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
}

// ---- option wiring --------------------------------------------------------

void add_hyper(CLI::App* sub, HyperArgs& h, std::size_t default_epochs) {
  h.epochs = default_epochs;
  sub->add_option("--epochs", h.epochs, "Training epochs")->capture_default_str();
  sub->add_option("--lr", h.lr, "Adam learning rate")->capture_default_str();
  sub->add_option("--batch", h.batch, "Mini-batch size")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--clip-norm", h.clip_norm, "Gradient norm clip (0 disables)")->capture_default_str();
}

spdlog::level::level_enum parse_level(const std::string& s) {
  const auto level = spdlog::level::from_str(s);
  if (level == spdlog::level::off && s != "off") {
    throw CLI::ValidationError("--log-level", "unknown level '" + s + "'");
  }
  return level;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  spdlog::logger log("signemo", sink);
  log.set_pattern("[%l] %v");

  CLI::App app{"Emotion recognition toolkit for sign-language signers", "signemo"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option defaults (flags override)");
  Globals g;
  app.add_option("--seed", g.seed, "Run seed")->capture_default_str();
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Maximum parallel workers")->capture_default_str()->check(CLI::PositiveNumber);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Validate a manifest and its splits");
  validate->add_option("--manifest", va.manifest, "Manifest (JSONL)")->required();
  validate->add_option("--splits", va.splits, "Split file (default: <manifest>.splits.jsonl)");

  WeakArgs wa;
  auto* weak_cmd = app.add_subcommand("weak-label", "Add text-derived weak labels from subtitles");
  weak_cmd->add_option("--manifest", wa.manifest)->required();
  weak_cmd->add_option("--model-id", wa.model_id,
                       "lexicon-v1 | uniform | constant:<label> | http(s)://endpoint")->required();
  weak_cmd->add_option("--out", wa.out, "Output manifest")->required();
  weak_cmd->add_option("--min-confidence", wa.min_confidence, "Drop predictions below this")
      ->check(CLI::Range(0.0, 1.0));
  weak_cmd->add_option("--report", wa.report, "Report path (default: <out>.report.json)");

  ExtractArgs ea;
  auto* extract = app.add_subcommand("extract-features", "Extract fused per-frame features");
  extract->add_option("--manifest", ea.manifest)->required();
  extract->add_option("--out", ea.out, "Feature directory")->required();
  extract->add_option("--segment", ea.segment, "full | random2s | post2s")->capture_default_str();
  extract->add_option("--window", ea.window_s, "Segment window in seconds")->capture_default_str();
  extract->add_option("--face-embedder", ea.face)->capture_default_str();
  extract->add_option("--hand-detector", ea.hands)->capture_default_str();
  extract->add_option("--split", ea.split, "Only this split");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train the temporal classifier from scratch");
  train->add_option("--manifest", ta.manifest)->required();
  train->add_option("--features", ta.features, "Feature directory")->required();
  train->add_option("--out", ta.out, "Checkpoint path")->required();
  train->add_option("--split", ta.split);
  train->add_option("--input-dim", ta.input_dim, "596 (face+hands) or 512 (face only)")->capture_default_str();
  train->add_option("--hidden1", ta.hidden1)->capture_default_str();
  train->add_option("--hidden2", ta.hidden2)->capture_default_str();
  train->add_option("--max-seq-len", ta.max_seq_len)->capture_default_str();
  train->add_option("--class-weights", ta.class_weights, "none | auto")->capture_default_str();
  add_hyper(train, ta.hyper, 30);

  FinetuneArgs fa;
  auto* finetune = app.add_subcommand("finetune", "Fine-tune a checkpoint on labeled clips");
  finetune->add_option("--base", fa.base, "Base checkpoint")->required();
  finetune->add_option("--manifest", fa.manifest)->required();
  finetune->add_option("--features", fa.features)->required();
  finetune->add_option("--out", fa.out)->required();
  finetune->add_option("--split", fa.split);
  auto* f1 = finetune->add_flag("--freeze-all", fa.freeze_all, "No parameter updates");
  auto* f2 = finetune->add_flag("--unfreeze-all", fa.unfreeze_all, "Update every layer (default)");
  auto* f3 = finetune->add_flag("--head-only", fa.head_only, "Update only the softmax head");
  f1->excludes(f2)->excludes(f3);
  f2->excludes(f3);
  finetune->add_flag("--no-class-weights", fa.no_class_weights, "Disable inverse-frequency weights");
  add_hyper(finetune, fa.hyper, 30);

  PredictArgs pa;
  auto* predict = app.add_subcommand("predict", "Predict class distributions per clip");
  predict->add_option("--checkpoint", pa.checkpoint)->required();
  predict->add_option("--manifest", pa.manifest)->required();
  predict->add_option("--features", pa.features)->required();
  predict->add_option("--out", pa.out, "Predictions (JSONL)")->required();
  predict->add_option("--split", pa.split);
  predict->add_option("--report", pa.report);
  predict->add_flag("--fail-fast", pa.fail_fast, "Abort on the first unreadable clip");

  EvaluateArgs eva;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
  evaluate->add_option("--gold", eva.gold, "Gold manifest")->required();
  evaluate->add_option("--pred", eva.pred, "Predictions")->required();
  evaluate->add_option("--out", eva.out, "Report path (default: <pred>.eval.json)");
  evaluate->add_option("--split", eva.split);
  evaluate->add_option("--gold-source", eva.gold_source, "Use only this label source");

  AgreeArgs aa;
  auto* agree = app.add_subcommand("agree", "Inter-annotator agreement and consensus subset");
  agree->add_option("--manifest", aa.manifest)->required();
  agree->add_option("--annotator-a", aa.a)->required();
  agree->add_option("--annotator-b", aa.b)->required();
  agree->add_option("--out", aa.out, "Agreement report (JSON)");
  agree->add_option("--consensus-out", aa.consensus_out, "Consensus manifest");

  LlmArgs la;
  auto* llm_cmd = app.add_subcommand("llm-predict", "Zero-shot multimodal LLM baseline");
  llm_cmd->add_option("--manifest", la.manifest)->required();
  llm_cmd->add_option("--provider", la.provider)->capture_default_str();
  llm_cmd->add_option("--model", la.model)->required();
  llm_cmd->add_option("--out", la.out)->required();
  llm_cmd->add_option("--mock", la.mock, "Replay recorded replies instead of calling the API");
  llm_cmd->add_option("--record", la.record, "Save replies as a mock fixture file");
  llm_cmd->add_option("--prompt", la.prompt, "Prompt asset");
  llm_cmd->add_option("--split", la.split);
  llm_cmd->add_option("--report", la.report);
  llm_cmd->add_option("--base-url", la.cfg.base_url);
  llm_cmd->add_option("--api-key-env", la.cfg.api_key_env_var)->capture_default_str();
  llm_cmd->add_option("--temperature", la.cfg.temperature)->capture_default_str();
  llm_cmd->add_option("--max-frames", la.cfg.max_frames)->capture_default_str();
  llm_cmd->add_option("--timeout", la.cfg.timeout_s)->capture_default_str();
  llm_cmd->add_option("--retries", la.cfg.retries)->capture_default_str();
  llm_cmd->add_option("--max-concurrent", la.cfg.max_concurrent)->capture_default_str();
  llm_cmd->add_option("--rpm", la.cfg.requests_per_minute, "Requests per minute (0: unlimited)")
      ->capture_default_str();

  ServeArgs sa;
  auto* serve = app.add_subcommand("annotate-serve", "Run the annotation service");
  serve->add_option("--manifest", sa.manifest)->required();
  serve->add_option("--log", sa.log, "Event log (JSONL)")->required();
  serve->add_option("--host", sa.host)->capture_default_str();
  serve->add_option("--port", sa.port, "0 picks a free port")->capture_default_str();
  serve->add_option("--annotators", sa.annotators, "Allowed annotator ids")->delimiter(',');
  serve->add_option("--media", sa.media, "Directory served under /media");
  serve->add_option("--static", sa.static_dir, "Directory served under /");
  serve->add_option("--context", sa.context, "Subtitles of context on each side")->capture_default_str();
  serve->add_option("--split", sa.split);
  serve->add_flag("--revisit", sa.revisit, "Allow reopening labeled tasks");
  serve->add_flag("--export-only", sa.export_only, "Export and exit instead of serving");
  serve->add_option("--export", sa.export_path, "Export file (with --export-only)");
  serve->add_flag("--partial", sa.partial, "Allow exporting incomplete sessions");

  SynthOptions so;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth-fixtures", "Generate the synthetic corpus");
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--weak-per-class", so.weak_per_class)->capture_default_str();
  synth->add_option("--eval-per-class", so.eval_per_class)->capture_default_str();
  synth->add_option("--acted-per-class", so.acted_per_class)->capture_default_str();
  synth->add_option("--frames", so.frames)->capture_default_str();
  synth->add_option("--fps", so.fps)->capture_default_str();
  synth->add_option("--weak-noise", so.weak_noise)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  synth->add_option("--hidden1", so.hidden1)->capture_default_str();
  synth->add_option("--hidden2", so.hidden2)->capture_default_str();
  synth->add_option("--base-epochs", so.base_epochs)->capture_default_str();
  synth->add_option("--base-lr", so.base_lr)->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    log.set_level(parse_level(g.log_level));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Ctx ctx{g, out, log};
  try {
    log.info("seed {}", g.seed);
    std::istringstream resolved(app.config_to_str(true, false));
    for (std::string line; std::getline(resolved, line);) {
      if (!line.empty()) log.info("config {}", line);
    }
    if (validate->parsed()) do_validate(ctx, va);
    else if (weak_cmd->parsed()) do_weak_label(ctx, wa);
    else if (extract->parsed()) do_extract(ctx, ea);
    else if (train->parsed()) do_train(ctx, ta);
    else if (finetune->parsed()) do_finetune(ctx, fa);
    else if (predict->parsed()) do_predict(ctx, pa);
    else if (evaluate->parsed()) do_evaluate(ctx, eva);
    else if (agree->parsed()) do_agree(ctx, aa);
    else if (llm_cmd->parsed()) do_llm(ctx, la);
    else if (serve->parsed()) do_serve(ctx, sa);
    else if (synth->parsed()) {
      so.seed = g.seed;
      so.jobs = g.jobs;
      out << write_synth_fixtures(synth_out, so).dump() << "\n";
    }
  } catch (const std::exception& e) {
    std::string code = "internal";
    if (const auto* se = dynamic_cast<const Error*>(&e)) code = se->code();
    else if (dynamic_cast<const fs::filesystem_error*>(&e)) code = "io_error";
    else if (dynamic_cast<const nlohmann::json::exception*>(&e)) code = "parse_error";
    log.flush();
    err << "error: " << ordered_json{{"code", code}, {"message", e.what()}}.dump() << std::endl;
    return kExitFailure;
  }
  log.flush();
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace signemo::cli
