#include "gamerep/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "gamerep/checkpoint.hpp"
#include "gamerep/dataset.hpp"
#include "gamerep/error.hpp"
#include "gamerep/synthetic.hpp"

namespace gamerep {

using nlohmann::json;
namespace fs = std::filesystem;

double MetricSamples::mean() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double MetricSamples::sample_std() const {
  if (values.size() < 2) return 0.0;
  const double m = mean();
  double sq = 0.0;
  for (double v : values) sq += (v - m) * (v - m);
  return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

ReproduceConfig default_reproduce_config() {
  ReproduceConfig cfg;
  cfg.corpus.genre_count = 6;
  cfg.corpus.games_per_genre = 6;
  cfg.corpus.images_per_game = 200;
  cfg.corpus.image_h = 32;
  cfg.corpus.image_w = 32;
  cfg.model.input_h = 32;
  cfg.model.input_w = 32;
  cfg.model.class_count = 6;
  return cfg;
}

namespace {

struct RunFiles {
  std::ofstream history;
  std::string dir;
};

RunFiles open_run_dir(const std::string& out_dir, std::uint64_t seed,
                      const std::string& method) {
  RunFiles rf;
  if (out_dir.empty()) return rf;
  rf.dir = (fs::path(out_dir) / ("seed_" + std::to_string(seed)) / method).string();
  std::error_code ec;
  fs::create_directories(rf.dir, ec);
  if (ec) throw data_error("io", "cannot create directory '" + rf.dir + "'");
  rf.history.open(fs::path(rf.dir) / "history.jsonl");
  if (!rf.history) throw data_error("io", "cannot write history in '" + rf.dir + "'");
  return rf;
}

EpochCallback history_writer(RunFiles& rf, std::ostream* log) {
  return [&rf, log](const EpochRecord& rec, const Parameters&) {
    if (rf.history.is_open()) rf.history << epoch_record_to_json(rec) << "\n";
    if (log) {
      *log << "    " << rec.stage << " epoch " << rec.epoch << ": loss " << rec.loss;
      if (rec.train_acc) *log << ", train_acc " << *rec.train_acc;
      if (rec.val_acc) *log << ", val_acc " << *rec.val_acc;
      *log << " (" << rec.seconds << "s)\n";
    }
  };
}

void record(MethodSummary& summary, const EvalReport& report) {
  summary.train_acc.values.push_back(report.train_acc);
  summary.val_acc.values.push_back(report.val_acc);
  summary.silhouette.values.push_back(report.silhouette_score);
}

void finish_run(const RunFiles& rf, const ModelConfig& model, const Parameters& params,
                const CheckpointMeta& meta, const EvalReport& report) {
  if (rf.dir.empty()) return;
  write_checkpoint((fs::path(rf.dir) / "model.ckpt").string(), model, params, meta);
  write_eval_report(report, (fs::path(rf.dir) / "eval.json").string());
}

std::string fmt_cell(const MetricSamples& m) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%6.3f +/- %.3f", m.mean(), m.sample_std());
  return buf;
}

json method_json(const MethodSummary& m) {
  auto metric = [](const MetricSamples& s) {
    return json{{"mean", s.mean()}, {"std", s.sample_std()}, {"values", s.values}};
  };
  return json{{"train_acc", metric(m.train_acc)},
              {"val_acc", metric(m.val_acc)},
              {"silhouette", metric(m.silhouette)}};
}

}  // namespace

ReproduceResult run_reproduction(const ReproduceConfig& cfg, std::ostream* log) {
  if (cfg.seeds.empty()) throw config_error("seeds", "need at least one seed");

  ModelConfig model = cfg.model;
  model.input_h = cfg.corpus.image_h;
  model.input_w = cfg.corpus.image_w;
  model.class_count = cfg.corpus.genre_count;
  model.validate();

  if (log) *log << "generating corpus (" << cfg.corpus.genre_count << " genres x "
                << cfg.corpus.games_per_genre << " games x " << cfg.corpus.images_per_game
                << " images)...\n";
  const SyntheticDataset generator = generate_synthetic(cfg.corpus);
  LoadedDataset data = load_dataset(generator.manifest());
  const SplitSpec split =
      stratified_game_split(data.manifest, cfg.split_ratio, cfg.split_seed);
  apply_split(data, split);
  if (log) *log << "split: " << split.train_games.size() << " train games / "
                << split.val_games.size() << " val games\n";

  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw data_error("io", "cannot create directory '" + cfg.out_dir + "'");
    save_manifest(data.manifest, (fs::path(cfg.out_dir) / "manifest.json").string());
    save_split(split, (fs::path(cfg.out_dir) / "split.json").string());
  }

  ReproduceResult result;
  for (const std::uint64_t seed : cfg.seeds) {
    TrainConfig train = cfg.train;
    train.seed = seed;

    // Untrained baseline: randomly initialized encoder, no gradient steps.
    if (log) *log << "seed " << seed << ": untrained baseline\n";
    {
      const Parameters params = init_params(model, seed);
      EvalOptions opts;
      opts.train_seed = seed;
      const EvalReport report = evaluate_model(model, params, data, opts);
      record(result.untrained, report);
      RunFiles rf = open_run_dir(cfg.out_dir, seed, "untrained");
      finish_run(rf, model, params, {seed, "init"}, report);
    }

    if (log) *log << "seed " << seed << ": fully supervised\n";
    {
      RunFiles rf = open_run_dir(cfg.out_dir, seed, "supervised");
      TrainResult tr =
          train_fully_supervised(data, model, train, history_writer(rf, log));
      EvalOptions opts;
      opts.train_seed = seed;
      const EvalReport report = evaluate_model(model, tr.params, data, opts);
      record(result.supervised, report);
      finish_run(rf, model, tr.params, {seed, "supervised"}, report);
    }

    if (log) *log << "seed " << seed << ": supervised contrastive\n";
    {
      RunFiles rf = open_run_dir(cfg.out_dir, seed, "contrastive");
      const EpochCallback cb = history_writer(rf, log);
      TrainResult pre = pretrain_contrastive(data, model, train, cb);
      TrainResult fit =
          fit_classifier_frozen(std::move(pre.params), data, model, train, cb);
      EvalOptions opts;
      opts.train_seed = seed;
      const EvalReport report = evaluate_model(model, fit.params, data, opts);
      record(result.contrastive, report);
      finish_run(rf, model, fit.params, {seed, "classifier-fit"}, report);
    }
  }

  std::string table;
  table += "method                  train_acc         val_acc           silhouette\n";
  table += "untrained               " + fmt_cell(result.untrained.train_acc) + "  " +
           fmt_cell(result.untrained.val_acc) + "  " +
           fmt_cell(result.untrained.silhouette) + "\n";
  table += "fully-supervised        " + fmt_cell(result.supervised.train_acc) + "  " +
           fmt_cell(result.supervised.val_acc) + "  " +
           fmt_cell(result.supervised.silhouette) + "\n";
  table += "supervised-contrastive  " + fmt_cell(result.contrastive.train_acc) + "  " +
           fmt_cell(result.contrastive.val_acc) + "  " +
           fmt_cell(result.contrastive.silhouette) + "\n";
  result.table = table;

  if (!cfg.out_dir.empty()) {
    std::ofstream tf(fs::path(cfg.out_dir) / "table.txt");
    tf << table;
    std::ofstream sf(fs::path(cfg.out_dir) / "summary.json");
    sf << reproduce_summary_json(cfg, result) << "\n";
  }
  return result;
}

std::string reproduce_summary_json(const ReproduceConfig& cfg, const ReproduceResult& r) {
  json j;
  j["seeds"] = cfg.seeds;
  j["corpus"] = {{"genres", cfg.corpus.genre_count},
                 {"games_per_genre", cfg.corpus.games_per_genre},
                 {"images_per_game", cfg.corpus.images_per_game},
                 {"image_size", {cfg.corpus.image_h, cfg.corpus.image_w}}};
  j["split_ratio"] = cfg.split_ratio;
  j["methods"] = {{"untrained", method_json(r.untrained)},
                  {"supervised", method_json(r.supervised)},
                  {"contrastive", method_json(r.contrastive)}};
  return j.dump(2);
}

}  // namespace gamerep
