#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gamerep/evaluate.hpp"
#include "gamerep/synthetic_config.hpp"
#include "gamerep/trainer.hpp"

namespace gamerep {

/// Self-contained comparison run: generate a corpus, split it game-disjoint,
/// train both methods over a seed list, and evaluate an untrained baseline,
/// producing the three-way table (untrained / fully supervised / supervised
/// contrastive) x (train acc / val acc / silhouette).
struct ReproduceConfig {
  SyntheticConfig corpus;  // see default_reproduce_config()
  double split_ratio = 0.75;
  std::uint64_t split_seed = 1;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  ModelConfig model;
  TrainConfig train;
  std::string out_dir;  // empty: keep everything in memory
};

/// The stock configuration: 6 genres x 6 games x 200 images at 32x32,
/// 75/25 game-disjoint split, 10 epochs per stage.
ReproduceConfig default_reproduce_config();

struct MetricSamples {
  std::vector<double> values;

  double mean() const;
  double sample_std() const;  // n-1 normalization; 0 for a single value
};

struct MethodSummary {
  MetricSamples train_acc;
  MetricSamples val_acc;
  MetricSamples silhouette;
};

struct ReproduceResult {
  MethodSummary untrained;
  MethodSummary supervised;
  MethodSummary contrastive;
  std::string table;  // human-readable 3-row comparison
};

/// Runs the whole comparison. When out_dir is set, writes (all byte-stable
/// given the same config): manifest.json, split.json, per seed and method
/// history.jsonl / model.ckpt / eval.json, plus summary.json and table.txt.
/// Progress notes go to *log when provided.
ReproduceResult run_reproduction(const ReproduceConfig& cfg, std::ostream* log = nullptr);

std::string reproduce_summary_json(const ReproduceConfig& cfg, const ReproduceResult& r);

}  // namespace gamerep
