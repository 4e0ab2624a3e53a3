#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gamerep/dataset.hpp"
#include "gamerep/metrics.hpp"
#include "gamerep/network.hpp"
#include "gamerep/tsne.hpp"

namespace gamerep {

struct EvalOptions {
  bool with_tsne = false;
  TsneConfig tsne;
  bool silhouette_on_embeddings = false;  // diagnostic extra, off by default
  std::optional<std::uint64_t> train_seed;  // recorded into the report
};

struct EvalReport {
  double train_acc = 0.0;
  double val_acc = 0.0;
  double silhouette_score = 0.0;
  std::vector<std::pair<int, double>> per_genre_silhouette;  // by genre id
  ConfusionMatrix confusion;  // validation set, rows = true genre
  std::optional<double> silhouette_embeddings;
  std::optional<std::uint64_t> train_seed;
  std::optional<std::uint64_t> tsne_seed;

  // Artifacts for CSV/plot export; not part of the JSON report.
  Tensor val_representations;
  std::optional<Tensor> tsne_coords;
};

/// Accuracy on both splits, silhouette/confusion on the validation split.
/// Representations are computed in eval mode on unaugmented images; the
/// silhouette uses the d-dimensional representations (not the projected
/// embeddings) unless the diagnostic flag asks for both.
EvalReport evaluate_model(const ModelConfig& config, const Parameters& params,
                          const LoadedDataset& data, const EvalOptions& opts = {});

std::string eval_report_to_json(const EvalReport& report);
void write_eval_report(const EvalReport& report, const std::string& path);

/// Reads back just the comparable metrics {train_acc, val_acc, silhouette}
/// of a serialized report (for `eval --compare`).
struct ReportMetrics {
  double train_acc = 0.0;
  double val_acc = 0.0;
  double silhouette_score = 0.0;
};
ReportMetrics load_report_metrics(const std::string& path);

/// CSV with header id,game,genre,style,x0..x{d-1}.
void write_representations_csv(const std::string& path, const LoadedDataset& data,
                               const std::vector<std::size_t>& indices,
                               const Tensor& reps);

/// CSV with header id,game,genre,style,tx,ty.
void write_projection_csv(const std::string& path, const LoadedDataset& data,
                          const std::vector<std::size_t>& indices, const Tensor& coords);

}  // namespace gamerep
