#include "gamerep/evaluate.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gamerep/error.hpp"
#include "gamerep/losses.hpp"
#include "gamerep/silhouette.hpp"
#include "gamerep/trainer.hpp"

namespace gamerep {

using nlohmann::json;

EvalReport evaluate_model(const ModelConfig& config, const Parameters& params,
                          const LoadedDataset& data, const EvalOptions& opts) {
  if (data.train_indices.empty() || data.val_indices.empty())
    throw data_error("empty-split", "evaluation needs a split with both sides populated");

  Network net(config);
  EvalReport report;
  report.train_seed = opts.train_seed;

  const std::vector<int> train_labels = labels_of(data, data.train_indices);
  const std::vector<int> val_labels = labels_of(data, data.val_indices);

  const Tensor train_probs = compute_probabilities(net, params, data, data.train_indices);
  report.train_acc = accuracy(train_probs, train_labels);

  const Tensor val_probs = compute_probabilities(net, params, data, data.val_indices);
  report.val_acc = accuracy(val_probs, val_labels);
  report.confusion = confusion(val_probs, val_labels, config.class_count);

  report.val_representations =
      compute_representations(net, params, data, data.val_indices);
  const SilhouetteReport sil = silhouette(report.val_representations, val_labels);
  report.silhouette_score = sil.score;
  report.per_genre_silhouette = sil.per_label;

  if (opts.silhouette_on_embeddings) {
    const Tensor z = net.project(params, report.val_representations);
    report.silhouette_embeddings = silhouette(z, val_labels).score;
  }

  if (opts.with_tsne) {
    TsneResult proj = tsne(report.val_representations, opts.tsne);
    report.tsne_coords = std::move(proj.coords);
    report.tsne_seed = opts.tsne.seed;
  }
  return report;
}

std::string eval_report_to_json(const EvalReport& report) {
  json j;
  j["train_acc"] = report.train_acc;
  j["val_acc"] = report.val_acc;
  j["silhouette"] = report.silhouette_score;
  json per_genre = json::array();
  for (const auto& [genre, value] : report.per_genre_silhouette)
    per_genre.push_back({{"genre_id", genre}, {"silhouette", value}});
  j["per_genre_silhouette"] = per_genre;
  json rows = json::array();
  for (int t = 0; t < report.confusion.classes; ++t) {
    json row = json::array();
    for (int p = 0; p < report.confusion.classes; ++p) row.push_back(report.confusion.at(t, p));
    rows.push_back(row);
  }
  j["confusion"] = rows;
  json seeds = json::object();
  if (report.train_seed.has_value()) seeds["train"] = *report.train_seed;
  if (report.tsne_seed.has_value()) seeds["tsne"] = *report.tsne_seed;
  j["seeds"] = seeds;
  if (report.silhouette_embeddings.has_value())
    j["silhouette_embeddings"] = *report.silhouette_embeddings;
  return j.dump(2);
}

void write_eval_report(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("io", "cannot write report '" + path + "'");
  out << eval_report_to_json(report) << "\n";
}

ReportMetrics load_report_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("missing-file", "cannot open report '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw data_error("schema", "report '" + path + "' is not valid JSON");
  try {
    return {j.at("train_acc").get<double>(), j.at("val_acc").get<double>(),
            j.at("silhouette").get<double>()};
  } catch (const json::exception& e) {
    throw data_error("schema", std::string("report missing metrics: ") + e.what());
  }
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_labelled_rows(std::ofstream& out, const LoadedDataset& data,
                         const std::vector<std::size_t>& indices, const Tensor& values) {
  const std::size_t cols = values.dim(1);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const ImageSample& s = data.samples[indices[i]];
    out << i << ',' << s.game_id << ',' << data.manifest.genre_name(s.genre_id) << ','
        << data.manifest.style_name(s.style_id);
    for (std::size_t k = 0; k < cols; ++k) out << ',' << fmt_double(values.at(i, k));
    out << '\n';
  }
}

}  // namespace

void write_representations_csv(const std::string& path, const LoadedDataset& data,
                               const std::vector<std::size_t>& indices,
                               const Tensor& reps) {
  if (indices.size() != reps.dim(0))
    throw data_error("label-count", "indices and representation rows differ");
  std::ofstream out(path);
  if (!out) throw data_error("io", "cannot write CSV '" + path + "'");
  out << "id,game,genre,style";
  for (std::size_t k = 0; k < reps.dim(1); ++k) out << ",x" << k;
  out << '\n';
  write_labelled_rows(out, data, indices, reps);
}

void write_projection_csv(const std::string& path, const LoadedDataset& data,
                          const std::vector<std::size_t>& indices, const Tensor& coords) {
  if (indices.size() != coords.dim(0) || coords.dim(1) != 2)
    throw data_error("label-count", "projection must be n x 2 aligned with indices");
  std::ofstream out(path);
  if (!out) throw data_error("io", "cannot write CSV '" + path + "'");
  out << "id,game,genre,style,tx,ty\n";
  write_labelled_rows(out, data, indices, coords);
}

}  // namespace gamerep
