#include "gamerep/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "gamerep/error.hpp"
#include "gamerep/losses.hpp"
#include "gamerep/metrics.hpp"

namespace gamerep {

using nlohmann::json;

namespace {

// Stage tags for seed stream derivation.
constexpr std::uint64_t kStageSupervised = 1;
constexpr std::uint64_t kStageContrastive = 2;
constexpr std::uint64_t kStageClassifierFit = 3;
constexpr std::uint64_t kTagShuffle = 0x5348;
constexpr std::uint64_t kTagAugment = 0x4155;
constexpr std::uint64_t kTagDropout = 0x4452;

const char* stage_name(std::uint64_t stage) {
  switch (stage) {
    case kStageSupervised: return "supervised";
    case kStageContrastive: return "contrastive-pretrain";
    case kStageClassifierFit: return "classifier-fit";
  }
  return "?";
}

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Augmented batch tensor for the given sample indices. Per-sample streams
/// keyed by (seed, stage, epoch, step, slot) keep augmentation reproducible
/// and order-independent.
Tensor make_train_batch(const LoadedDataset& data, const std::vector<std::size_t>& order,
                        std::size_t start, int batch, const ModelConfig& model,
                        const TrainConfig& cfg, std::uint64_t stage, int epoch, int step,
                        std::vector<int>& labels_out) {
  std::vector<Image> images;
  images.reserve(static_cast<std::size_t>(batch));
  labels_out.clear();
  for (int i = 0; i < batch; ++i) {
    const ImageSample& s = data.samples[order[start + static_cast<std::size_t>(i)]];
    Rng rng(derive_seed(cfg.seed, {kTagAugment, stage, static_cast<std::uint64_t>(epoch),
                                   static_cast<std::uint64_t>(step),
                                   static_cast<std::uint64_t>(i)}));
    images.push_back(augment_image(s.image, cfg.augment, rng));
    labels_out.push_back(s.genre_id);
  }
  return batch_from_images(images, model.input_h, model.input_w);
}

int resolve_steps(const TrainConfig& cfg, std::size_t train_size) {
  const int full = static_cast<int>(train_size) / cfg.batch;
  if (full < 1)
    throw data_error("batch-too-large",
                     "training side has fewer images than one batch");
  int steps = full;
  if (cfg.paper_step_budget) steps = std::max(1, static_cast<int>(train_size) / (10 * cfg.batch));
  if (cfg.steps_per_epoch > 0) steps = std::min(cfg.steps_per_epoch, full);
  return steps;
}

double validation_accuracy(const Network& net, const Parameters& params,
                           const LoadedDataset& data) {
  const Tensor probs = compute_probabilities(net, params, data, data.val_indices);
  return accuracy(probs, labels_of(data, data.val_indices));
}

void check_loss_finite(double loss, const char* stage) {
  if (!std::isfinite(loss))
    throw numeric_error("non-finite-loss",
                        std::string("loss diverged during ") + stage + " training");
}

}  // namespace

double LrSchedule::rate(double lr0, int epoch) const {
  if (every_epochs <= 0) return lr0;
  const int drops = (epoch - 1) / every_epochs;
  return lr0 * std::pow(factor, static_cast<double>(drops));
}

void TrainConfig::validate() const {
  if (batch < 2) throw config_error("train-batch", "batch size must be >= 2");
  if (epochs < 1) throw config_error("train-epochs", "epochs must be >= 1");
  if (!(lr > 0.0)) throw config_error("train-lr", "learning rate must be positive");
  if (!(margin > 0.0)) throw config_error("margin", "margin must be positive");
  if (steps_per_epoch < 0) throw config_error("train-steps", "steps_per_epoch must be >= 0");
  augment.validate();
}

std::string train_config_to_json(const TrainConfig& c) {
  json j{{"batch", c.batch},
         {"epochs", c.epochs},
         {"steps_per_epoch", c.steps_per_epoch},
         {"paper_step_budget", c.paper_step_budget},
         {"lr", c.lr},
         {"lr_decay", {{"factor", c.decay.factor}, {"every_epochs", c.decay.every_epochs}}},
         {"margin", c.margin},
         {"adam", {{"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"epsilon", c.adam.epsilon}}},
         {"seed", c.seed},
         {"augment",
          {{"flip_prob", c.augment.flip_prob},
           {"zoom_prob", c.augment.zoom_prob},
           {"zoom_range", {c.augment.zoom.lo, c.augment.zoom.hi}},
           {"brightness_prob", c.augment.brightness_prob},
           {"brightness_range", {c.augment.brightness.lo, c.augment.brightness.hi}},
           {"rescale_prob", c.augment.rescale_prob},
           {"rescale_range", {c.augment.rescale.lo, c.augment.rescale.hi}},
           {"rotation_prob", c.augment.rotation_prob},
           {"rotation_deg", {c.augment.rotation_deg.lo, c.augment.rotation_deg.hi}}}}};
  return j.dump(2);
}

TrainConfig train_config_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw config_error("config-parse", "train config is not valid JSON");
  TrainConfig c;
  try {
    c.batch = j.value("batch", c.batch);
    c.epochs = j.value("epochs", c.epochs);
    c.steps_per_epoch = j.value("steps_per_epoch", c.steps_per_epoch);
    c.paper_step_budget = j.value("paper_step_budget", c.paper_step_budget);
    c.lr = j.value("lr", c.lr);
    if (j.contains("lr_decay")) {
      c.decay.factor = j["lr_decay"].value("factor", c.decay.factor);
      c.decay.every_epochs = j["lr_decay"].value("every_epochs", c.decay.every_epochs);
    }
    c.margin = j.value("margin", c.margin);
    if (j.contains("adam")) {
      c.adam.beta1 = j["adam"].value("beta1", c.adam.beta1);
      c.adam.beta2 = j["adam"].value("beta2", c.adam.beta2);
      c.adam.epsilon = j["adam"].value("epsilon", c.adam.epsilon);
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("augment")) {
      const auto& a = j["augment"];
      c.augment.flip_prob = a.value("flip_prob", c.augment.flip_prob);
      c.augment.zoom_prob = a.value("zoom_prob", c.augment.zoom_prob);
      if (a.contains("zoom_range"))
        c.augment.zoom = {a["zoom_range"][0].get<double>(), a["zoom_range"][1].get<double>()};
      c.augment.brightness_prob = a.value("brightness_prob", c.augment.brightness_prob);
      if (a.contains("brightness_range"))
        c.augment.brightness = {a["brightness_range"][0].get<double>(),
                                a["brightness_range"][1].get<double>()};
      c.augment.rescale_prob = a.value("rescale_prob", c.augment.rescale_prob);
      if (a.contains("rescale_range"))
        c.augment.rescale = {a["rescale_range"][0].get<double>(),
                             a["rescale_range"][1].get<double>()};
      c.augment.rotation_prob = a.value("rotation_prob", c.augment.rotation_prob);
      if (a.contains("rotation_deg"))
        c.augment.rotation_deg = {a["rotation_deg"][0].get<double>(),
                                  a["rotation_deg"][1].get<double>()};
    }
  } catch (const json::exception& e) {
    throw config_error("config-parse", std::string("bad train config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string epoch_record_to_json(const EpochRecord& r) {
  json j;
  j["stage"] = r.stage;
  j["epoch"] = r.epoch;
  j["loss"] = r.loss;
  j["train_acc"] = r.train_acc.has_value() ? json(*r.train_acc) : json(nullptr);
  j["val_acc"] = r.val_acc.has_value() ? json(*r.val_acc) : json(nullptr);
  return j.dump();
}

SupervisedBatch supervised_batch_backward(const Network& net, const Parameters& params,
                                          const Tensor& images,
                                          const std::vector<int>& labels, bool train_mode,
                                          std::uint64_t dropout_seed, bool encoder_grads) {
  SupervisedBatch out;
  out.grads = Gradients::zeros_like(params);

  EncoderCache enc_cache;
  ClassifierCache cls_cache;
  const Tensor reps = net.encode(params, images, train_mode,
                                 encoder_grads ? &enc_cache : nullptr);
  const Tensor probs = net.classify(params, reps, train_mode, dropout_seed, &cls_cache);

  out.loss = cross_entropy(probs, labels).value;
  out.accuracy = accuracy(probs, labels);

  const Tensor d_logits = softmax_cross_entropy_backward(probs, labels);
  const Tensor d_reps = net.classify_backward(params, cls_cache, d_logits, out.grads);
  if (encoder_grads) net.encode_backward(params, enc_cache, d_reps, out.grads);
  return out;
}

double supervised_batch_loss(const Network& net, const Parameters& params,
                             const Tensor& images, const std::vector<int>& labels,
                             bool train_mode, std::uint64_t dropout_seed) {
  const Tensor reps = net.encode(params, images, train_mode);
  const Tensor probs = net.classify(params, reps, train_mode, dropout_seed);
  return cross_entropy(probs, labels).value;
}

ContrastiveBatch contrastive_batch_backward(const Network& net, const Parameters& params,
                                            const Tensor& images,
                                            const std::vector<int>& labels, double margin) {
  ContrastiveBatch out;
  out.grads = Gradients::zeros_like(params);

  EncoderCache enc_cache;
  ProjectionCache proj_cache;
  const Tensor reps = net.encode(params, images, true, &enc_cache);
  const Tensor z = net.project(params, reps, &proj_cache);

  out.loss = contrastive_max_margin(z, labels, margin).value;

  const Tensor d_z = contrastive_grad(z, labels, margin);
  const Tensor d_reps = net.project_backward(params, proj_cache, d_z, out.grads);
  net.encode_backward(params, enc_cache, d_reps, out.grads);
  return out;
}

double contrastive_batch_loss(const Network& net, const Parameters& params,
                              const Tensor& images, const std::vector<int>& labels,
                              double margin) {
  const Tensor reps = net.encode(params, images, true);
  const Tensor z = net.project(params, reps);
  return contrastive_max_margin(z, labels, margin).value;
}

std::vector<int> labels_of(const LoadedDataset& data,
                           const std::vector<std::size_t>& indices) {
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (std::size_t i : indices) labels.push_back(data.samples[i].genre_id);
  return labels;
}

namespace {

Tensor batched_eval(const Network& net, const Parameters& params,
                    const LoadedDataset& data, const std::vector<std::size_t>& indices,
                    int batch, bool classify) {
  const ModelConfig& cfg = net.config();
  const std::size_t cols =
      classify ? static_cast<std::size_t>(cfg.class_count)
               : static_cast<std::size_t>(cfg.rep_dim());
  Tensor out({indices.size(), cols});
  for (std::size_t start = 0; start < indices.size();
       start += static_cast<std::size_t>(batch)) {
    const std::size_t count =
        std::min(static_cast<std::size_t>(batch), indices.size() - start);
    std::vector<Image> images;
    images.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      images.push_back(data.samples[indices[start + i]].image);
    const Tensor x = batch_from_images(images, cfg.input_h, cfg.input_w);
    Tensor rows = net.encode(params, x, false);
    if (classify) rows = net.classify(params, rows, false);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        out.at(start + i, j) = rows.at(i, j);
  }
  return out;
}

}  // namespace

Tensor compute_representations(const Network& net, const Parameters& params,
                               const LoadedDataset& data,
                               const std::vector<std::size_t>& indices, int batch) {
  return batched_eval(net, params, data, indices, batch, false);
}

Tensor compute_probabilities(const Network& net, const Parameters& params,
                             const LoadedDataset& data,
                             const std::vector<std::size_t>& indices, int batch) {
  return batched_eval(net, params, data, indices, batch, true);
}

namespace {

/// Shared epoch loop. `step_fn(images, labels, epoch, step)` performs the
/// forward/backward and the optimizer update, returning (loss, accuracy);
/// accuracy < 0 means "not defined for this stage".
template <typename StepFn>
TrainResult run_stage(std::uint64_t stage, const LoadedDataset& data,
                      const ModelConfig& model, const TrainConfig& cfg,
                      Parameters params, const Network& net, bool with_val,
                      const EpochCallback& on_epoch, StepFn step_fn) {
  if (data.train_indices.empty())
    throw data_error("empty-split", "training side of the split is empty");
  if (with_val && data.val_indices.empty())
    throw data_error("empty-split", "validation side of the split is empty");

  TrainResult result{std::move(params), {}};
  const int steps = resolve_steps(cfg, data.train_indices.size());
  OptimizerState opt = OptimizerState::zeros_like(result.params);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::size_t> order = data.train_indices;
    Rng shuffle_rng(derive_seed(cfg.seed, {kTagShuffle, stage,
                                           static_cast<std::uint64_t>(epoch)}));
    shuffle_rng.shuffle(order);

    const double lr = cfg.decay.rate(cfg.lr, epoch);
    double loss_sum = 0.0, acc_sum = 0.0;
    bool has_acc = true;
    std::vector<int> labels;
    for (int step = 0; step < steps; ++step) {
      const Tensor images =
          make_train_batch(data, order, static_cast<std::size_t>(step) * cfg.batch,
                           cfg.batch, model, cfg, stage, epoch, step, labels);
      const auto [loss, acc] = step_fn(result.params, opt, images, labels, epoch, step, lr);
      check_loss_finite(loss, stage_name(stage));
      loss_sum += loss;
      if (acc < 0.0)
        has_acc = false;
      else
        acc_sum += acc;
    }

    EpochRecord rec;
    rec.stage = stage_name(stage);
    rec.epoch = epoch;
    rec.loss = loss_sum / steps;
    if (has_acc) rec.train_acc = acc_sum / steps;
    if (with_val) rec.val_acc = validation_accuracy(net, result.params, data);
    rec.seconds = wall_seconds(t0);
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec, result.params);
  }
  return result;
}

}  // namespace

TrainResult train_fully_supervised(const LoadedDataset& data, const ModelConfig& model,
                                   const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  Network net(model);
  Parameters params = init_params(model, cfg.seed);
  return run_stage(
      kStageSupervised, data, model, cfg, std::move(params), net, true, on_epoch,
      [&](Parameters& p, OptimizerState& opt, const Tensor& images,
          const std::vector<int>& labels, int epoch, int step, double lr) {
        const std::uint64_t dropout_seed =
            derive_seed(cfg.seed, {kTagDropout, kStageSupervised,
                                   static_cast<std::uint64_t>(epoch),
                                   static_cast<std::uint64_t>(step)});
        SupervisedBatch batch =
            supervised_batch_backward(net, p, images, labels, true, dropout_seed);
        adam_step(p, batch.grads, opt, lr, cfg.adam);
        return std::pair{batch.loss, batch.accuracy};
      });
}

TrainResult pretrain_contrastive(const LoadedDataset& data, const ModelConfig& model,
                                 const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  Network net(model);
  Parameters params = init_params(model, cfg.seed);
  params.classifier_trainable = false;  // stage 1 never touches the classifier
  TrainResult result = run_stage(
      kStageContrastive, data, model, cfg, std::move(params), net, false, on_epoch,
      [&](Parameters& p, OptimizerState& opt, const Tensor& images,
          const std::vector<int>& labels, int /*epoch*/, int /*step*/, double lr) {
        ContrastiveBatch batch =
            contrastive_batch_backward(net, p, images, labels, cfg.margin);
        adam_step(p, batch.grads, opt, lr, cfg.adam);
        return std::pair{batch.loss, -1.0};
      });
  result.params.classifier_trainable = true;
  return result;
}

TrainResult fit_classifier_frozen(Parameters pretrained, const LoadedDataset& data,
                                  const ModelConfig& model, const TrainConfig& cfg,
                                  const EpochCallback& on_epoch) {
  cfg.validate();
  Network net(model);
  pretrained.set_trainable(ParamGroup::encoder, false);
  pretrained.set_trainable(ParamGroup::projection, false);  // discarded in this stage
  pretrained.set_trainable(ParamGroup::classifier, true);
  return run_stage(
      kStageClassifierFit, data, model, cfg, std::move(pretrained), net, true, on_epoch,
      [&](Parameters& p, OptimizerState& opt, const Tensor& images,
          const std::vector<int>& labels, int epoch, int step, double lr) {
        const std::uint64_t dropout_seed =
            derive_seed(cfg.seed, {kTagDropout, kStageClassifierFit,
                                   static_cast<std::uint64_t>(epoch),
                                   static_cast<std::uint64_t>(step)});
        // encoder_grads=false: the frozen encoder needs no backward pass.
        SupervisedBatch batch = supervised_batch_backward(net, p, images, labels, true,
                                                          dropout_seed, false);
        adam_step(p, batch.grads, opt, lr, cfg.adam);
        return std::pair{batch.loss, batch.accuracy};
      });
}

}  // namespace gamerep
