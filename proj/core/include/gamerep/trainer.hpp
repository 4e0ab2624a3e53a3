#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gamerep/adam.hpp"
#include "gamerep/augment.hpp"
#include "gamerep/dataset.hpp"
#include "gamerep/network.hpp"

namespace gamerep {

struct LrSchedule {
  double factor = 0.5;
  int every_epochs = 3;

  // epoch is 1-based; epoch 1..every_epochs run at lr0.
  double rate(double lr0, int epoch) const;
};

struct TrainConfig {
  int batch = 64;
  int epochs = 10;
  // 0 = one full pass over the training set per epoch (partial batch
  // dropped). When paper_step_budget is set, each epoch instead runs
  // |train|/(10*batch) steps, subsampling the pass the way the original
  // budget did.
  int steps_per_epoch = 0;
  bool paper_step_budget = false;

  double lr = 1e-3;
  LrSchedule decay;
  double margin = 1.0;
  AdamConfig adam;
  AugmentationConfig augment;
  std::uint64_t seed = 0;

  void validate() const;
};

std::string train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const std::string& text);

struct EpochRecord {
  std::string stage;  // "supervised" | "contrastive-pretrain" | "classifier-fit"
  int epoch = 0;      // 1-based
  double loss = 0.0;
  std::optional<double> train_acc;  // absent for the contrastive stage
  std::optional<double> val_acc;
  double seconds = 0.0;  // wall time; reported, never serialized
};

using TrainingHistory = std::vector<EpochRecord>;

/// One line-delimited JSON record. Wall time is deliberately left out so
/// history files are byte-stable across reruns with the same seed.
std::string epoch_record_to_json(const EpochRecord& r);

/// Invoked after each epoch with the record and the current parameters
/// (checkpoint streaming, logging).
using EpochCallback = std::function<void(const EpochRecord&, const Parameters&)>;

struct TrainResult {
  Parameters params;
  TrainingHistory history;
};

/// Cross-entropy training of encoder + classifier jointly on augmented
/// training batches. Deterministic given cfg.seed.
TrainResult train_fully_supervised(const LoadedDataset& data, const ModelConfig& model,
                                   const TrainConfig& cfg,
                                   const EpochCallback& on_epoch = {});

/// Stage 1 of the contrastive procedure: minimizes the max-margin pair loss
/// on unit-norm embeddings, updating encoder + projection only.
TrainResult pretrain_contrastive(const LoadedDataset& data, const ModelConfig& model,
                                 const TrainConfig& cfg,
                                 const EpochCallback& on_epoch = {});

/// Stage 2: flags the encoder (and projection) non-trainable and fits the
/// classifier with cross entropy. Encoder tensors are bitwise untouched.
TrainResult fit_classifier_frozen(Parameters pretrained, const LoadedDataset& data,
                                  const ModelConfig& model, const TrainConfig& cfg,
                                  const EpochCallback& on_epoch = {});

// --- single-batch objectives -------------------------------------------
// Building blocks of the loops above, exposed for gradient checking: the
// loss is a pure function of (params, images, labels, dropout_seed).

struct SupervisedBatch {
  double loss = 0.0;
  double accuracy = 0.0;
  Gradients grads;
};

SupervisedBatch supervised_batch_backward(const Network& net, const Parameters& params,
                                          const Tensor& images,
                                          const std::vector<int>& labels,
                                          bool train_mode, std::uint64_t dropout_seed,
                                          bool encoder_grads = true);

double supervised_batch_loss(const Network& net, const Parameters& params,
                             const Tensor& images, const std::vector<int>& labels,
                             bool train_mode, std::uint64_t dropout_seed);

struct ContrastiveBatch {
  double loss = 0.0;
  Gradients grads;
};

ContrastiveBatch contrastive_batch_backward(const Network& net, const Parameters& params,
                                            const Tensor& images,
                                            const std::vector<int>& labels, double margin);

double contrastive_batch_loss(const Network& net, const Parameters& params,
                              const Tensor& images, const std::vector<int>& labels,
                              double margin);

// --- shared evaluation helpers ------------------------------------------

/// Eval-mode representations of the given samples (unaugmented), batched.
Tensor compute_representations(const Network& net, const Parameters& params,
                               const LoadedDataset& data,
                               const std::vector<std::size_t>& indices,
                               int batch = 256);

/// Eval-mode class probabilities of the given samples.
Tensor compute_probabilities(const Network& net, const Parameters& params,
                             const LoadedDataset& data,
                             const std::vector<std::size_t>& indices, int batch = 256);

std::vector<int> labels_of(const LoadedDataset& data,
                           const std::vector<std::size_t>& indices);

}  // namespace gamerep
