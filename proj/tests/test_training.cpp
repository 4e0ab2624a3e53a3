#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gamerep/error.hpp"
#include "gamerep/losses.hpp"
#include "gamerep/trainer.hpp"
#include "test_util.hpp"

using namespace gamerep;

namespace {

ModelConfig fixture_model() {
  ModelConfig m;  // defaults: 3 blocks (16,32,64), d = 64
  m.input_h = 32;
  m.input_w = 32;
  m.class_count = 2;
  return m;
}

TrainConfig fixture_train(std::uint64_t seed) {
  TrainConfig t;
  t.batch = 64;
  t.epochs = 10;
  t.seed = seed;
  return t;
}

Tensor random_images(const ModelConfig& cfg, std::size_t b, std::uint64_t seed) {
  Tensor x({b, 3, static_cast<std::size_t>(cfg.input_h),
            static_cast<std::size_t>(cfg.input_w)});
  Rng rng(seed);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform();
  return x;
}

// Mean positive-pair vs negative-pair embedding distance on given samples.
std::pair<double, double> pair_distances(const Network& net, const Parameters& params,
                                         const LoadedDataset& data,
                                         const std::vector<std::size_t>& indices) {
  const Tensor reps = compute_representations(net, params, data, indices);
  const Tensor z = net.project(params, reps);
  const std::vector<int> labels = labels_of(data, indices);
  double pos = 0.0, neg = 0.0;
  std::size_t npos = 0, nneg = 0;
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = i + 1; j < indices.size(); ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < z.dim(1); ++k) {
        const double d = z.at(i, k) - z.at(j, k);
        sq += d * d;
      }
      const double d = std::sqrt(sq);
      if (labels[i] == labels[j]) {
        pos += d;
        ++npos;
      } else {
        neg += d;
        ++nneg;
      }
    }
  return {pos / static_cast<double>(npos), neg / static_cast<double>(nneg)};
}

}  // namespace

TEST_CASE("end-to-end gradients match finite differences on the tiny model") {
  const ModelConfig cfg = testutil::tiny_model_config();
  const Network net(cfg);
  Parameters params = init_params(cfg, 13);
  const Tensor images = random_images(cfg, 4, 31);
  const std::vector<int> labels{0, 1, 1, 0};

  SUBCASE("cross-entropy objective (dropout active, fixed mask)") {
    const std::uint64_t dropout_seed = 555;
    const SupervisedBatch batch =
        supervised_batch_backward(net, params, images, labels, true, dropout_seed);
    const double worst = testutil::max_param_grad_error(
        params, batch.grads, [&](const Parameters& p) {
          return supervised_batch_loss(net, p, images, labels, true, dropout_seed);
        });
    CHECK(worst < 1e-3);
  }

  SUBCASE("contrastive objective") {
    const ContrastiveBatch batch =
        contrastive_batch_backward(net, params, images, labels, 1.0);
    const double worst = testutil::max_param_grad_error(
        params, batch.grads, [&](const Parameters& p) {
          return contrastive_batch_loss(net, p, images, labels, 1.0);
        });
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("learning-rate schedule halves every 3 epochs") {
  LrSchedule s;
  CHECK(s.rate(0.001, 1) == doctest::Approx(0.001));
  CHECK(s.rate(0.001, 3) == doctest::Approx(0.001));
  CHECK(s.rate(0.001, 4) == doctest::Approx(0.0005));
  CHECK(s.rate(0.001, 7) == doctest::Approx(0.00025));
}

TEST_CASE("train config json round trip and validation") {
  TrainConfig c;
  c.batch = 32;
  c.margin = 0.7;
  c.augment.zoom_prob = 0.9;
  const TrainConfig back = train_config_from_json(train_config_to_json(c));
  CHECK(back.batch == 32);
  CHECK(back.margin == doctest::Approx(0.7));
  CHECK(back.augment.zoom_prob == doctest::Approx(0.9));

  TrainConfig bad;
  bad.batch = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = TrainConfig{};
  bad.lr = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("fully supervised training learns the 2-genre fixture") {
  const LoadedDataset data = testutil::make_fixture_dataset(2, 3, 100, 32, 40);
  const ModelConfig model = fixture_model();
  const TrainConfig cfg = fixture_train(1);

  const TrainResult run = train_fully_supervised(data, model, cfg);
  REQUIRE(run.history.size() == 10);
  for (const auto& rec : run.history) {
    CHECK(rec.stage == "supervised");
    CHECK(rec.train_acc.has_value());
    CHECK(rec.val_acc.has_value());
  }
  CHECK(*run.history.back().train_acc >= 0.95);
  CHECK(run.history.back().loss < run.history.front().loss);

  // Determinism: bit-identical history and parameters on a rerun.
  const TrainResult again = train_fully_supervised(data, model, cfg);
  CHECK(testutil::params_checksum(run.params) == testutil::params_checksum(again.params));
  for (std::size_t e = 0; e < run.history.size(); ++e) {
    CHECK(run.history[e].loss == again.history[e].loss);
    CHECK(*run.history[e].train_acc == *again.history[e].train_acc);
    CHECK(*run.history[e].val_acc == *again.history[e].val_acc);
  }
}

TEST_CASE("contrastive pretraining organizes embeddings on held-out games") {
  const LoadedDataset data = testutil::make_fixture_dataset(2, 3, 100, 32, 41);
  const ModelConfig model = fixture_model();
  const TrainConfig cfg = fixture_train(2);

  const TrainResult pre = pretrain_contrastive(data, model, cfg);
  REQUIRE(pre.history.size() == 10);
  for (const auto& rec : pre.history) {
    CHECK(rec.stage == "contrastive-pretrain");
    CHECK_FALSE(rec.train_acc.has_value());
  }
  CHECK(pre.history.back().loss < pre.history.front().loss);

  const Network net(model);
  const auto [pos, neg] = pair_distances(net, pre.params, data, data.val_indices);
  CHECK(pos < neg);
}

TEST_CASE("classifier fit keeps the encoder bitwise frozen and reaches 0.9") {
  const LoadedDataset data = testutil::make_fixture_dataset(2, 3, 100, 32, 42);
  const ModelConfig model = fixture_model();
  const TrainConfig cfg = fixture_train(3);

  const TrainResult pre = pretrain_contrastive(data, model, cfg);
  const std::uint64_t enc_before = checksum_group(pre.params, ParamGroup::encoder);
  const std::uint64_t proj_before = checksum_group(pre.params, ParamGroup::projection);

  const TrainResult fit = fit_classifier_frozen(pre.params, data, model, cfg);
  CHECK(checksum_group(fit.params, ParamGroup::encoder) == enc_before);
  CHECK(checksum_group(fit.params, ParamGroup::projection) == proj_before);
  CHECK_FALSE(fit.params.encoder_trainable);

  REQUIRE(fit.history.size() == 10);
  for (const auto& rec : fit.history) CHECK(rec.stage == "classifier-fit");
  CHECK(*fit.history.back().val_acc >= 0.9);
}

TEST_CASE("an all-same-label batch is a valid contrastive step") {
  const ModelConfig cfg = testutil::tiny_model_config();
  const Network net(cfg);
  const Parameters params = init_params(cfg, 5);
  const Tensor images = random_images(cfg, 4, 9);
  const std::vector<int> labels{1, 1, 1, 1};
  // Loss equals the mean positive squared distance; gradient exists.
  const ContrastiveBatch batch =
      contrastive_batch_backward(net, params, images, labels, 1.0);
  const Tensor reps = net.encode(params, images, true);
  const Tensor z = net.project(params, reps);
  CHECK(batch.loss ==
        doctest::Approx(contrastive_max_margin(z, labels, 1.0).value).epsilon(1e-12));
  CHECK(batch.loss >= 0.0);
}

TEST_CASE("validation is computed on unaugmented images") {
  // Changing augmentation settings must not change eval-mode metrics of a
  // fixed model; augmentation exists only inside training batches.
  const LoadedDataset data = testutil::make_fixture_dataset(2, 2, 20, 16, 44);
  ModelConfig model = fixture_model();
  model.input_h = model.input_w = 16;
  const Parameters params = init_params(model, 4);
  const Network net(model);
  const Tensor a = compute_probabilities(net, params, data, data.val_indices);
  const Tensor b = compute_probabilities(net, params, data, data.val_indices);
  CHECK(a == b);
}

TEST_CASE("training rejects an unusably large batch") {
  const LoadedDataset data = testutil::make_fixture_dataset(2, 2, 5, 16, 45);
  ModelConfig model = fixture_model();
  model.input_h = model.input_w = 16;
  TrainConfig cfg = fixture_train(1);
  cfg.batch = 4096;
  CHECK_THROWS_AS(train_fully_supervised(data, model, cfg), Error);
}

TEST_CASE("paper step budget shortens the epoch") {
  const LoadedDataset data = testutil::make_fixture_dataset(2, 3, 100, 16, 46);
  ModelConfig model = fixture_model();
  model.input_h = model.input_w = 16;
  TrainConfig cfg = fixture_train(6);
  cfg.epochs = 1;
  cfg.batch = 8;
  cfg.paper_step_budget = true;  // |train|/(10*batch) steps instead of a full pass
  const TrainResult run = train_fully_supervised(data, model, cfg);
  CHECK(run.history.size() == 1);
}
