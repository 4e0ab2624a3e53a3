#include "gamerep/model.hpp"

#include <cmath>
#include <cstring>

#include "json.hpp"

#include "gamerep/error.hpp"
#include "gamerep/rng.hpp"

namespace gamerep {

using nlohmann::json;

void ModelConfig::validate() const {
  if (input_h < 8 || input_w < 8)
    throw config_error("model-input", "encoder input must be at least 8x8");
  if (blocks.empty()) throw config_error("model-blocks", "encoder needs at least one block");
  for (const auto& b : blocks) {
    if (b.filters < 1 || b.kernel < 1 || b.kernel % 2 == 0 || b.stride < 1)
      throw config_error("model-blocks",
                         "conv blocks need filters>=1, odd kernel>=1, stride>=1");
    if (b.activation != "relu")
      throw config_error("model-blocks", "unsupported activation '" + b.activation + "'");
  }
  if (rep_dim() < 2) throw config_error("model-repdim", "representation dim must be >= 2");
  if (embed_dim < 2) throw config_error("model-embed", "projection dim must be >= 2");
  if (classifier_hidden < 1)
    throw config_error("model-classifier", "classifier hidden width must be >= 1");
  if (class_count < 2) throw config_error("model-classes", "need at least 2 classes");
  if (!(dropout >= 0.0 && dropout < 1.0))
    throw config_error("model-dropout", "dropout must lie in [0,1)");
  // The spatial size must survive every stride without vanishing.
  int h = input_h, w = input_w;
  for (const auto& b : blocks) {
    const int pad = b.kernel / 2;
    h = (h + 2 * pad - b.kernel) / b.stride + 1;
    w = (w + 2 * pad - b.kernel) / b.stride + 1;
    if (h < 1 || w < 1)
      throw config_error("model-blocks", "encoder strides collapse the feature map");
  }
}

std::string model_config_to_json(const ModelConfig& c) {
  json jb = json::array();
  for (const auto& b : c.blocks)
    jb.push_back({{"filters", b.filters},
                  {"kernel", b.kernel},
                  {"stride", b.stride},
                  {"activation", b.activation}});
  json j{{"input_size", {c.input_h, c.input_w}},
         {"blocks", jb},
         {"embed_dim", c.embed_dim},
         {"classifier_hidden", c.classifier_hidden},
         {"class_count", c.class_count},
         {"dropout", c.dropout}};
  return j.dump(2);
}

ModelConfig model_config_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw config_error("config-parse", "model config is not valid JSON");
  ModelConfig c;
  try {
    if (j.contains("input_size")) {
      c.input_h = j.at("input_size").at(0).get<int>();
      c.input_w = j.at("input_size").at(1).get<int>();
    }
    if (j.contains("blocks")) {
      c.blocks.clear();
      for (const auto& jb : j.at("blocks")) {
        ConvBlockSpec b;
        b.filters = jb.at("filters").get<int>();
        b.kernel = jb.value("kernel", b.kernel);
        b.stride = jb.value("stride", b.stride);
        b.activation = jb.value("activation", b.activation);
        c.blocks.push_back(b);
      }
    }
    c.embed_dim = j.value("embed_dim", c.embed_dim);
    c.classifier_hidden = j.value("classifier_hidden", c.classifier_hidden);
    c.class_count = j.value("class_count", c.class_count);
    c.dropout = j.value("dropout", c.dropout);
  } catch (const json::exception& e) {
    throw config_error("config-parse", std::string("bad model config: ") + e.what());
  }
  c.validate();
  return c;
}

const char* param_group_name(ParamGroup g) {
  switch (g) {
    case ParamGroup::encoder: return "encoder";
    case ParamGroup::projection: return "projection";
    case ParamGroup::classifier: return "classifier";
  }
  return "?";
}

bool Parameters::trainable(ParamGroup g) const {
  switch (g) {
    case ParamGroup::encoder: return encoder_trainable;
    case ParamGroup::projection: return projection_trainable;
    case ParamGroup::classifier: return classifier_trainable;
  }
  return false;
}

void Parameters::set_trainable(ParamGroup g, bool on) {
  switch (g) {
    case ParamGroup::encoder: encoder_trainable = on; break;
    case ParamGroup::projection: projection_trainable = on; break;
    case ParamGroup::classifier: classifier_trainable = on; break;
  }
}

Tensor& Parameters::find(const std::string& name) {
  for (auto& e : entries)
    if (e.name == name) return e.value;
  throw data_error("unknown-tensor", "no parameter tensor named '" + name + "'");
}

const Tensor& Parameters::find(const std::string& name) const {
  return const_cast<Parameters*>(this)->find(name);
}

bool Parameters::all_finite() const {
  for (const auto& e : entries)
    if (!e.value.all_finite()) return false;
  return true;
}

Gradients Gradients::zeros_like(const Parameters& p) {
  Gradients g;
  g.tensors.reserve(p.entries.size());
  for (const auto& e : p.entries) g.tensors.emplace_back(e.value.shape());
  return g;
}

void Gradients::accumulate(const Gradients& other) {
  for (std::size_t i = 0; i < tensors.size(); ++i)
    for (std::size_t k = 0; k < tensors[i].size(); ++k) tensors[i][k] += other.tensors[i][k];
}

namespace {

Tensor he_uniform(Rng& rng, std::vector<std::size_t> shape, std::size_t fan_in) {
  Tensor t(std::move(shape));
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

Parameters init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  Parameters p;
  Rng rng(derive_seed(seed, {0x494e4954}));

  int in_ch = 3;
  for (std::size_t i = 0; i < config.blocks.size(); ++i) {
    const auto& b = config.blocks[i];
    const std::size_t oc = static_cast<std::size_t>(b.filters);
    const std::size_t k = static_cast<std::size_t>(b.kernel);
    const std::size_t fan_in = static_cast<std::size_t>(in_ch) * k * k;
    const std::string base = "encoder.conv" + std::to_string(i);
    p.entries.push_back({base + ".weight", ParamGroup::encoder,
                         he_uniform(rng, {oc, static_cast<std::size_t>(in_ch), k, k}, fan_in)});
    p.entries.push_back({base + ".bias", ParamGroup::encoder, Tensor({oc})});
    in_ch = b.filters;
  }

  const std::size_t d = static_cast<std::size_t>(config.rep_dim());
  const std::size_t e = static_cast<std::size_t>(config.embed_dim);
  p.entries.push_back({"projection.weight", ParamGroup::projection, he_uniform(rng, {e, d}, d)});
  p.entries.push_back({"projection.bias", ParamGroup::projection, Tensor({e})});

  const std::size_t hid = static_cast<std::size_t>(config.classifier_hidden);
  const std::size_t n = static_cast<std::size_t>(config.class_count);
  p.entries.push_back({"classifier.fc0.weight", ParamGroup::classifier, he_uniform(rng, {hid, d}, d)});
  p.entries.push_back({"classifier.fc0.bias", ParamGroup::classifier, Tensor({hid})});
  p.entries.push_back({"classifier.fc1.weight", ParamGroup::classifier, he_uniform(rng, {n, hid}, hid)});
  p.entries.push_back({"classifier.fc1.bias", ParamGroup::classifier, Tensor({n})});
  return p;
}

std::uint64_t checksum_group(const Parameters& p, ParamGroup g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& e : p.entries) {
    if (e.group != g) continue;
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      std::uint64_t bits;
      const double v = e.value[i];
      std::memcpy(&bits, &v, sizeof(bits));
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

}  // namespace gamerep
