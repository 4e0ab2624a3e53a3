#include "gamerep/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "json.hpp"

#include "gamerep/error.hpp"

namespace gamerep {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is little-endian; big-endian hosts are unsupported");

namespace {

ParamGroup group_from_name(const std::string& s) {
  if (s == "encoder") return ParamGroup::encoder;
  if (s == "projection") return ParamGroup::projection;
  if (s == "classifier") return ParamGroup::classifier;
  throw data_error("checkpoint-format", "unknown parameter group '" + s + "'");
}

}  // namespace

void write_checkpoint(const std::string& path, const ModelConfig& config,
                      const Parameters& params, const CheckpointMeta& meta) {
  json header;
  header["format"] = "gamerep-checkpoint-v1";
  header["config"] = json::parse(model_config_to_json(config));
  header["trainable"] = {{"encoder", params.encoder_trainable},
                         {"projection", params.projection_trainable},
                         {"classifier", params.classifier_trainable}};
  if (meta.train_seed.has_value() || !meta.stage.empty()) {
    json jm;
    if (meta.train_seed.has_value()) jm["train_seed"] = *meta.train_seed;
    if (!meta.stage.empty()) jm["stage"] = meta.stage;
    header["meta"] = jm;
  }

  std::uint64_t offset = 0;
  json tensors = json::array();
  for (const auto& e : params.entries) {
    tensors.push_back({{"name", e.name},
                       {"group", param_group_name(e.group)},
                       {"shape", e.value.shape()},
                       {"offset", offset}});
    offset += e.value.size() * sizeof(float);
  }
  header["tensors"] = tensors;

  const std::string header_text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("io", "cannot write checkpoint '" + path + "'");
  const std::uint64_t len = header_text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& e : params.entries) {
    std::vector<float> buf(e.value.size());
    for (std::size_t i = 0; i < buf.size(); ++i)
      buf[i] = static_cast<float>(e.value[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!out) throw data_error("io", "short write to checkpoint '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("missing-file", "cannot open checkpoint '" + path + "'");
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len == 0 || len > (1ull << 30))
    throw data_error("checkpoint-format", "bad checkpoint header length");
  std::string header_text(len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(len));
  if (!in) throw data_error("checkpoint-format", "truncated checkpoint header");

  json header = json::parse(header_text, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "gamerep-checkpoint-v1")
    throw data_error("checkpoint-format", "not a recognized checkpoint file");

  Checkpoint ck;
  try {
    ck.config = model_config_from_json(header.at("config").dump());
    ck.params.encoder_trainable = header.at("trainable").at("encoder").get<bool>();
    ck.params.projection_trainable = header.at("trainable").at("projection").get<bool>();
    ck.params.classifier_trainable = header.at("trainable").at("classifier").get<bool>();
    if (header.contains("meta")) {
      const auto& jm = header.at("meta");
      if (jm.contains("train_seed")) ck.meta.train_seed = jm.at("train_seed").get<std::uint64_t>();
      ck.meta.stage = jm.value("stage", "");
    }
    for (const auto& jt : header.at("tensors")) {
      ParamEntry e;
      e.name = jt.at("name").get<std::string>();
      e.group = group_from_name(jt.at("group").get<std::string>());
      e.value = Tensor(jt.at("shape").get<std::vector<std::size_t>>());
      ck.params.entries.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw data_error("checkpoint-format", std::string("bad checkpoint header: ") + ex.what());
  }

  for (auto& e : ck.params.entries) {
    std::vector<float> buf(e.value.size());
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in) throw data_error("checkpoint-format", "truncated checkpoint payload");
    for (std::size_t i = 0; i < buf.size(); ++i) e.value[i] = buf[i];
  }
  return ck;
}

}  // namespace gamerep
