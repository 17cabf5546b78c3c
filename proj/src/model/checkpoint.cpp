// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/model/checkpoint.hpp"

#include "sahar/data/dataset_cache.hpp"
#include "sahar/errors.hpp"
#include "sahar/io.hpp"
#include "sahar/numerics/tensor_io.hpp"

namespace sahar::model {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "sahar-checkpoint";
constexpr int kVersion = 1;

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const Checkpoint& ckpt) {
  ckpt.config.validate();
  std::vector<Tensor> tensors;
  json entries = json::array();
  ckpt.params.for_each([&](const std::string& name, const Tensor& t) {
    entries.push_back({{"name", name}, {"shape", t.shape()}});
    tensors.push_back(t);
  });
  const std::string payload = encode_tensors(tensors);
  json manifest{{"format", kFormat},
                {"version", kVersion},
                {"config", ckpt.config.to_json()},
                {"seed", ckpt.meta.seed},
                {"class_names", ckpt.meta.class_names},
                {"sensor_names", ckpt.meta.sensor_names},
                {"schema_hash", ckpt.meta.schema_hash},
                {"training", ckpt.meta.training},
                {"tensors", entries},
                {"params_checksum", hash_hex(payload)}};
  if (ckpt.meta.normalization) manifest["normalization"] = data::stats_to_json(*ckpt.meta.normalization);
  write_file_atomic(dir / "params.bin", payload);
  write_file_atomic(dir / "checkpoint.json", manifest.dump(1) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "checkpoint.json";
  if (!std::filesystem::exists(manifest_path)) throw IoError("no checkpoint at " + dir.string());
  json m;
  try {
    m = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw IntegrityError("checkpoint manifest " + manifest_path.string() + " is not valid JSON: " + e.what());
  }
  const std::string payload = read_file(dir / "params.bin");
  Checkpoint c;
  try {
    if (m.at("format") != kFormat || m.at("version") != kVersion) {
      throw IntegrityError("unsupported checkpoint format in " + manifest_path.string());
    }
    if (m.at("params_checksum").get<std::string>() != hash_hex(payload)) {
      throw IntegrityError("checkpoint parameters in " + dir.string() + " fail their checksum");
    }
    try {
      c.config = ModelConfig::from_json(m.at("config"));
      c.config.validate();
    } catch (const ConfigError& e) {
      throw IntegrityError(std::string("checkpoint config invalid: ") + e.what());
    }
    c.params = zero_params(c.config);
    const auto& entries = m.at("tensors");
    auto tensors = decode_tensors(payload, entries.size());
    std::size_t i = 0;
    c.params.for_each([&](const std::string& name, Tensor& t) {
      if (i >= entries.size() || entries[i].at("name") != name) {
        throw IntegrityError("checkpoint tensor list disagrees with config at '" + name + "'");
      }
      if (tensors[i].shape() != t.shape()) {
        throw IntegrityError("checkpoint tensor '" + name + "' has shape " + shape_string(tensors[i].shape()) +
                             ", config implies " + shape_string(t.shape()));
      }
      t = std::move(tensors[i]);
      ++i;
    });
    if (i != entries.size()) throw IntegrityError("checkpoint holds extra tensors");
    c.meta.seed = m.at("seed").get<std::uint64_t>();
    c.meta.class_names = m.at("class_names").get<std::vector<std::string>>();
    c.meta.sensor_names = m.at("sensor_names").get<std::vector<std::string>>();
    c.meta.schema_hash = m.at("schema_hash").get<std::string>();
    c.meta.training = m.at("training");
    if (m.contains("normalization")) c.meta.normalization = data::stats_from_json(m["normalization"]);
  } catch (const json::exception& e) {
    throw IntegrityError("checkpoint manifest " + manifest_path.string() + ": " + e.what());
  }
  return c;
}

void require_compatible(const ModelConfig& expected, const ModelConfig& stored) {
  const auto diff = differing_fields(expected, stored);
  if (diff.empty()) return;
  const json je = expected.to_json(), js = stored.to_json();
  std::string msg = "checkpoint is incompatible with the configuration:";
  for (const auto& f : diff) msg += "\n  " + f + ": config " + je[f].dump() + ", checkpoint " + js[f].dump();
  throw CompatibilityError(msg);
}

void write_attention_csv(const std::filesystem::path& path, const Tensor& map,
                         const std::vector<std::string>& sensor_names) {
  if (map.rank() != 2 || map.dim(1) != sensor_names.size()) {
    throw DimensionError("attention map " + shape_string(map.shape()) + " does not match " +
                         std::to_string(sensor_names.size()) + " sensor names");
  }
  std::string out;
  for (std::size_t i = 0; i < sensor_names.size(); ++i) out += (i ? "," : "") + sensor_names[i];
  out += '\n';
  for (std::size_t r = 0; r < map.dim(0); ++r) {
    for (std::size_t c = 0; c < map.dim(1); ++c) out += (c ? "," : "") + format_double(map.at(r, c));
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace sahar::model
