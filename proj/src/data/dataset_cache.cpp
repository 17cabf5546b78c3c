// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/data/dataset_cache.hpp"

#include <bit>
#include <cstdint>

#include "sahar/errors.hpp"
#include "sahar/io.hpp"
#include "sahar/numerics/tensor_io.hpp"

namespace sahar::data {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  auto p = stem;
  p += suffix;
  return p;
}

// Doubles are stored by bit pattern so that the sidecar round-trips exactly.
json bits(const std::vector<double>& v) {
  json a = json::array();
  for (double d : v) a.push_back(std::bit_cast<std::uint64_t>(d));
  return a;
}

std::vector<double> unbits(const json& a) {
  std::vector<double> v;
  for (const auto& e : a) v.push_back(std::bit_cast<double>(e.get<std::uint64_t>()));
  return v;
}

}  // namespace

json stats_to_json(const NormalizationStats& stats) {
  return {{"mean", stats.mean}, {"std", stats.stddev}, {"mean_bits", bits(stats.mean)}, {"std_bits", bits(stats.stddev)}};
}

NormalizationStats stats_from_json(const json& j) {
  NormalizationStats s;
  if (j.contains("mean_bits")) {
    s.mean = unbits(j.at("mean_bits"));
    s.stddev = unbits(j.at("std_bits"));
  } else {
    s.mean = j.at("mean").get<std::vector<double>>();
    s.stddev = j.at("std").get<std::vector<double>>();
  }
  if (s.mean.size() != s.stddev.size()) throw IntegrityError("normalization stats: mean/std length mismatch");
  return s;
}

void save_windowed(const std::filesystem::path& stem, const WindowedDataset& ds, const CacheKey& key) {
  std::string payload;
  if (!ds.empty()) {
    const std::size_t t = ds.window_length, s = ds.num_channels;
    std::vector<double> flat;
    flat.reserve(ds.size() * t * s);
    for (const auto& w : ds.windows) {
      if (w.shape() != Shape{t, s}) throw DimensionError("window shape disagrees with dataset shape");
      flat.insert(flat.end(), w.values().begin(), w.values().end());
    }
    payload = encode_tensors({Tensor({ds.size(), t, s}, std::move(flat))});
  }
  json spans = json::array();
  for (const auto& sp : ds.window_spans) spans.push_back({sp.start, sp.end});
  json side{{"format_version", kFormatVersion},
            {"count", ds.size()},
            {"window_length", ds.window_length},
            {"num_channels", ds.num_channels},
            {"labels", ds.labels},
            {"spans", spans},
            {"schema_hash", key.schema_hash},
            {"settings_hash", key.settings_hash},
            {"checksum", hash_hex(payload)}};
  if (ds.normalization_stats) side["normalization_stats"] = stats_to_json(*ds.normalization_stats);
  write_file_atomic(with_suffix(stem, ".bin"), payload);
  write_file_atomic(with_suffix(stem, ".json"), side.dump(1) + "\n");
}

WindowedDataset load_windowed(const std::filesystem::path& stem, CacheKey* key_out) {
  const std::string payload = read_file(with_suffix(stem, ".bin"));
  json side;
  try {
    side = json::parse(read_file(with_suffix(stem, ".json")));
  } catch (const json::exception& e) {
    throw IntegrityError("dataset sidecar " + with_suffix(stem, ".json").string() + ": " + e.what());
  }
  try {
    if (side.at("checksum").get<std::string>() != hash_hex(payload)) {
      throw IntegrityError("dataset cache " + with_suffix(stem, ".bin").string() + " fails its checksum");
    }
    WindowedDataset ds;
    ds.window_length = side.at("window_length").get<std::size_t>();
    ds.num_channels = side.at("num_channels").get<std::size_t>();
    ds.labels = side.at("labels").get<std::vector<int>>();
    for (const auto& sp : side.at("spans")) ds.window_spans.push_back({sp.at(0).get<std::size_t>(), sp.at(1).get<std::size_t>()});
    const auto count = side.at("count").get<std::size_t>();
    if (ds.labels.size() != count || ds.window_spans.size() != count) throw IntegrityError("dataset sidecar counts disagree");
    if (count > 0) {
      auto tensors = decode_tensors(payload, 1);
      const Tensor& all = tensors.front();
      if (all.shape() != Shape{count, ds.window_length, ds.num_channels}) {
        throw IntegrityError("dataset cache tensor shape disagrees with sidecar");
      }
      const std::size_t per = ds.window_length * ds.num_channels;
      for (std::size_t b = 0; b < count; ++b) {
        ds.windows.emplace_back(Shape{ds.window_length, ds.num_channels},
                                std::vector<double>(all.values().begin() + static_cast<std::ptrdiff_t>(b * per),
                                                    all.values().begin() + static_cast<std::ptrdiff_t>((b + 1) * per)));
      }
    } else if (!payload.empty()) {
      throw IntegrityError("dataset cache has data but sidecar count is zero");
    }
    if (side.contains("normalization_stats")) ds.normalization_stats = stats_from_json(side["normalization_stats"]);
    if (key_out) {
      key_out->schema_hash = side.at("schema_hash").get<std::string>();
      key_out->settings_hash = side.at("settings_hash").get<std::string>();
    }
    return ds;
  } catch (const json::exception& e) {
    throw IntegrityError("dataset sidecar " + with_suffix(stem, ".json").string() + ": " + e.what());
  }
}

void save_recording(const std::filesystem::path& stem, const RawRecording& rec) {
  const std::string payload = encode_tensors({rec.channels});
  json side{{"format_version", kFormatVersion},
            {"subject", rec.subject_id},
            {"sampling_rate_hz_bits", std::bit_cast<std::uint64_t>(rec.sampling_rate_hz)},
            {"sampling_rate_hz", rec.sampling_rate_hz},
            {"labels", rec.labels},
            {"checksum", hash_hex(payload)}};
  write_file_atomic(with_suffix(stem, ".bin"), payload);
  write_file_atomic(with_suffix(stem, ".json"), side.dump(1) + "\n");
}

RawRecording load_cached_recording(const std::filesystem::path& stem) {
  const std::string payload = read_file(with_suffix(stem, ".bin"));
  try {
    const json side = json::parse(read_file(with_suffix(stem, ".json")));
    if (side.at("checksum").get<std::string>() != hash_hex(payload)) {
      throw IntegrityError("cached recording " + with_suffix(stem, ".bin").string() + " fails its checksum");
    }
    RawRecording rec;
    rec.subject_id = side.at("subject").get<std::string>();
    rec.sampling_rate_hz = std::bit_cast<double>(side.at("sampling_rate_hz_bits").get<std::uint64_t>());
    rec.labels = side.at("labels").get<std::vector<int>>();
    rec.channels = std::move(decode_tensors(payload, 1).front());
    if (rec.channels.rank() != 2 || rec.channels.dim(0) != rec.labels.size()) {
      throw IntegrityError("cached recording " + stem.string() + " has inconsistent sizes");
    }
    return rec;
  } catch (const json::exception& e) {
    throw IntegrityError("cached recording sidecar " + with_suffix(stem, ".json").string() + ": " + e.what());
  }
}

bool cache_is_current(const std::filesystem::path& stem, const CacheKey& key) {
  namespace fs = std::filesystem;
  if (!fs::exists(with_suffix(stem, ".bin")) || !fs::exists(with_suffix(stem, ".json"))) return false;
  try {
    CacheKey found;
    load_windowed(stem, &found);
    return found == key;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace sahar::data
