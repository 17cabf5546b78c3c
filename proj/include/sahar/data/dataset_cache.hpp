// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sahar/data/windows.hpp"

namespace sahar::data {

// On-disk WindowedDataset: `<stem>.bin` holds one [B x T x S] tensor dump,
// `<stem>.json` holds labels, spans, normalisation stats, the schema hash and
// a checksum of the binary file. `key` is an opaque provenance string (the
// ingest layer passes a hash of schema + preprocessing settings).
struct CacheKey {
  std::string schema_hash;
  std::string settings_hash;
  bool operator==(const CacheKey&) const = default;
};

void save_windowed(const std::filesystem::path& stem, const WindowedDataset& ds, const CacheKey& key);
WindowedDataset load_windowed(const std::filesystem::path& stem, CacheKey* key_out = nullptr);

// True when both files exist, the key matches and the checksum verifies.
bool cache_is_current(const std::filesystem::path& stem, const CacheKey& key);

// Preprocessed recording: `<stem>.bin` holds the [N x S] channels,
// `<stem>.json` the subject, rate, per-sample labels and checksum.
void save_recording(const std::filesystem::path& stem, const RawRecording& rec);
RawRecording load_cached_recording(const std::filesystem::path& stem);

nlohmann::json stats_to_json(const NormalizationStats& stats);
NormalizationStats stats_from_json(const nlohmann::json& j);

}  // namespace sahar::data
