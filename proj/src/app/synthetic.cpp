// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/app/synthetic.hpp"

#include <cmath>
#include <numeric>

#include "sahar/errors.hpp"
#include "sahar/io.hpp"

namespace sahar::app {

namespace {

constexpr double kTwoPi = 6.283185307179586;

double sample_value(const SyntheticSpec& spec, std::size_t channel, int label, double phase, Rng& rng) {
  if (channel == spec.informative_channel) {
    const double centre = 0.5 * static_cast<double>(spec.num_classes - 1);
    return spec.level_step * (static_cast<double>(label) - centre) +
           spec.oscillation_amplitude * std::sin(kTwoPi * phase / spec.oscillation_period) +
           spec.signal_noise * rng.normal();
  }
  return spec.noise_std * rng.normal();
}

}  // namespace

void SyntheticSpec::validate() const {
  if (num_classes < 1 || num_channels < 1) throw ConfigError("synthetic data needs >= 1 class and channel");
  if (informative_channel >= num_channels) throw ConfigError("informative channel outside the channel range");
  if (!(sampling_rate_hz > 0.0)) throw ConfigError("sampling rate must be positive");
  if (!(oscillation_period > 0.0)) throw ConfigError("oscillation period must be positive");
}

data::WindowedDataset planted_windows(const SyntheticSpec& spec, std::size_t count, std::size_t window_length,
                                      Rng& rng) {
  spec.validate();
  data::WindowedDataset ds;
  ds.window_length = window_length;
  ds.num_channels = spec.num_channels;
  for (std::size_t i = 0; i < count; ++i) {
    const int label = static_cast<int>(i % spec.num_classes);
    Tensor w({window_length, spec.num_channels});
    const double offset = rng.uniform(0.0, spec.oscillation_period);
    for (std::size_t t = 0; t < window_length; ++t)
      for (std::size_t c = 0; c < spec.num_channels; ++c)
        w.at(t, c) = sample_value(spec, c, label, offset + static_cast<double>(t), rng);
    ds.windows.push_back(std::move(w));
    ds.labels.push_back(label);
    ds.window_spans.push_back({i * window_length, (i + 1) * window_length});
  }
  return ds;
}

data::RawRecording planted_recording(const SyntheticSpec& spec, std::size_t segments, std::size_t segment_length,
                                     const std::string& subject, Rng& rng) {
  spec.validate();
  data::RawRecording rec;
  rec.subject_id = subject;
  rec.sampling_rate_hz = spec.sampling_rate_hz;
  rec.channels = Tensor({segments * segment_length, spec.num_channels});
  std::vector<int> order(spec.num_classes);
  const double offset = rng.uniform(0.0, spec.oscillation_period);
  for (std::size_t s = 0; s < segments; ++s) {
    if (s % spec.num_classes == 0) {
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(std::span<int>(order));
    }
    const int label = order[s % spec.num_classes];
    for (std::size_t i = 0; i < segment_length; ++i) {
      const std::size_t row = s * segment_length + i;
      rec.labels.push_back(label);
      for (std::size_t c = 0; c < spec.num_channels; ++c) rec.channels.at(row, c) = sample_value(spec, c, label, offset + static_cast<double>(row), rng);
    }
  }
  return rec;
}

data::DatasetSchema planted_schema(const SyntheticSpec& spec) {
  spec.validate();
  data::DatasetSchema s;
  s.name = "planted";
  s.delimiter = ',';
  s.header_lines = 1;
  s.sampling_rate_hz = spec.sampling_rate_hz;
  s.columns.push_back({0, data::ColumnRole::Timestamp, "", ""});
  for (std::size_t c = 0; c < spec.num_channels; ++c) {
    s.columns.push_back({c + 1, data::ColumnRole::Channel, "ch" + std::to_string(c), ""});
  }
  s.columns.push_back({spec.num_channels + 1, data::ColumnRole::Label, "", ""});
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    s.label_vocabulary.push_back({"c" + std::to_string(c), c, "class" + std::to_string(c)});
  }
  s.validate();
  return s;
}

std::string planted_csv(const data::RawRecording& rec) {
  std::string out = "time";
  for (std::size_t c = 0; c < rec.num_channels(); ++c) out += ",ch" + std::to_string(c);
  out += ",label\n";
  for (std::size_t i = 0; i < rec.num_samples(); ++i) {
    out += format_double(static_cast<double>(i) / rec.sampling_rate_hz);
    for (std::size_t c = 0; c < rec.num_channels(); ++c) out += ',' + format_double(rec.channels.at(i, c));
    out += ",c" + std::to_string(rec.labels[i]) + '\n';
  }
  return out;
}

}  // namespace sahar::app
