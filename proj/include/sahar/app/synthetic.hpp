// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Planted-signal data. One channel carries a class-dependent level plus a
// large oscillation; every other channel is zero-mean Gaussian noise that is
// independent of the class.

#include <cstdint>
#include <string>
#include <vector>

#include "sahar/data/recording.hpp"
#include "sahar/data/schema.hpp"
#include "sahar/data/windows.hpp"
#include "sahar/numerics/rng.hpp"

namespace sahar::app {

struct SyntheticSpec {
  std::size_t num_classes = 3;
  std::size_t num_channels = 6;
  std::size_t informative_channel = 0;
  double level_step = 2.0;  // informative mean for class c is level_step * (c - (C - 1) / 2)
  double oscillation_amplitude = 3.0;
  double oscillation_period = 8.0;  // samples
  double signal_noise = 0.3;  // std of the informative channel around level + oscillation
  double noise_std = 1.0;     // std of the other channels
  double sampling_rate_hz = 50.0;

  void validate() const;
};

// `count` windows of length T with labels 0, 1, ..., C-1, 0, ...
data::WindowedDataset planted_windows(const SyntheticSpec& spec, std::size_t count, std::size_t window_length,
                                      Rng& rng);

// Consecutive constant-label segments; each block of C segments visits every
// class once in a random order.
data::RawRecording planted_recording(const SyntheticSpec& spec, std::size_t segments, std::size_t segment_length,
                                     const std::string& subject, Rng& rng);

// Schema for planted_csv files: time, ch0..ch{S-1}, label (raw labels "c0".."c{C-1}").
data::DatasetSchema planted_schema(const SyntheticSpec& spec);
std::string planted_csv(const data::RawRecording& rec);

}  // namespace sahar::app
