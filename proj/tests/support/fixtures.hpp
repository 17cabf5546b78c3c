// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Small synthetic inputs shared by the unit and acceptance suites.

#include <sstream>
#include <string>
#include <vector>

#include "sahar/data/recording.hpp"
#include "sahar/numerics/rng.hpp"

namespace sahar::testing {

// Recording with the given labels and channel values channel[c] = 1000*c + row.
inline data::RawRecording labelled_recording(const std::vector<int>& labels, std::size_t channels = 2,
                                             const std::string& subject = "s") {
  data::RawRecording r;
  r.subject_id = subject;
  r.sampling_rate_hz = 30.0;
  r.labels = labels;
  r.channels = Tensor({labels.size(), channels});
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t c = 0; c < channels; ++c) r.channels.at(i, c) = 1000.0 * static_cast<double>(c) + static_cast<double>(i);
  return r;
}

// Lines in the 54-column PAMAP2 Protocol layout: timestamp, activity id, heart
// rate (mostly NaN), then three 17-column IMU blocks (temperature, acc16 xyz,
// acc6 xyz, gyro xyz, mag xyz, 4 orientation values).
inline std::string pamap2_lines(std::size_t rows, std::uint64_t seed, const std::vector<int>& activity_cycle) {
  Rng rng(seed);
  std::ostringstream os;
  for (std::size_t i = 0; i < rows; ++i) {
    const int activity = activity_cycle[(i / 50) % activity_cycle.size()];
    os << static_cast<double>(i) * 0.01 << ' ' << activity << ' ';
    if (i % 10 == 0) {
      os << 100;
    } else {
      os << "NaN";
    }
    for (int imu = 0; imu < 3; ++imu) {
      os << ' ' << 30.5;
      for (int v = 0; v < 12; ++v) {
        // Occasional dropped samples, as in the real recordings.
        if (i % 97 == 5 && v < 3) {
          os << " NaN";
        } else {
          os << ' ' << rng.normal() * 2.0 + activity;
        }
      }
      os << " 1 0 0 0";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sahar::testing
