// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sahar/sahar.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path(SAHAR_CAPI_WORK_DIR);

void count_lines(const char*, void* user) { ++*static_cast<int*>(user); }

}  // namespace

TEST_CASE("argument and config errors") {
  CHECK(sahar_experiment_open(nullptr, nullptr, 0, nullptr) == SAHAR_ERR_ARGUMENT);
  CHECK(std::string(sahar_last_error()).size() > 0);
  CHECK(sahar_train(nullptr, 0) == SAHAR_ERR_ARGUMENT);

  sahar_experiment* exp = nullptr;
  const char* bad[] = {"model.n_heads=3"};
  CHECK(sahar_experiment_open(nullptr, bad, 1, &exp) == SAHAR_ERR_CONFIG);
  CHECK(exp == nullptr);
  const char* no_eq[] = {"model.n_heads"};
  CHECK(sahar_experiment_open(nullptr, no_eq, 1, &exp) == SAHAR_ERR_CONFIG);
  CHECK(sahar_experiment_open("/definitely/not/here.json", nullptr, 0, &exp) == SAHAR_ERR_IO);
  CHECK(sahar_synth(kWork.c_str(), "{\"colours\": 3}", 1) == SAHAR_ERR_CONFIG);
  sahar_model* m = nullptr;
  CHECK(sahar_model_load("/definitely/not/here", &m) == SAHAR_ERR_IO);
  CHECK(m == nullptr);
}

TEST_CASE("synth, train and predict through the C API") {
  fs::remove_all(kWork);
  int lines = 0;
  sahar_set_log_callback(count_lines, &lines);
  REQUIRE(sahar_synth((kWork / "data").c_str(), "{\"subjects\": 2, \"segments\": 9, \"segment_length\": 40}", 0) ==
          SAHAR_OK);
  CHECK(lines > 0);
  const auto synth = json::parse(sahar_last_result());
  CHECK(synth["recordings"].size() == 2);

  const std::string out = "output=" + json((kWork / "out").string()).dump();
  const char* overrides[] = {"train.max_epochs=2", out.c_str()};
  sahar_experiment* exp = nullptr;
  REQUIRE(sahar_experiment_open((kWork / "data/experiment.json").c_str(), overrides, 2, &exp) == SAHAR_OK);
  const auto effective = json::parse(sahar_experiment_config(exp));
  CHECK(effective["train"]["max_epochs"] == 2);
  REQUIRE(sahar_train(exp, 0) == SAHAR_OK);
  CHECK(json::parse(sahar_last_result())["epochs_run"] == 2);
  CHECK(sahar_train(exp, 0) == SAHAR_ERR_IO);
  CHECK(std::string(sahar_last_error()).find("--force") != std::string::npos);
  sahar_experiment_free(exp);
  sahar_set_log_callback(nullptr, nullptr);

  sahar_model* m = nullptr;
  REQUIRE(sahar_model_load((kWork / "out/train/checkpoint").c_str(), &m) == SAHAR_OK);
  size_t t = 0, s = 0, c = 0;
  REQUIRE(sahar_model_shape(m, &t, &s, &c) == SAHAR_OK);
  CHECK(t == 32);
  CHECK(s == 6);
  CHECK(c == 3);

  std::vector<double> window(t * s);
  for (size_t i = 0; i < window.size(); ++i) window[i] = std::sin(0.37 * static_cast<double>(i));
  std::vector<double> logits(c), scores(t * s), again(c);
  size_t label = 99;
  REQUIRE(sahar_model_predict(m, window.data(), window.size(), logits.data(), c, scores.data(), scores.size(),
                              &label) == SAHAR_OK);
  CHECK(label < c);
  CHECK(logits[label] == *std::max_element(logits.begin(), logits.end()));
  for (size_t i = 0; i < t; ++i) {
    double sum = 0.0;
    for (size_t j = 0; j < s; ++j) sum += scores[i * s + j];
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
  REQUIRE(sahar_model_predict(m, window.data(), window.size(), again.data(), c, nullptr, 0, nullptr) == SAHAR_OK);
  CHECK(again == logits);

  CHECK(sahar_model_predict(m, window.data(), window.size() - 1, nullptr, 0, nullptr, 0, &label) ==
        SAHAR_ERR_ARGUMENT);
  CHECK(sahar_model_predict(m, window.data(), window.size(), logits.data(), c + 1, nullptr, 0, nullptr) ==
        SAHAR_ERR_ARGUMENT);
  sahar_model_free(m);
}
