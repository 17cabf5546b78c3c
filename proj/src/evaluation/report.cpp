// SPDX-FileCopyrightText: (c) 2026 The sahar authors
//
// SPDX-License-Identifier: Apache-2.0

#include "sahar/evaluation/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sahar::evaluation {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json scores_json(const ProtocolScores& s, const std::vector<std::string>& names) {
  json classes = json::array();
  const auto per = per_class_scores(s.confusion);
  for (std::size_t c = 0; c < per.size(); ++c) {
    classes.push_back({{"class", c < names.size() ? names[c] : std::to_string(c)},
                       {"precision", per[c].precision},
                       {"recall", per[c].recall},
                       {"f1", per[c].f1},
                       {"support", per[c].support},
                       {"present", per[c].present}});
  }
  return {{"macro_f1", number_or_null(s.macro_f1)},
          {"scored", s.scored},
          {"per_class", classes},
          {"confusion", s.confusion.to_json()}};
}

std::string fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string protocol_name(bool sample_wise) { return sample_wise ? "sample-wise" : "window-wise"; }

json EvalReport::to_json() const {
  json entries_json = json::array();
  for (const auto& e : entries) {
    json j{{"name", e.name}};
    if (e.sample_wise) j["sample_wise"] = scores_json(*e.sample_wise, class_names);
    if (e.window_wise) j["window_wise"] = scores_json(*e.window_wise, class_names);
    entries_json.push_back(j);
  }
  json out{{"class_names", class_names}, {"entries", entries_json}, {"notes", notes}};
  if (mean_sample_wise) out["mean_sample_wise"] = number_or_null(*mean_sample_wise);
  if (mean_window_wise) out["mean_window_wise"] = number_or_null(*mean_window_wise);
  return out;
}

std::string EvalReport::to_table() const {
  std::size_t name_w = 4;
  for (const auto& e : entries) name_w = std::max(name_w, e.name.size());
  name_w = std::max<std::size_t>(name_w, mean_sample_wise || mean_window_wise ? 4 : 0) + 2;
  auto cell = [](const std::optional<ProtocolScores>& s) { return s ? fixed(s->macro_f1) : std::string("-"); };

  std::string out = pad("name", name_w) + pad("sample-wise", 13, true) + pad("window-wise", 13, true) + "\n";
  out += std::string(name_w + 26, '-') + "\n";
  for (const auto& e : entries) {
    out += pad(e.name, name_w) + pad(cell(e.sample_wise), 13, true) + pad(cell(e.window_wise), 13, true) + "\n";
  }
  if (mean_sample_wise || mean_window_wise) {
    out += std::string(name_w + 26, '-') + "\n";
    out += pad("mean", name_w) + pad(mean_sample_wise ? fixed(*mean_sample_wise) : "-", 13, true) +
           pad(mean_window_wise ? fixed(*mean_window_wise) : "-", 13, true) + "\n";
  }

  std::size_t class_w = 5;
  for (const auto& n : class_names) class_w = std::max(class_w, n.size());
  class_w += 2;
  for (const auto& e : entries) {
    for (const auto* s : {&e.sample_wise, &e.window_wise}) {
      if (!*s) continue;
      out += "\n" + e.name + " (" + protocol_name(s == &e.sample_wise) + ", " + std::to_string((*s)->scored) +
             " scored)\n";
      out += pad("class", class_w) + pad("precision", 11, true) + pad("recall", 9, true) + pad("f1", 9, true) +
             pad("support", 10, true) + "\n";
      const auto per = per_class_scores((*s)->confusion);
      for (std::size_t c = 0; c < per.size(); ++c) {
        const std::string name = c < class_names.size() ? class_names[c] : std::to_string(c);
        out += pad(name, class_w) + pad(fixed(per[c].precision), 11, true) + pad(fixed(per[c].recall), 9, true) +
               pad(per[c].present ? fixed(per[c].f1) : "absent", 9, true) +
               pad(std::to_string(per[c].support), 10, true) + "\n";
      }
    }
  }
  for (const auto& n : notes) out += "\nnote: " + n;
  if (!notes.empty()) out += "\n";
  return out;
}

}  // namespace sahar::evaluation
