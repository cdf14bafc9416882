/*
 * Copyright 2026 The fmpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "fmp/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "fmp/config.hpp"
#include "fmp/simulation.hpp"

namespace fmp {

namespace {

namespace fs = std::filesystem;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path);
  }
  out << content;
}

std::string percent(double wer) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f%%", wer * 100.0);
  return buffer;
}

// Minimal line chart: two WER series over rounds.
std::string wer_curve_svg(const std::vector<double>& fmp,
                          const std::vector<double>& baseline) {
  const int width = 640;
  const int height = 400;
  const int margin = 50;
  double max_wer = 1e-9;
  for (double v : fmp) max_wer = std::max(max_wer, v);
  for (double v : baseline) max_wer = std::max(max_wer, v);
  max_wer *= 1.1;
  const std::size_t n = fmp.size();

  auto x_at = [&](std::size_t i) {
    return margin + (width - 2.0 * margin) *
                        (n == 1 ? 0.5
                                : static_cast<double>(i) /
                                      static_cast<double>(n - 1));
  };
  auto y_at = [&](double wer) {
    return height - margin - (height - 2.0 * margin) * (wer / max_wer);
  };
  auto polyline = [&](const std::vector<double>& series, const char* color) {
    std::string points;
    for (std::size_t i = 0; i < series.size(); ++i) {
      points += std::to_string(x_at(i)) + "," + std::to_string(y_at(series[i]));
      points += ' ';
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  svg += "<line x1=\"" + std::to_string(margin) + "\" y1=\"" +
         std::to_string(height - margin) + "\" x2=\"" +
         std::to_string(width - margin) + "\" y2=\"" +
         std::to_string(height - margin) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + std::to_string(margin) + "\" y1=\"" +
         std::to_string(margin) + "\" x2=\"" + std::to_string(margin) +
         "\" y2=\"" + std::to_string(height - margin) +
         "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    svg += "<text x=\"" + std::to_string(x_at(i)) + "\" y=\"" +
           std::to_string(height - margin + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + std::to_string(i) +
           "</text>\n";
  }
  svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" +
         std::to_string(height - 10) +
         "\" font-size=\"13\" text-anchor=\"middle\">round</text>\n";
  svg += "<text x=\"15\" y=\"" + std::to_string(height / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "15 " +
         std::to_string(height / 2) + ")\">WER</text>\n";
  svg += polyline(baseline, "#888888");
  svg += polyline(fmp, "#1f77b4");
  svg += "<text x=\"" + std::to_string(width - margin) +
         "\" y=\"25\" font-size=\"12\" text-anchor=\"end\" "
         "fill=\"#1f77b4\">fmp</text>\n";
  svg += "<text x=\"" + std::to_string(width - margin) +
         "\" y=\"42\" font-size=\"12\" text-anchor=\"end\" "
         "fill=\"#888888\">baseline</text>\n";
  svg += "</svg>\n";
  return svg;
}

void report_run(const nlohmann::json& summary, const std::string& out_dir) {
  std::vector<double> fmp;
  std::vector<double> baseline;
  std::string md = "# Simulation report\n\n";
  md += "| round | wer_fmp | wer_baseline | sub | ins | del | words |\n";
  md += "|---|---|---|---|---|---|---|\n";
  for (const auto& row : summary.at("rounds")) {
    fmp.push_back(row.at("wer_fmp").get<double>());
    baseline.push_back(row.at("wer_baseline").get<double>());
    md += "| " + std::to_string(row.at("round").get<int>()) + " | " +
          percent(fmp.back()) + " | " + percent(baseline.back()) + " | " +
          std::to_string(row.at("substitutions").get<int>()) + " | " +
          std::to_string(row.at("insertions").get<int>()) + " | " +
          std::to_string(row.at("deletions").get<int>()) + " | " +
          std::to_string(row.at("words").get<int>()) + " |\n";
  }
  const auto& agg = summary.at("aggregate");
  md += "\naggregate: wer_fmp " + percent(agg.at("wer_fmp").get<double>()) +
        ", wer_baseline " + percent(agg.at("wer_baseline").get<double>()) +
        ", relative reduction " +
        percent(agg.at("relative_reduction").get<double>()) + "\n";
  md += "\n![WER per round](wer_curve.svg)\n";

  write_text_file(out_dir + "/report.md", md);
  write_text_file(out_dir + "/wer_curve.svg", wer_curve_svg(fmp, baseline));
}

void report_sweep(const nlohmann::json& sweep, const std::string& out_dir) {
  std::string md = "# Sweep report\n\n";
  md += "| settings | wer_fmp | wer_baseline | rel. reduction |\n";
  md += "|---|---|---|---|\n";
  for (const auto& row : sweep.at("points")) {
    const double wer_fmp = row.at("wer_fmp").get<double>();
    const double wer_baseline = row.at("wer_baseline").get<double>();
    const double rel =
        wer_baseline > 0.0 ? (wer_baseline - wer_fmp) / wer_baseline : 0.0;
    md += "| `" + row.at("settings").dump() + "` | " + percent(wer_fmp) +
          " | " + percent(wer_baseline) + " | " + percent(rel) + " |\n";
  }
  write_text_file(out_dir + "/report.md", md);
}

}  // namespace

void write_report(const std::string& run_dir, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory " + out_dir + ": " +
                             ec.message());
  }
  if (fs::exists(run_dir + "/summary.json")) {
    report_run(load_json_file(run_dir + "/summary.json"), out_dir);
  } else if (fs::exists(run_dir + "/sweep.json")) {
    report_sweep(load_json_file(run_dir + "/sweep.json"), out_dir);
  } else {
    throw std::runtime_error("no summary.json or sweep.json under " + run_dir);
  }
}

}  // namespace fmp
