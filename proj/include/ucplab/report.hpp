#pragma once

// Run outputs. Files are accumulated as (relative path, bytes) in memory and
// written in one pass; byte-identical reruns come for free. metrics.csv
// mirrors every scalar of summary.json as `path,value` rows so downstream
// tooling never has to parse JSON.

#include "ucplab/core.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ucplab {

using Json = nlohmann::json;

struct Report {
  Json summary;
  std::vector<std::pair<std::string, std::string>> files;  // relative path -> content
  std::vector<std::pair<std::string, bool>> gates;

  bool ok() const {
    for (const auto& [name, pass] : gates)
      if (!pass) return false;
    return true;
  }

  void add_file(const std::string& path, std::string content) {
    files.emplace_back(path, std::move(content));
  }
  void gate(const std::string& name, bool pass) { gates.emplace_back(name, pass); }
};

namespace reportdetail {

inline void flatten_metrics(const Json& j, const std::string& prefix,
                            std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_metrics(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten_metrics(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number() || j.is_boolean()) {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace reportdetail

inline std::string metrics_csv(const Json& summary) {
  std::vector<std::pair<std::string, std::string>> rows;
  reportdetail::flatten_metrics(summary, "", rows);
  std::sort(rows.begin(), rows.end());
  std::string out = "metric,value\n";
  for (const auto& [k, v] : rows) out += k + "," + v + "\n";
  return out;
}

// Finalize and write everything under `outdir`. Gate states are appended to
// the summary before serialization.
inline void write_report(Report& rep, const std::string& outdir) {
  Json gates = Json::object();
  for (const auto& [name, pass] : rep.gates) gates[name] = pass;
  rep.summary["gates"] = gates;
  rep.summary["all_gates_passed"] = rep.ok();

  rep.add_file("summary.json", rep.summary.dump(2) + "\n");
  rep.add_file("metrics.csv", metrics_csv(rep.summary));

  namespace fs = std::filesystem;
  for (const auto& [rel, content] : rep.files) {
    fs::path path = fs::path(outdir) / rel;
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << content;
  }
}

// --- minimal SVG line plots -------------------------------------------------

struct SvgSeries {
  std::string name;
  std::vector<double> x, y;
};

inline std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                                 const std::string& ylabel, std::vector<SvgSeries> series,
                                 bool logx = false, bool logy = false) {
  const int W = 640, H = 440, ML = 70, MR = 20, MT = 40, MB = 50;
  auto tx = [&](double v) { return logx ? std::log10(std::max(v, 1e-300)) : v; };
  auto ty = [&](double v) { return logy ? std::log10(std::max(std::abs(v), 1e-300)) : v; };

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  double padx = 0.03 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
  xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;

  auto px = [&](double v) { return ML + (tx(v) - xmin) / (xmax - xmin) * (W - ML - MR); };
  auto py = [&](double v) { return H - MB - (ty(v) - ymin) / (ymax - ymin) * (H - MT - MB); };

  char buf[256];
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"440\" "
         "viewBox=\"0 0 640 440\">\n";
  svg += "<rect width=\"640\" height=\"440\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"24\" font-family=\"monospace\" font-size=\"14\">%s</text>\n",
                ML, title.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", ML,
                H - MB, W - MR, H - MB);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", ML, MT,
                ML, H - MB);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"12\">%s%s</text>\n",
                (ML + W - MR) / 2 - 20, H - 14, logx ? "log10 " : "", xlabel.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"14\" y=\"%d\" font-family=\"monospace\" font-size=\"12\" "
                "transform=\"rotate(-90 14 %d)\">%s%s</text>\n",
                (MT + H - MB) / 2 + 20, (MT + H - MB) / 2 + 20, logy ? "log10 " : "",
                ylabel.c_str());
  svg += buf;
  // min/max tick labels
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"10\">%.4g</text>\n",
                ML - 4, H - MB + 16, xmin + padx);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"10\">%.4g</text>\n",
                W - MR - 40, H - MB + 16, xmax - padx);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"10\">%.4g</text>\n",
                4, H - MB, ymin + pady);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"10\">%.4g</text>\n",
                4, MT + 10, ymax - pady);
  svg += buf;

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      pts += buf;
    }
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
           palette[k % 7] + "\" stroke-width=\"1.5\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"11\" "
                  "fill=\"%s\">%s</text>\n",
                  W - MR - 160, MT + 16 * static_cast<int>(k) + 8, palette[k % 7],
                  s.name.c_str());
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ucplab
