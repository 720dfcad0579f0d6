#include "gaussmatch/harness/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef GAUSSMATCH_VERSION_STRING
#define GAUSSMATCH_VERSION_STRING "unknown"
#endif

namespace gaussmatch::harness {

std::string software_version() { return GAUSSMATCH_VERSION_STRING; }

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string to_csv(const ResultTable& table) {
  std::string s = "n,replicate,seed,cost,estimator,wall_time_ms\n";
  for (const auto& r : table.rows) {
    s += std::to_string(r.n) + ',' + std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',' +
         fmt("%.17g", r.cost) + ',' + r.estimator + ',' + fmt("%.3f", r.wall_time_ms) + '\n';
  }
  return s;
}

void write_csv(const ResultTable& table, const std::string& path) { write_file(path, to_csv(table)); }

ResultTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,replicate,seed,cost,estimator", 0) != 0)
    throw std::runtime_error(path + ": missing or unexpected header");
  ResultTable table;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[6];
    for (auto& x : f) std::getline(ss, x, ',');
    try {
      ResultRow r;
      r.n = std::stoull(f[0]);
      r.replicate = std::stoi(f[1]);
      r.seed = std::stoull(f[2]);
      r.cost = std::stod(f[3]);
      r.estimator = f[4];
      r.wall_time_ms = f[5].empty() ? 0.0 : std::stod(f[5]);
      table.rows.push_back(r);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed row");
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return a.n < b.n; });
  return table;
}

nlohmann::json summary_json(const ExperimentConfig& cfg, const ResultTable& table, const std::optional<RateFit>& fit) {
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : table.aggregate()) aggs.push_back({{"n", a.n}, {"mean", a.mean}, {"se", a.se}, {"count", a.count}});
  return {{"config", to_json(cfg)},
          {"aggregates", aggs},
          {"fit", fit ? to_json(*fit) : nlohmann::json(nullptr)},
          {"reference_slope", -cfg.p / cfg.d},
          {"warnings", table.warnings},
          {"version", software_version()}};
}

std::string to_svg(const ResultTable& table, const std::optional<RateFit>& fit, double reference_slope,
                   const std::string& title) {
  const auto aggs = table.aggregate();
  const double W = 640, H = 480, L = 80, Rm = 20, T = 40, B = 60;
  std::vector<double> lx, ly, lo, hi;
  for (const auto& a : aggs) {
    if (!(a.mean > 0.0)) continue;
    lx.push_back(std::log10(static_cast<double>(a.n)));
    ly.push_back(std::log10(a.mean));
    lo.push_back(std::log10(std::max(a.mean - a.se, a.mean * 1e-3)));
    hi.push_back(std::log10(a.mean + a.se));
  }
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << title
    << "</text>\n";
  if (lx.empty()) {
    s << "</svg>\n";
    return s.str();
  }
  double x0 = *std::min_element(lx.begin(), lx.end()), x1 = *std::max_element(lx.begin(), lx.end());
  double y0 = *std::min_element(lo.begin(), lo.end()), y1 = *std::max_element(hi.begin(), hi.end());
  if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.05 * (x1 - x0), pady = 0.08 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto X = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - Rm); };
  auto Y = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
  s << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - Rm
    << "\" height=\"" << H - T - B << "\"/></g>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 15
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">log10 n</text>\n";
  s << "<text x=\"20\" y=\"" << H / 2 << "\" transform=\"rotate(-90 20 " << H / 2
    << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">log10 mean cost</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = x0 + (x1 - x0) * i / 4, vy = y0 + (y1 - y0) * i / 4;
    s << "<text x=\"" << X(vx) << "\" y=\"" << H - B + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fmt("%.2f", vx) << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << Y(vy) + 3
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt("%.2f", vy) << "</text>\n";
  }
  // reference slope through the first point
  s << "<line class=\"reference\" x1=\"" << X(lx.front()) << "\" y1=\"" << Y(ly.front()) << "\" x2=\"" << X(lx.back())
    << "\" y2=\"" << Y(ly.front() + reference_slope * (lx.back() - lx.front()))
    << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/>\n";
  if (fit) {
    const double ln10 = std::log(10.0);
    auto fy = [&](double v) { return (fit->intercept + fit->slope * v * ln10) / ln10; };
    s << "<line class=\"fit\" x1=\"" << X(lx.front()) << "\" y1=\"" << Y(fy(lx.front())) << "\" x2=\"" << X(lx.back())
      << "\" y2=\"" << Y(fy(lx.back())) << "\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 << "\" font-family=\"sans-serif\" font-size=\"11\">slope "
      << fmt("%.3f", fit->slope) << " +/- " << fmt("%.3f", fit->slope_se) << " (reference " << fmt("%.3f", reference_slope)
      << ")</text>\n";
  }
  for (std::size_t i = 0; i < lx.size(); ++i) {
    s << "<line x1=\"" << X(lx[i]) << "\" y1=\"" << Y(lo[i]) << "\" x2=\"" << X(lx[i]) << "\" y2=\"" << Y(hi[i])
      << "\" stroke=\"black\"/>\n";
    s << "<circle class=\"point\" cx=\"" << X(lx[i]) << "\" cy=\"" << Y(ly[i]) << "\" r=\"4\" fill=\"firebrick\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

OutputPaths emit_outputs(const ExperimentConfig& cfg, const ResultTable& table, const std::optional<RateFit>& fit) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + cfg.out_dir + ": " + ec.message());
  const std::filesystem::path dir(cfg.out_dir);
  OutputPaths paths{(dir / "results.csv").string(), (dir / "summary.json").string(), (dir / "rates.svg").string()};
  write_csv(table, paths.csv);
  write_file(paths.json, summary_json(cfg, table, fit).dump(2) + "\n");
  const std::string title = to_string(cfg.estimator) + ", d=" + std::to_string(cfg.d) + ", p=" + fmt("%g", cfg.p);
  write_file(paths.svg, to_svg(table, fit, -cfg.p / cfg.d, title));
  return paths;
}

}  // namespace gaussmatch::harness
