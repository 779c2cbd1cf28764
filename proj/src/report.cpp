#include "filmcascade/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace filmcascade {

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw ReportError("Table::add: row width differs from header");
  rows.push_back(std::move(row));
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Enough significant digits that ticks over a narrow range stay distinct.
std::string short_num(double v, double span, double mag) {
  int digits = 3;
  if (span > 0.0 && mag > 0.0) digits = std::clamp(static_cast<int>(std::ceil(std::log10(mag / span))) + 2, 3, 15);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

std::string to_csv(const Table& t) {
  if (t.columns.empty() || t.rows.empty()) throw ReportError("to_csv: empty table");
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + num(r[i]);
    out += "\n";
  }
  return out;
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table t;
  if (!std::getline(in, line)) throw ReportError("parse_csv: missing header");
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) t.columns.push_back(c);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string c;
    std::vector<double> row;
    while (std::getline(ss, c, ',')) {
      if (c == "nan") row.push_back(std::numeric_limits<double>::quiet_NaN());
      else if (c == "inf") row.push_back(std::numeric_limits<double>::infinity());
      else if (c == "-inf") row.push_back(-std::numeric_limits<double>::infinity());
      else row.push_back(std::stod(c));
    }
    t.add(std::move(row));
  }
  return t;
}

std::string to_json(const Table& t, const std::map<std::string, double>& summary) {
  if (t.columns.empty() || t.rows.empty()) throw ReportError("to_json: empty table");
  nlohmann::ordered_json j;
  j["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (double v : r) row.push_back(std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(num(v)));
    rows.push_back(row);
  }
  j["rows"] = rows;
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary) s[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(num(v));
  j["summary"] = s;
  return j.dump(2) + "\n";
}

std::string to_svg(const Plot& p) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 55;
  auto tx = [&](double v) { return p.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return p.logy ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : p.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double a = tx(s.x[i]), b = ty(s.y[i]);
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      x0 = std::min(x0, a), x1 = std::max(x1, a), y0 = std::min(y0, b), y1 = std::max(y1, b);
    }
  if (!std::isfinite(x0)) throw ReportError("to_svg: no finite points");
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double a) { return L + (a - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double b) { return H - B - (b - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << escape_xml(p.title) << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  const double xspan = (p.logx ? std::pow(10.0, x1) - std::pow(10.0, x0) : x1 - x0) / 4.0;
  const double yspan = (p.logy ? std::pow(10.0, y1) - std::pow(10.0, y0) : y1 - y0) / 4.0;
  const double xmag = std::max(std::abs(p.logx ? std::pow(10.0, x0) : x0), std::abs(p.logx ? std::pow(10.0, x1) : x1));
  const double ymag = std::max(std::abs(p.logy ? std::pow(10.0, y0) : y0), std::abs(p.logy ? std::pow(10.0, y1) : y1));
  for (int i = 0; i <= 4; ++i) {
    const double a = x0 + (x1 - x0) * i / 4.0, b = y0 + (y1 - y0) * i / 4.0;
    const double la = p.logx ? std::pow(10.0, a) : a, lb = p.logy ? std::pow(10.0, b) : b;
    o << "<text x=\"" << px(a) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
      << short_num(la, p.logx ? 0.0 : xspan, xmag) << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << py(b) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
      << short_num(lb, p.logy ? 0.0 : yspan, ymag) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << escape_xml(p.xlabel + (p.logx ? " (log)" : "")) << "</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">" << escape_xml(p.ylabel + (p.logy ? " (log)" : "")) << "</text>\n";
  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* col = colors[k % 6];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double a = tx(s.x[i]), b = ty(s.y[i]);
      if (std::isfinite(a) && std::isfinite(b)) o << px(a) << "," << py(b) << " ";
    }
    o << "\"/>\n";
    const double ly = T + 14 + 16.0 * static_cast<double>(k);
    o << "<line x1=\"" << W - R - 150 << "\" y1=\"" << ly << "\" x2=\"" << W - R - 130 << "\" y2=\"" << ly
      << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << W - R - 125 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << escape_xml(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ReportError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ReportError("write failed for '" + path + "'");
}

void emit_report(const Table& t, ReportFormat f, const std::string& path,
                 const std::map<std::string, double>& summary, bool loglog) {
  if (t.columns.empty() || t.rows.empty()) throw ReportError("emit_report: empty table");
  switch (f) {
    case ReportFormat::Csv: write_text(path, to_csv(t)); return;
    case ReportFormat::Json: write_text(path, to_json(t, summary)); return;
    case ReportFormat::Svg: {
      Plot p;
      p.xlabel = t.columns[0];
      p.logx = p.logy = loglog;
      for (std::size_t c = 1; c < t.columns.size(); ++c) {
        PlotSeries s{t.columns[c], {}, {}};
        for (const auto& r : t.rows) {
          s.x.push_back(r[0]);
          s.y.push_back(r[c]);
        }
        p.series.push_back(std::move(s));
      }
      write_text(path, to_svg(p));
      return;
    }
  }
}

}  // namespace filmcascade
