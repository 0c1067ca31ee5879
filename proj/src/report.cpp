#include "accelcoh/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "accelcoh/errors.hpp"

namespace accelcoh::report {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("csv: cannot parse number '" + s + "'");
  }
  return v;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// "--" is not allowed inside an XML comment.
std::string comment_safe(std::string s) {
  for (std::size_t p = s.find("--"); p != std::string::npos; p = s.find("--", p)) {
    s.replace(p, 2, "- -");
  }
  return s;
}

std::string tick_label(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Blue -> red ramp for t in [0, 1].
std::string colour(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(40 + 200 * t));
  const int g = static_cast<int>(std::lround(60 + 120 * (1.0 - std::abs(2.0 * t - 1.0))));
  const int b = static_cast<int>(std::lround(220 - 190 * t));
  std::ostringstream os;
  os << "rgb(" << r << "," << g << "," << b << ")";
  return os.str();
}

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= d;
      hi += d;
    }
  }
};

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& c : table.comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    auto cells = split(line, ',');
    if (!have_header) {
      t.columns = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw ConfigError("csv: row has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(t.columns.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw ConfigError("csv: missing header line");
  return t;
}

std::string to_json(const Table& table) {
  nlohmann::json j;
  j["comments"] = table.comments;
  j["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) {
      if (std::isfinite(v)) {
        r.push_back(v);
      } else {
        r.push_back(nullptr);
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string render_svg(const Table& table, const PlotSpec& plot) {
  if (table.rows.empty()) throw ConfigError("render_svg: empty table");
  const std::size_t ncol = table.columns.size();
  auto check = [&](std::size_t c) {
    if (c >= ncol) throw ConfigError("render_svg: column index out of range");
  };
  check(plot.x);
  if (plot.y.empty()) throw ConfigError("render_svg: no y column");
  for (auto c : plot.y) check(c);
  if (plot.kind != PlotKind::lines) check(plot.z);

  constexpr double W = 640, H = 480, left = 80, right = 30, top = 56, bottom = 60;
  const double pw = W - left - right;
  const double ph = H - top - bottom;
  auto ytrans = [&](double v) { return plot.log_y ? std::log10(v) : v; };

  Extent ex, ey, ez;
  for (const auto& row : table.rows) {
    ex.add(row[plot.x]);
    if (plot.kind == PlotKind::lines) {
      for (auto c : plot.y) ey.add(ytrans(row[c]));
    } else {
      ey.add(ytrans(row[plot.y.front()]));
      ez.add(row[plot.z]);
    }
  }
  ex.pad();
  ey.pad();
  ez.pad();
  std::vector<double> xs, ys;
  if (plot.kind == PlotKind::heatmap) {
    if (plot.log_y) throw ConfigError("render_svg: heatmaps do not support a log axis");
    for (const auto& row : table.rows) {
      xs.push_back(row[plot.x]);
      ys.push_back(row[plot.y.front()]);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    // Widen the axes by half a cell so cell centres sit on the data values.
    auto widen = [](Extent& e, std::size_t n) {
      const double half = n > 1 ? 0.5 * (e.hi - e.lo) / static_cast<double>(n - 1) : 0.0;
      e.lo -= half;
      e.hi += half;
    };
    if (xs.size() > 1) widen(ex, xs.size());
    if (ys.size() > 1) widen(ey, ys.size());
  }
  auto sx = [&](double v) { return left + (v - ex.lo) / (ex.hi - ex.lo) * pw; };
  auto sy = [&](double v) { return top + ph - (ytrans(v) - ey.lo) / (ey.hi - ey.lo) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--\n";
  for (const auto& c : table.comments) os << comment_safe(c) << "\n";
  os << "-->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << xml_escape(plot.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = ex.lo + (ex.hi - ex.lo) * k / 4.0;
    const double fy = ey.lo + (ey.hi - ey.lo) * k / 4.0;
    const double px = left + pw * k / 4.0;
    const double py = top + ph - ph * k / 4.0;
    os << "<line x1=\"" << px << "\" y1=\"" << top + ph << "\" x2=\"" << px << "\" y2=\""
       << top + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">"
       << tick_label(fx) << "</text>\n";
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << py << "\" x2=\"" << left << "\" y2=\""
       << py << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
       << tick_label(plot.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
     << xml_escape(table.columns[plot.x]) << "</text>\n";
  os << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << top + ph / 2 << ")\">" << xml_escape(table.columns[plot.y.front()]) << "</text>\n";

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
  if (plot.kind == PlotKind::lines) {
    for (std::size_t s = 0; s < plot.y.size(); ++s) {
      const char* c = palette[s % 5];
      os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& row : table.rows) {
        const double y = row[plot.y[s]];
        if (std::isfinite(row[plot.x]) && std::isfinite(ytrans(y))) {
          os << sx(row[plot.x]) << "," << sy(y) << " ";
        }
      }
      os << "\"/>\n";
      if (table.rows.size() == 1) {
        os << "<circle cx=\"" << sx(table.rows[0][plot.x]) << "\" cy=\""
           << sy(table.rows[0][plot.y[s]]) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
      }
      os << "<text x=\"" << left + pw - 10 << "\" y=\"" << top + 16 + 16 * s
         << "\" text-anchor=\"end\" fill=\"" << c << "\">" << xml_escape(table.columns[plot.y[s]])
         << "</text>\n";
    }
  } else if (plot.kind == PlotKind::scatter) {
    for (const auto& row : table.rows) {
      const double y = row[plot.y.front()];
      if (!std::isfinite(row[plot.x]) || !std::isfinite(ytrans(y))) continue;
      os << "<circle cx=\"" << sx(row[plot.x]) << "\" cy=\"" << sy(y) << "\" r=\"2.5\" fill=\""
         << colour((row[plot.z] - ez.lo) / (ez.hi - ez.lo)) << "\"/>\n";
    }
  } else {
    // Heatmap: one rectangle per distinct (x, y) pair, centred on its tick position.
    const double cw = pw / static_cast<double>(xs.size());
    const double ch = ph / static_cast<double>(ys.size());
    for (const auto& row : table.rows) {
      if (!std::isfinite(row[plot.z])) continue;
      const auto ix = std::lower_bound(xs.begin(), xs.end(), row[plot.x]) - xs.begin();
      const auto iy = std::lower_bound(ys.begin(), ys.end(), row[plot.y.front()]) - ys.begin();
      os << "<rect x=\"" << left + cw * static_cast<double>(ix) << "\" y=\""
         << top + ph - ch * static_cast<double>(iy + 1) << "\" width=\"" << cw << "\" height=\""
         << ch << "\" fill=\"" << colour((row[plot.z] - ez.lo) / (ez.hi - ez.lo)) << "\"/>\n";
    }
  }
  if (plot.kind != PlotKind::lines) {
    os << "<text x=\"" << left + pw << "\" y=\"" << top - 10 << "\" text-anchor=\"end\">"
       << xml_escape(table.columns[plot.z]) << ": " << tick_label(ez.lo) << " (blue) to "
       << tick_label(ez.hi) << " (red)</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace accelcoh::report
