#include "svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <regex>
#include <sstream>

#include "gelab/csv.hpp"

namespace gelab::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(const std::string& s) {
  static const std::pair<const char*, char> kEntities[] = {{"&lt;", '<'}, {"&gt;", '>'}, {"&amp;", '&'}, {"&quot;", '"'}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool hit = false;
    for (const auto& [ent, c] : kEntities) {
      if (s.compare(i, std::strlen(ent), ent) == 0) {
        out += c;
        i += std::strlen(ent);
        hit = true;
        break;
      }
    }
    if (!hit) out += s[i++];
  }
  return out;
}

std::string px(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, std::round(v * 100.0) / 100.0, std::chars_format::fixed, 2);
  return std::string(buf, r.ptr);
}

std::string tick_label(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo <= 0.0) {
      const double pad = std::abs(lo) > 0.0 ? std::abs(lo) * 0.05 : 0.5;
      lo -= pad;
      hi += pad;
    } else {
      const double pad = (hi - lo) * 0.05;
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::string SvgPlot::render() const {
  Range xr, yr;
  for (const auto& s : series) {
    for (const auto& p : s.points) xr.add(p.x), yr.add(p.y);
    for (const auto& b : s.bounds) yr.add(b.x), yr.add(b.y);
  }
  if (vertical_line) xr.add(*vertical_line);
  xr.finish();
  yr.finish();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
    << "</text>\n";
  o << "<g class=\"axes\" stroke=\"#333\">\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph << "\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n";
  o << "</g>\n<g class=\"ticks\" fill=\"#333\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xr.lo + (xr.hi - xr.lo) * k / 5.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * k / 5.0;
    o << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(kTop + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(xv) << "</text>\n";
    o << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(sy(yv) + 4) << "\" text-anchor=\"end\">" << tick_label(yv)
      << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << escape(x_label)
    << "</text>\n";
  o << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";
  if (vertical_line) {
    o << "<line class=\"threshold\" data-x=\"" << format_double(*vertical_line) << "\" x1=\"" << px(sx(*vertical_line))
      << "\" y1=\"" << kTop << "\" x2=\"" << px(sx(*vertical_line)) << "\" y2=\"" << kTop + ph
      << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (const auto& s : series) {
    const std::string name = escape(s.name);
    o << "<g class=\"series\" data-series=\"" << name << "\">\n";
    switch (s.kind) {
      case PlotSeries::Kind::line: {
        std::string data, pts;
        for (const auto& p : s.points) {
          if (!data.empty()) data += ' ', pts += ' ';
          data += format_double(p.x) + ',' + format_double(p.y);
          pts += px(sx(p.x)) + ',' + px(sy(p.y));
        }
        o << "<polyline data-series=\"" << name << "\" data-points=\"" << data << "\" points=\"" << pts
          << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        break;
      }
      case PlotSeries::Kind::points:
        for (const auto& p : s.points) {
          o << "<circle data-series=\"" << name << "\" data-x=\"" << format_double(p.x) << "\" data-y=\""
            << format_double(p.y) << "\" cx=\"" << px(sx(p.x)) << "\" cy=\"" << px(sy(p.y)) << "\" r=\"3\" fill=\""
            << s.color << "\"/>\n";
        }
        break;
      case PlotSeries::Kind::interval:
        for (std::size_t k = 0; k < s.points.size() && k < s.bounds.size(); ++k) {
          const auto& p = s.points[k];
          const auto& b = s.bounds[k];
          o << "<line data-series=\"" << name << "\" data-x=\"" << format_double(p.x) << "\" data-y=\""
            << format_double(p.y) << "\" data-lo=\"" << format_double(b.x) << "\" data-hi=\"" << format_double(b.y)
            << "\" x1=\"" << px(sx(p.x)) << "\" y1=\"" << px(sy(b.x)) << "\" x2=\"" << px(sx(p.x)) << "\" y2=\""
            << px(sy(b.y)) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
          o << "<circle data-series=\"" << name << "-point\" data-x=\"" << format_double(p.x) << "\" data-y=\""
            << format_double(p.y) << "\" cx=\"" << px(sx(p.x)) << "\" cy=\"" << px(sy(p.y)) << "\" r=\"3\" fill=\""
            << s.color << "\"/>\n";
        }
        break;
    }
    o << "</g>\n";
  }

  double ly = kTop + 6;
  o << "<g class=\"legend\">\n";
  for (const auto& s : series) {
    o << "<rect x=\"" << kLeft + pw - 150 << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\"" << s.color
      << "\"/><text x=\"" << kLeft + pw - 135 << "\" y=\"" << ly + 9 << "\">" << escape(s.name) << "</text>\n";
    ly += 16;
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

std::vector<SvgMark> parse_svg_marks(const std::string& svg) {
  static const std::regex element(R"(<(polyline|circle|line) ([^>]*)/>)");
  static const std::regex attr(R"(([a-z-]+)="([^"]*)\")");
  std::vector<SvgMark> marks;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), element); it != std::sregex_iterator(); ++it) {
    const std::string tag = (*it)[1];
    const std::string body = (*it)[2];
    std::map<std::string, std::string> attrs;
    for (auto a = std::sregex_iterator(body.begin(), body.end(), attr); a != std::sregex_iterator(); ++a) {
      attrs[(*a)[1]] = (*a)[2];
    }
    if (!attrs.count("data-series")) continue;
    SvgMark m{unescape(attrs["data-series"]), tag, {}};
    if (tag == "polyline") {
      std::istringstream ss(attrs["data-points"]);
      std::string pair;
      while (ss >> pair) {
        const auto comma = pair.find(',');
        m.points.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
      }
    } else {
      m.points.push_back({std::stod(attrs["data-x"]), std::stod(attrs["data-y"])});
      if (tag == "line") m.points.push_back({std::stod(attrs["data-lo"]), std::stod(attrs["data-hi"])});
    }
    marks.push_back(std::move(m));
  }
  return marks;
}

}  // namespace gelab::cli
