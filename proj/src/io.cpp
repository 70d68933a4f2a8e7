#include "cavent/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cavent::io {

std::string format_sig(double value) {
  if (value == 0.0) return "0";  // squash negative zero
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 12);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

namespace {

void append_escaped(std::string& out, const std::string& text) {
  out += '"';
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c; break;
    }
  }
  out += '"';
}

void dump_value(std::string& out, const nlohmann::json& value, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<size_t>(indent + 1) * 2, ' ');
  switch (value.type()) {
    case nlohmann::json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        append_escaped(out, it.key());
        out += ": ";
        dump_value(out, it.value(), indent + 1);
      }
      out += '\n' + pad + '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ", ";
        first = false;
        dump_value(out, item, indent);
      }
      out += ']';
      return;
    }
    case nlohmann::json::value_t::string:
      append_escaped(out, value.get<std::string>());
      return;
    case nlohmann::json::value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(value.get<int64_t>());
      return;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(value.get<uint64_t>());
      return;
    case nlohmann::json::value_t::number_float:
      out += format_sig(value.get<double>());
      return;
    case nlohmann::json::value_t::null:
      out += "null";
      return;
    default:
      throw std::runtime_error("unsupported JSON value");
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& value) {
  std::string out;
  dump_value(out, value, 0);
  out += '\n';
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "pi,k,p_g,p_s1,p_s2,p_oprime2,script_c,concurrence\n";
  for (const SweepPoint& p : result.points) {
    out << format_sig(p.pump) << ',' << format_sig(p.leak) << ','
        << format_sig(p.p_g) << ',' << format_sig(p.p_s1) << ','
        << format_sig(p.p_s2) << ',' << format_sig(p.p_oprime2) << ','
        << format_sig(p.script_c) << ',' << format_sig(p.concurrence) << '\n';
  }
}

void write_evolve_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<double>& times,
                      const std::vector<Eigen::VectorXd>& states) {
  out << 't';
  for (const auto& label : labels) out << ',' << label;
  out << '\n';
  for (size_t row = 0; row < times.size(); ++row) {
    out << format_sig(times[row]);
    for (int i = 0; i < states[row].size(); ++i) out << ',' << format_sig(states[row](i));
    out << '\n';
  }
}

namespace {

double field_value(const SweepPoint& p, SweepField field) {
  switch (field) {
    case SweepField::ScriptC: return p.script_c;
    case SweepField::Ps1: return p.p_s1;
    case SweepField::Concurrence: return p.concurrence;
  }
  return 0.0;
}

struct Rgb {
  int r, g, b;
};

// Five-stop blue->yellow map, linearly interpolated.
Rgb colormap(double t) {
  static constexpr Rgb stops[5] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double f = t - k;
  return {static_cast<int>(std::lround(stops[k].r + f * (stops[k + 1].r - stops[k].r))),
          static_cast<int>(std::lround(stops[k].g + f * (stops[k + 1].g - stops[k].g))),
          static_cast<int>(std::lround(stops[k].b + f * (stops[k + 1].b - stops[k].b)))};
}

}  // namespace

void write_svg_heatmap(std::ostream& out, const SweepResult& result,
                       SweepField field, const std::string& title) {
  const int npi = static_cast<int>(result.pump_values.size());
  const int nk = static_cast<int>(result.leak_values.size());
  double lo = field_value(result.points.front(), field);
  double hi = lo;
  for (const SweepPoint& p : result.points) {
    lo = std::min(lo, field_value(p, field));
    hi = std::max(hi, field_value(p, field));
  }
  const double span = hi > lo ? hi - lo : 1.0;

  const int cell = 8;
  const int margin = 50;
  const int width = margin + npi * cell + 20;
  const int height = margin + nk * cell + 40;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<text x=\"" << margin << "\" y=\"20\" font-size=\"14\">" << title
      << " (min " << format_sig(lo) << ", max " << format_sig(hi) << ")</text>\n";
  for (int ik = 0; ik < nk; ++ik) {
    for (int ipi = 0; ipi < npi; ++ipi) {
      const double v = field_value(result.at(ik, ipi), field);
      const Rgb c = colormap((v - lo) / span);
      // y axis grows upward in K
      const int x = margin + ipi * cell;
      const int y = margin + (nk - 1 - ik) * cell - 20;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << c.r << ',' << c.g
          << ',' << c.b << ")\"/>\n";
    }
  }
  const int axis_y = margin + nk * cell - 20;
  out << "<text x=\"" << margin << "\" y=\"" << axis_y + 16
      << "\" font-size=\"11\">pi/gamma: " << format_sig(result.pump_values.front())
      << " .. " << format_sig(result.pump_values.back()) << "</text>\n";
  out << "<text x=\"" << margin << "\" y=\"" << axis_y + 30
      << "\" font-size=\"11\">k/gamma: " << format_sig(result.leak_values.front())
      << " .. " << format_sig(result.leak_values.back()) << "</text>\n";
  out << "</svg>\n";
}

}  // namespace cavent::io
