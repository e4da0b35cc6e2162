#include "dyson/io.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "dyson/errors.hpp"

namespace dyson {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw DomainError("malformed number '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string to_csv(const Configuration& xi) {
  std::string out = xi.dim() == 1 ? "x\n" : "x,y\n";
  for (const auto& p : xi.points()) {
    out += format_double(p.x());
    if (xi.dim() == 2) {
      out += ',';
      out += format_double(p.y());
    }
    out += '\n';
  }
  return out;
}

Configuration configuration_from_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty()) throw DomainError("configuration CSV: missing header");
  const auto& header = rows.front();
  int dim = 0;
  if (header.size() == 1 && header[0] == "x") {
    dim = 1;
  } else if (header.size() == 2 && header[0] == "x" && header[1] == "y") {
    dim = 2;
  } else {
    throw DomainError("configuration CSV: header must be 'x' or 'x,y'");
  }
  std::vector<Point> pts;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<std::size_t>(dim)) throw DomainError("configuration CSV: wrong column count");
    pts.push_back(dim == 1 ? Point(parse_double(rows[i][0]))
                           : Point(parse_double(rows[i][0]), parse_double(rows[i][1])));
  }
  return Configuration(std::move(pts), dim);
}

nlohmann::json to_json(const Configuration& xi) {
  auto arr = nlohmann::json::array();
  for (const auto& p : xi.points()) {
    if (xi.dim() == 1) {
      arr.push_back(p.x());
    } else {
      arr.push_back({p.x(), p.y()});
    }
  }
  return arr;
}

Configuration configuration_from_json(const nlohmann::json& j, int dim) {
  if (!j.is_array()) throw DomainError("configuration JSON must be an array");
  std::vector<Point> pts;
  for (const auto& e : j) {
    if (dim == 1) {
      pts.emplace_back(e.get<double>());
    } else {
      if (!e.is_array() || e.size() != 2) throw DomainError("2D configuration JSON entries must be [x, y]");
      pts.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
  }
  return Configuration(std::move(pts), dim);
}

std::string samples_to_csv(const std::vector<Configuration>& samples) {
  const int dim = samples.empty() ? 1 : samples.front().dim();
  std::string out = dim == 1 ? "sample,x\n" : "sample,x,y\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (const auto& p : samples[s].points()) {
      out += std::to_string(s);
      out += ',';
      out += format_double(p.x());
      if (dim == 2) {
        out += ',';
        out += format_double(p.y());
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<Configuration> samples_from_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty()) throw DomainError("samples CSV: missing header");
  const auto& header = rows.front();
  int dim = 0;
  if (header == std::vector<std::string>{"sample", "x"}) {
    dim = 1;
  } else if (header == std::vector<std::string>{"sample", "x", "y"}) {
    dim = 2;
  } else {
    throw DomainError("samples CSV: header must be 'sample,x' or 'sample,x,y'");
  }
  // Samples with no points leave no rows; indices fill the gaps.
  std::map<std::size_t, std::vector<Point>> by_sample;
  std::size_t max_index = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != static_cast<std::size_t>(dim) + 1) throw DomainError("samples CSV: wrong column count");
    const auto idx = static_cast<std::size_t>(parse_double(r[0]));
    max_index = std::max(max_index, idx);
    by_sample[idx].push_back(dim == 1 ? Point(parse_double(r[1])) : Point(parse_double(r[1]), parse_double(r[2])));
  }
  std::vector<Configuration> out;
  if (by_sample.empty()) return out;
  out.reserve(max_index + 1);
  for (std::size_t s = 0; s <= max_index; ++s) {
    auto it = by_sample.find(s);
    out.emplace_back(it == by_sample.end() ? std::vector<Point>{} : it->second, dim);
  }
  return out;
}

}  // namespace dyson
