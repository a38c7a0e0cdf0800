#include "formats.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

#include "metric_cooks/error.hpp"

namespace mcooks::cli {

namespace {

using linalg::Index;
using nlohmann::json;

[[noreturn]] void parse_error(const std::string& source, const std::string& where,
                              const std::string& message) {
  throw Error(ErrorKind::ParseError, source + ":" + where + ": " + message);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, const std::string& source, const std::string& where) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
    parse_error(source, where, "'" + std::string(token) + "' is not a number");
  }
  return value;
}

std::vector<double> json_numbers(const json& node, const std::string& source,
                                 const std::string& where) {
  if (!node.is_array()) parse_error(source, where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    if (!v.is_number()) parse_error(source, where, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json json_array(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(v);
  return out;
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    json doc = json::parse(text);
    if (!doc.is_array()) parse_error(source, "1", "expected a JSON array of records");
    return doc;
  } catch (const json::parse_error& e) {
    parse_error(source, "byte " + std::to_string(e.byte), e.what());
  }
}

std::string json_with_exact_numbers(const json& doc) {
  // nlohmann prints the shortest round-trip form; that is exact too, but the
  // file formats promise 17 significant digits.
  std::string out;
  const auto emit = [&](const auto& self, const json& node) -> void {
    if (node.is_array()) {
      out += '[';
      for (std::size_t i = 0; i < node.size(); ++i) {
        if (i) out += ',';
        self(self, node[i]);
      }
      out += ']';
    } else if (node.is_object()) {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : node.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump() + ':';
        self(self, value);
      }
      out += '}';
    } else if (node.is_number_float()) {
      out += format_number(node.get<double>());
    } else {
      out += node.dump();
    }
  };
  emit(emit, doc);
  return out;
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text,
                                                const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t field = 0;
    for (;;) {
      ++field;
      const auto comma = body.find(',', start);
      const auto token = body.substr(start, comma == std::string_view::npos ? body.npos
                                                                             : comma - start);
      row.push_back(parse_number(token, source,
                                 std::to_string(line_no) + ":" + std::to_string(field)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix parse_csv_matrix(const std::string& text, const std::string& source) {
  const auto rows = parse_csv_rows(text, source);
  if (rows.empty()) parse_error(source, "1", "no data rows");
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      parse_error(source, "row " + std::to_string(i + 1),
                  "expected " + std::to_string(cols) + " fields, found " +
                      std::to_string(rows[i].size()));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

ResponseSet parse_responses(const std::string& text, Space space, Metric metric,
                            const MetricOptions& options, const std::string& source) {
  ResponseSet::Objects objects;
  switch (space) {
    case Space::Euclidean: {
      const Matrix m = parse_csv_matrix(text, source);
      std::vector<EuclideanPoint> pts;
      for (Index i = 0; i < m.rows(); ++i) {
        pts.push_back({std::vector<double>(m.row(i).begin(), m.row(i).end())});
      }
      objects = std::move(pts);
      break;
    }
    case Space::Distribution: {
      std::vector<EmpiricalDistribution> dists;
      for (auto& row : parse_csv_rows(text, source)) dists.push_back({std::move(row)});
      objects = std::move(dists);
      break;
    }
    case Space::Network: {
      const json doc = parse_json(text, source);
      std::vector<LabeledGraph> graphs;
      for (std::size_t r = 0; r < doc.size(); ++r) {
        const std::string where = "record " + std::to_string(r + 1);
        const json& rec = doc[r];
        if (!rec.is_object() || !rec.contains("adjacency") || !rec["adjacency"].is_array()) {
          parse_error(source, where, "expected {\"adjacency\": [[...]]}");
        }
        const json& rows = rec["adjacency"];
        Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const auto values = json_numbers(rows[i], source, where);
          if (values.size() != rows.size()) parse_error(source, where, "adjacency is not square");
          for (std::size_t j = 0; j < values.size(); ++j) {
            a(static_cast<Index>(i), static_cast<Index>(j)) = values[j];
          }
        }
        try {
          graphs.emplace_back(std::move(a));
        } catch (const Error& e) {
          parse_error(source, where, e.what());
        }
      }
      objects = std::move(graphs);
      break;
    }
    case Space::Functional: {
      const json doc = parse_json(text, source);
      std::vector<SampledCurve> curves;
      for (std::size_t r = 0; r < doc.size(); ++r) {
        const std::string where = "record " + std::to_string(r + 1);
        const json& rec = doc[r];
        if (!rec.is_object() || !rec.contains("t") || !rec.contains("y")) {
          parse_error(source, where, "expected {\"t\": [...], \"y\": [...]}");
        }
        curves.push_back({json_numbers(rec["t"], source, where), json_numbers(rec["y"], source, where)});
      }
      objects = std::move(curves);
      break;
    }
  }
  try {
    return ResponseSet(std::move(objects), metric, options);
  } catch (const Error& e) {
    if (!metric_valid_for(space, metric)) throw;
    parse_error(source, "responses", e.what());
  }
}

std::string write_csv_matrix(const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string write_responses(const ResponseSet& rs) {
  std::string out;
  const auto row = [&out](const std::vector<double>& values) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (j) out += ',';
      out += format_number(values[j]);
    }
    out += '\n';
  };
  std::visit(
      [&](const auto& list) {
        using T = typename std::decay_t<decltype(list)>::value_type;
        if constexpr (std::is_same_v<T, EuclideanPoint>) {
          for (const auto& p : list) row(p.coords);
        } else if constexpr (std::is_same_v<T, EmpiricalDistribution>) {
          for (const auto& d : list) row(d.samples);
        } else if constexpr (std::is_same_v<T, LabeledGraph>) {
          json doc = json::array();
          for (const auto& g : list) {
            json rows = json::array();
            for (Index i = 0; i < g.adjacency().rows(); ++i) {
              rows.push_back(json_array(
                  std::vector<double>(g.adjacency().row(i).begin(), g.adjacency().row(i).end())));
            }
            doc.push_back({{"adjacency", rows}});
          }
          out = json_with_exact_numbers(doc) + "\n";
        } else {
          json doc = json::array();
          for (const auto& c : list) doc.push_back({{"t", json_array(c.times)}, {"y", json_array(c.values)}});
          out = json_with_exact_numbers(doc) + "\n";
        }
      },
      rs.objects());
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidInput, path.string() + ": cannot write file");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::InvalidInput, path.string() + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::InvalidInput, path.string() + ": " + ec.message());
  }
}

}  // namespace mcooks::cli
