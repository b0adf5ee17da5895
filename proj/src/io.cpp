#include "halfreg/io.hpp"

#include <fstream>
#include <sstream>

#include "halfreg/error.hpp"

namespace halfreg::io {

namespace {

int require_int(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorKind::SchemaError, std::string("missing field \"") + key + "\"");
  }
  const auto& value = doc.at(key);
  if (!value.is_number_integer()) {
    throw Error(ErrorKind::SchemaError, std::string("field \"") + key + "\" must be an integer");
  }
  return value.get<int>();
}

std::vector<int> int_row(const json& value, std::size_t expected, const std::string& where) {
  if (!value.is_array()) throw Error(ErrorKind::SchemaError, where + " must be an array");
  if (value.size() != expected) {
    throw Error(ErrorKind::SchemaError, where + " has " + std::to_string(value.size()) +
                                            " entries, expected " + std::to_string(expected));
  }
  std::vector<int> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number_integer()) {
      throw Error(ErrorKind::SchemaError, where + "[" + std::to_string(i) + "] must be an integer");
    }
    out.push_back(value[i].get<int>());
  }
  return out;
}

const json& require_array(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw Error(ErrorKind::SchemaError, std::string("field \"") + key + "\" must be an array");
  }
  return doc.at(key);
}

}  // namespace

json to_json(const DegreeMatrix& matrix) {
  return json{{"n", matrix.rows()},
              {"m", matrix.cols()},
              {"k", matrix.colors()},
              {"d", matrix.row_degrees()},
              {"f", matrix.col_degrees()}};
}

DegreeMatrix degree_matrix_from_json(const json& doc) {
  const int n = require_int(doc, "n");
  const int m = require_int(doc, "m");
  const int k = require_int(doc, "k");
  if (n < 1 || m < 1 || k < 1) {
    throw Error(ErrorKind::SchemaError, "n, m and k must be positive");
  }
  auto d = int_row(require_array(doc, "d"), k, "d");
  const auto& f_doc = require_array(doc, "f");
  if (f_doc.size() != static_cast<std::size_t>(k)) {
    throw Error(ErrorKind::SchemaError, "f has " + std::to_string(f_doc.size()) +
                                            " rows, expected k = " + std::to_string(k));
  }
  std::vector<std::vector<int>> f;
  for (std::size_t i = 0; i < f_doc.size(); ++i) {
    f.push_back(int_row(f_doc[i], m, "f row " + std::to_string(i)));
  }
  try {
    return DegreeMatrix(n, m, std::move(d), std::move(f));
  } catch (const Error& e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
}

json to_json(const ColoredRealization& r) {
  return json{{"n", r.rows()}, {"m", r.cols()}, {"k", r.colors()}, {"matrix", r.matrix().to_nested()}};
}

ColoredRealization realization_from_json(const json& doc) {
  const int n = require_int(doc, "n");
  const int m = require_int(doc, "m");
  const int k = require_int(doc, "k");
  if (n < 1 || m < 1 || k < 1) {
    throw Error(ErrorKind::SchemaError, "n, m and k must be positive");
  }
  const auto& rows = require_array(doc, "matrix");
  if (rows.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::SchemaError, "matrix has " + std::to_string(rows.size()) +
                                            " rows, expected n = " + std::to_string(n));
  }
  std::vector<std::vector<Color>> cells;
  for (std::size_t u = 0; u < rows.size(); ++u) {
    auto row = int_row(rows[u], m, "matrix row " + std::to_string(u));
    for (Color c : row) {
      if (c < 0 || c >= k) {
        throw Error(ErrorKind::SchemaError, "matrix row " + std::to_string(u) +
                                                " has color " + std::to_string(c) + " outside [0,k)");
      }
    }
    cells.push_back(std::move(row));
  }
  return ColoredRealization(ColorMatrix(cells), k);
}

std::string to_csv(const ColoredRealization& r) {
  std::string out;
  for (int u = 0; u < r.rows(); ++u) {
    for (int v = 0; v < r.cols(); ++v) {
      if (v) out += ',';
      out += std::to_string(r.color(u, v));
    }
    out += '\n';
  }
  return out;
}

ColoredRealization realization_from_csv(std::string_view text, int colors) {
  std::vector<std::vector<Color>> cells;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<Color> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        const int c = std::stoi(field, &used);
        if (used != field.size() || c < 0 || c >= colors) throw std::invalid_argument(field);
        row.push_back(c);
      } catch (const std::exception&) {
        throw Error(ErrorKind::SchemaError,
                    "line " + std::to_string(line_no) + ": bad color id \"" + field + "\"");
      }
    }
    if (!cells.empty() && row.size() != cells.front().size()) {
      throw Error(ErrorKind::SchemaError, "line " + std::to_string(line_no) + " has " +
                                              std::to_string(row.size()) + " fields, expected " +
                                              std::to_string(cells.front().size()));
    }
    cells.push_back(std::move(row));
  }
  if (cells.empty()) throw Error(ErrorKind::SchemaError, "empty CSV");
  return ColoredRealization(ColorMatrix(cells), colors);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoError, "read failed for " + path.string());
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

json parse_json_file(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, path.string() + ": " + e.what());
  }
}

DegreeMatrix parse_matrix_file(const std::filesystem::path& path) {
  return degree_matrix_from_json(parse_json_file(path));
}

}  // namespace halfreg::io
