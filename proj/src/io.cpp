#include "bhgs/io.hpp"

#include "bhgs/error.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace bhgs::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(trim(cell));
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(ErrorKind::io, where + ": not a number: '" + s + "'");
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

RadialField field_on_nodes(const std::vector<double>& r, Eigen::MatrixXd values, const std::string& where) {
  if (r.size() < RadialGrid::min_nodes) fail(ErrorKind::io, where + ": too few rows for a grid");
  const GridPtr grid = RadialGrid::build(r.size(), r.back());
  const auto& nodes = grid->nodes();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(nodes(static_cast<Eigen::Index>(i)) - r[i]) > 1e-9 * (1.0 + r.back())) {
      fail(ErrorKind::io, where + ": r column is not a collocation grid (row " + std::to_string(i + 1) + ")");
    }
  }
  return RadialField(grid, std::move(values));
}

// TOML value grammar restricted to scalars and flat arrays.
nlohmann::json parse_toml_value(const std::string& raw, std::size_t line_no) {
  const std::string v = trim(raw);
  auto bad = [&](const std::string& why) -> nlohmann::json {
    fail(ErrorKind::config, "TOML line " + std::to_string(line_no) + ": " + why);
  };
  if (v.empty()) return bad("missing value");
  if (v.front() == '"' || v.front() == '\'') {
    if (v.size() < 2 || v.back() != v.front()) return bad("unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']') return bad("unterminated array");
    nlohmann::json arr = nlohmann::json::array();
    const std::string body = trim(v.substr(1, v.size() - 2));
    if (body.empty()) return arr;
    for (const auto& item : split(body, ',')) {
      if (item.empty()) continue;
      arr.push_back(parse_toml_value(item, line_no));
    }
    return arr;
  }
  std::string digits;
  for (char c : v) {
    if (c != '_') digits.push_back(c);
  }
  const bool integral = digits.find_first_of(".eE") == std::string::npos && digits != "inf" && digits != "nan";
  if (integral) {
    long long n = 0;
    const char* end = digits.data() + digits.size();
    const char* begin = digits.data() + (digits.front() == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(begin, end, n);
    if (ec == std::errc() && ptr == end) return n;
    return bad("cannot parse value '" + v + "'");
  }
  double d = 0.0;
  const char* end = digits.data() + digits.size();
  const char* begin = digits.data() + (digits.front() == '+' ? 1 : 0);
  auto [ptr, ec] = std::from_chars(begin, end, d);
  if (ec == std::errc() && ptr == end) return d;
  return bad("cannot parse value '" + v + "'");
}

std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const RadialField& field) {
  std::ostringstream os;
  os << "r";
  for (std::size_t k = 0; k < field.components(); ++k) os << ",w_" << (k + 1);
  os << '\n';
  const auto& r = field.grid().nodes();
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    os << format_double(r(i));
    for (Eigen::Index k = 0; k < field.values().cols(); ++k) os << ',' << format_double(field.values()(i, k));
    os << '\n';
  }
  write_text(path, os.str());
}

RadialField read_field_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  const std::string where = path.string();
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, where + ": empty file");
  const auto header = split(line, ',');
  if (header.size() < 2 || header.front() != "r") fail(ErrorKind::io, where + ": expected header 'r,w_1,...'");
  const std::size_t m = header.size() - 1;
  std::vector<double> r;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      fail(ErrorKind::io, where + ": row " + std::to_string(rows.size() + 2) + " has " +
                              std::to_string(cells.size()) + " columns");
    }
    r.push_back(parse_double(cells[0], where));
    std::vector<double> row;
    for (std::size_t k = 1; k < cells.size(); ++k) row.push_back(parse_double(cells[k], where));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < m; ++k) values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return field_on_nodes(r, std::move(values), where);
}

nlohmann::json field_to_json(const RadialField& field) {
  nlohmann::json values = nlohmann::json::array();
  for (Eigen::Index i = 0; i < field.values().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < field.values().cols(); ++k) row.push_back(field.values()(i, k));
    values.push_back(std::move(row));
  }
  return {{"n", field.size()}, {"r_max", field.grid().r_max()}, {"m", field.components()}, {"values", std::move(values)}};
}

RadialField field_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto r_max = j.at("r_max").get<double>();
    const auto& rows = j.at("values");
    if (rows.size() != n) fail(ErrorKind::io, "field JSON: values has " + std::to_string(rows.size()) + " rows, n = " + std::to_string(n));
    const std::size_t m = j.contains("m") ? j.at("m").get<std::size_t>() : rows.at(0).size();
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != m) fail(ErrorKind::io, "field JSON: ragged values at row " + std::to_string(i));
      for (std::size_t k = 0; k < m; ++k) values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k].get<double>();
    }
    return RadialField(RadialGrid::build(n, r_max), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, std::string("field JSON: ") + e.what());
  }
}

nlohmann::json parse_toml(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json::json_pointer table;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) fail(ErrorKind::config, "TOML line " + std::to_string(line_no) + ": bad table header");
      table = nlohmann::json::json_pointer();
      for (const auto& part : split(line.substr(1, line.size() - 2), '.')) {
        if (part.empty()) fail(ErrorKind::config, "TOML line " + std::to_string(line_no) + ": empty table name");
        table /= part;
      }
      if (!root.contains(table)) root[table] = nlohmann::json::object();
      if (!root[table].is_object()) fail(ErrorKind::config, "TOML line " + std::to_string(line_no) + ": table redefines a value");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::config, "TOML line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (key.empty()) fail(ErrorKind::config, "TOML line " + std::to_string(line_no) + ": empty key");
    nlohmann::json& target = root[table];
    if (target.contains(key)) fail(ErrorKind::config, "TOML line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    target[key] = parse_toml_value(line.substr(eq + 1), line_no);
  }
  return root;
}

nlohmann::json load_config_file(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".toml") return parse_toml(text);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::config, path.string() + ": " + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::io, "SHA-256 digest failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

}  // namespace bhgs::io
