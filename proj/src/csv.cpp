#include "frailty/csv.hpp"

#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <vector>

namespace frailty {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_double(const std::string& tok, const char* what, int line, int row) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw CsvError("line " + std::to_string(line) + " (data row " + std::to_string(row) +
                       "): field '" + tok + "' is not numeric for " + what,
                   line, row);
  }
}

}  // namespace

ClusteredSurvivalData load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path + "'", 0, 0);

  std::string line;
  if (!std::getline(in, line)) throw CsvError("'" + path + "' is empty", 0, 0);
  const auto header = split_fields(line);
  if (header.size() < 3 || header[0] != "cluster" || header[1] != "time" || header[2] != "status")
    throw CsvError("header must start with cluster,time,status", 1, 0);
  const int p = static_cast<int>(header.size()) - 3;

  std::vector<std::string> labels;
  std::unordered_map<std::string, int> label_to_id;
  ClusteredSurvivalData d;
  std::vector<double> xflat;
  int lineno = 1, row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++row;
    const auto f = split_fields(line);
    if (static_cast<int>(f.size()) != p + 3)
      throw CsvError("line " + std::to_string(lineno) + " (data row " + std::to_string(row) +
                         "): expected " + std::to_string(p + 3) + " fields, got " +
                         std::to_string(f.size()),
                     lineno, row);
    auto [it, inserted] = label_to_id.try_emplace(f[0], static_cast<int>(labels.size()));
    if (inserted) labels.push_back(f[0]);
    d.cluster.push_back(it->second);

    const double t = parse_double(f[1], "time", lineno, row);
    if (!(t > 0.0))
      throw CsvError("line " + std::to_string(lineno) + " (data row " + std::to_string(row) +
                         "): time must be > 0, got " + f[1],
                     lineno, row);
    d.time.push_back(t);

    const double s = parse_double(f[2], "status", lineno, row);
    if (s != 0.0 && s != 1.0)
      throw CsvError("line " + std::to_string(lineno) + " (data row " + std::to_string(row) +
                         "): status must be 0 or 1, got " + f[2],
                     lineno, row);
    d.status.push_back(static_cast<std::uint8_t>(s));

    for (int j = 0; j < p; ++j) xflat.push_back(parse_double(f[3 + j], "covariate", lineno, row));
  }

  const int n = static_cast<int>(d.time.size());
  if (n == 0) throw CsvError("'" + path + "' has no data rows", lineno, 0);
  d.n_clusters = static_cast<int>(labels.size());
  if (d.n_clusters < 2) throw CsvError("fewer than 2 clusters in '" + path + "'", lineno, row);
  d.x.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) d.x(i, j) = xflat[static_cast<std::size_t>(i) * p + j];
  d.validate();
  return d;
}

void write_csv(const ClusteredSurvivalData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write '" + path + "'", 0, 0);
  out << "cluster,time,status";
  for (int j = 1; j <= data.p(); ++j) out << ",x" << j;
  out << "\n";
  char buf[40];
  for (int i = 0; i < data.n(); ++i) {
    out << data.cluster[i] << ',';
    std::snprintf(buf, sizeof buf, "%.17g", data.time[i]);
    out << buf << ',' << static_cast<int>(data.status[i]);
    for (int j = 0; j < data.p(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.x(i, j));
      out << ',' << buf;
    }
    out << "\n";
  }
}

}  // namespace frailty
