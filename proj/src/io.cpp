#include "dpvmf/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dpvmf/sphere.hpp"

namespace dpvmf {

namespace {

constexpr char kBinaryMagic[8] = {'D', 'P', 'V', 'M', 'F', 'B', '0', '1'};

[[noreturn]] void parse_fail(const std::string& path, std::size_t row,
                             const std::string& what) {
  fail(ErrorCode::ParseError, path + ":" + std::to_string(row) + ": " + what);
}

Batch read_points_binary(std::ifstream& in, const std::string& path) {
  in.seekg(8);
  std::uint32_t dim = 0;
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || dim < 2 || count == 0)
    fail(ErrorCode::ParseError, path + ": bad binary point header");
  std::vector<float> raw(static_cast<std::size_t>(count) * dim);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!in) fail(ErrorCode::ParseError, path + ": truncated binary point file");
  Batch b;
  b.dim = dim;
  b.data.assign(raw.begin(), raw.end());
  return b;
}

}  // namespace

Batch read_points(const std::string& path, bool auto_normalize) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, path + ": cannot open");

  char magic[8] = {};
  in.read(magic, 8);
  Batch b;
  if (in.gcount() == 8 && std::memcmp(magic, kBinaryMagic, 8) == 0) {
    b = read_points_binary(in, path);
  } else {
    in.clear();
    in.seekg(0);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::vector<double> vals;
      double v;
      while (ls >> v) vals.push_back(v);
      if (!ls.eof()) parse_fail(path, row, "non-numeric field");
      if (vals.empty()) continue;
      if (b.dim == 0) {
        if (vals.size() < 2) parse_fail(path, row, "dimension must be >= 2");
        b.dim = vals.size();
      } else if (vals.size() != b.dim) {
        parse_fail(path, row, "expected " + std::to_string(b.dim) + " fields");
      }
      b.data.insert(b.data.end(), vals.begin(), vals.end());
    }
    if (b.data.empty()) fail(ErrorCode::ParseError, path + ": no points");
  }

  for (std::size_t i = 0; i < b.size(); ++i) {
    double n = norm2(b.row(i), b.dim);
    if (auto_normalize) {
      if (n <= kNormEps)
        fail(ErrorCode::DegenerateVector,
             path + ": near-zero row " + std::to_string(i + 1));
      for (std::size_t j = 0; j < b.dim; ++j) b.row(i)[j] /= n;
    } else if (std::abs(n - 1.0) > 1e-6) {
      fail(ErrorCode::NormViolation,
           path + ": row " + std::to_string(i + 1) + " is not unit-norm");
    }
  }
  return b;
}

std::string format_double(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

void write_points_text(const std::string& path, const Batch& batch) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ParseError, path + ": cannot open for writing");
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double* r = batch.row(i);
    for (std::size_t j = 0; j < batch.dim; ++j) {
      if (j) out << ' ';
      out << format_double(r[j]);
    }
    out << '\n';
  }
}

void write_points_binary(const std::string& path, const Batch& batch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ParseError, path + ": cannot open for writing");
  out.write(kBinaryMagic, 8);
  std::uint32_t dim = static_cast<std::uint32_t>(batch.dim);
  std::uint64_t count = batch.size();
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  std::vector<float> raw(batch.data.begin(), batch.data.end());
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
}

std::vector<long> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, path + ": cannot open");
  std::vector<long> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long v;
    while (ls >> v) out.push_back(v);
    if (!ls.eof()) parse_fail(path, row, "non-integer label");
  }
  return out;
}

void write_labels(const std::string& path, const long* labels, std::size_t n) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ParseError, path + ": cannot open for writing");
  for (std::size_t i = 0; i < n; ++i) out << labels[i] << '\n';
}

void write_labels(const std::string& path, const int* labels, std::size_t n) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ParseError, path + ": cannot open for writing");
  for (std::size_t i = 0; i < n; ++i) out << labels[i] << '\n';
}

StreamScenario read_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, path + ": cannot open");
  StreamScenario sc;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "seed") {
      if (!(ls >> sc.seed)) parse_fail(path, row, "seed needs an integer");
    } else if (key == "dim") {
      if (!(ls >> sc.dim)) parse_fail(path, row, "dim needs an integer");
    } else if (key == "tau") {
      if (!(ls >> sc.tau)) parse_fail(path, row, "tau needs a number");
    } else if (key == "min_sep_deg") {
      double deg;
      if (!(ls >> deg)) parse_fail(path, row, "min_sep_deg needs a number");
      sc.min_separation = deg * kPi / 180.0;
    } else if (key == "points_per_cluster") {
      if (!(ls >> sc.points_per_cluster))
        parse_fail(path, row, "points_per_cluster needs an integer");
    } else if (key == "pool") {
      if (!(ls >> sc.pool)) parse_fail(path, row, "pool needs an integer");
    } else if (key == "mean") {
      std::vector<double> m;
      double v;
      while (ls >> v) m.push_back(v);
      if (m.size() != sc.dim)
        parse_fail(path, row, "mean needs exactly dim coordinates");
      auto unit = normalize(m);
      sc.explicit_means.insert(sc.explicit_means.end(), unit.begin(), unit.end());
    } else if (key == "frame") {
      std::vector<int> ids;
      int id;
      while (ls >> id) ids.push_back(id);
      if (ids.empty()) parse_fail(path, row, "frame needs cluster ids");
      sc.frames.push_back(std::move(ids));
    } else {
      parse_fail(path, row, "unknown key '" + key + "'");
    }
  }
  sc.validate();
  return sc;
}

void write_summary(const std::string& path, const Summary& summary) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ParseError, path + ": cannot open for writing");
  for (const auto& [k, v] : summary) out << k << ": " << v << '\n';
}

Summary read_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, path + ": cannot open");
  Summary out;
  std::string line;
  while (std::getline(in, line)) {
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    out.emplace_back(line.substr(0, colon), line.substr(colon + 2));
  }
  return out;
}

}  // namespace dpvmf
