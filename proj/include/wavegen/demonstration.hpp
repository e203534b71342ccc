#ifndef WAVEGEN_DEMONSTRATION_HPP
#define WAVEGEN_DEMONSTRATION_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavegen {

/// One recorded multi-joint trajectory with a uniform sampling interval.
/// Rows are samples, columns are joints; angles are in radians.
struct Demonstration {
  Eigen::MatrixXd samples;  // T x D
  double dt = 0.0;          // seconds, > 0
  std::string name;

  int length() const { return static_cast<int>(samples.rows()); }
  int dofs() const { return static_cast<int>(samples.cols()); }
  double duration() const { return static_cast<double>(samples.rows()) * dt; }
};

/// An ordered collection of demonstrations sharing a joint count.
struct Dataset {
  std::vector<Demonstration> demos;
  int dofs = 0;

  int size() const { return static_cast<int>(demos.size()); }
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline bool parse_double(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

inline std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline void validate(const Demonstration& demo, const std::string& context) {
  if (demo.length() < 2)
    throw std::runtime_error(context + ": need at least 2 samples, got " +
                             std::to_string(demo.length()));
  if (demo.dofs() < 1)
    throw std::runtime_error(context + ": need at least 1 joint column");
  if (!(demo.dt > 0.0) || !std::isfinite(demo.dt))
    throw std::runtime_error(context + ": dt must be a positive finite number");
  if (!demo.samples.allFinite())
    throw std::runtime_error(context + ": samples contain non-finite values");
}

/// Parse a demonstration file.
///
/// Format: line 1 is `# dt=<seconds>`, an optional `# name=<string>` line,
/// then one comma-separated row of D joint angles per line.
inline Demonstration load_demo(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open demonstration file: " + path.string());

  Demonstration demo;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path.string() + ": empty file, expected `# dt=` header");
  line = detail::strip(line);
  if (line.rfind("# dt=", 0) != 0)
    throw std::runtime_error(path.string() +
                             ": line 1 must start with `# dt=`, got: " + line);
  if (!detail::parse_double(line.substr(5), demo.dt))
    throw std::runtime_error(path.string() + ": malformed dt value: " + line.substr(5));
  if (!(demo.dt > 0.0) || !std::isfinite(demo.dt))
    throw std::runtime_error(path.string() + ": dt must be > 0, got " + line.substr(5));

  std::vector<std::vector<double>> rows;
  int cols = -1;
  int row_index = 0;  // 1-based index of the current data row
  while (std::getline(in, line)) {
    std::string body = detail::strip(line);
    if (body.empty()) continue;
    if (body.rfind("# name=", 0) == 0) {
      if (row_index != 0)
        throw std::runtime_error(path.string() + ": name header after data rows");
      demo.name = body.substr(7);
      continue;
    }
    if (body[0] == '#')
      throw std::runtime_error(path.string() + ": unknown header line: " + body);

    ++row_index;
    std::vector<double> values;
    std::stringstream ss(body);
    std::string token;
    int col = 0;
    while (std::getline(ss, token, ',')) {
      ++col;
      double v = 0.0;
      if (!detail::parse_double(detail::strip(token), v))
        throw std::runtime_error(path.string() + ": row " + std::to_string(row_index) +
                                 ", column " + std::to_string(col) +
                                 ": not a number: " + detail::strip(token));
      if (!std::isfinite(v))
        throw std::runtime_error(path.string() + ": row " + std::to_string(row_index) +
                                 ", column " + std::to_string(col) +
                                 ": non-finite value");
      values.push_back(v);
    }
    if (cols < 0) {
      cols = col;
    } else if (col != cols) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(row_index) +
                               " has " + std::to_string(col) + " fields, expected " +
                               std::to_string(cols));
    }
    rows.push_back(std::move(values));
  }

  if (rows.size() < 2)
    throw std::runtime_error(path.string() + ": need at least 2 sample rows, got " +
                             std::to_string(rows.size()));

  demo.samples.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < cols; ++c)
      demo.samples(static_cast<Eigen::Index>(r), c) = rows[r][c];

  validate(demo, path.string());
  return demo;
}

/// Write a demonstration in the text format read by load_demo. Values are
/// printed at full precision so a round trip is bit-exact.
inline void save_demo(const Demonstration& demo, const std::filesystem::path& path) {
  validate(demo, "save_demo");
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  out << "# dt=" << detail::format_double(demo.dt) << "\n";
  if (!demo.name.empty()) out << "# name=" << demo.name << "\n";
  for (Eigen::Index r = 0; r < demo.samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < demo.samples.cols(); ++c) {
      if (c > 0) out << ",";
      out << detail::format_double(demo.samples(r, c));
    }
    out << "\n";
  }
  if (!out)
    throw std::runtime_error("write failed: " + path.string());
}

/// Load every `*.csv` demonstration in a directory, sorted by filename.
inline Dataset load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("not a directory: " + dir.string());

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });

  if (files.empty())
    throw std::runtime_error("no demonstration files (*.csv) in " + dir.string());

  Dataset data;
  for (const auto& file : files) {
    Demonstration demo = load_demo(file);
    if (data.demos.empty()) {
      data.dofs = demo.dofs();
    } else if (demo.dofs() != data.dofs) {
      throw std::runtime_error("joint count mismatch: " + files.front().string() +
                               " has " + std::to_string(data.dofs) + " columns, " +
                               file.string() + " has " + std::to_string(demo.dofs()));
    }
    data.demos.push_back(std::move(demo));
  }
  return data;
}

}  // namespace wavegen

#endif  // WAVEGEN_DEMONSTRATION_HPP
