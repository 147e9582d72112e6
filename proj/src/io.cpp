#include "l1persist/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace l1persist {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dataset_to_csv(const Dataset& d) {
  std::string out = "y";
  for (std::size_t j = 1; j <= d.m(); ++j) out += ",x" + std::to_string(j);
  out += '\n';
  for (Eigen::Index i = 0; i < d.x().rows(); ++i) {
    out += format_double(d.y()[i]);
    for (Eigen::Index j = 0; j < d.x().cols(); ++j) {
      out += ',';
      out += format_double(d.x()(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json range_to_json(const std::optional<ColumnRange>& r) {
  if (!r || r->size() == 0) return nullptr;
  return nlohmann::json::array({r->begin + 1, r->end});
}

std::optional<ColumnRange> range_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  const auto first = j.at(0).get<std::size_t>();
  const auto last = j.at(1).get<std::size_t>();
  if (first < 1 || last < first) throw std::runtime_error("invalid column range in meta");
  return ColumnRange{first - 1, last};
}

double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::runtime_error("line " + std::to_string(line) + ": bad number '" +
                             std::string(field) + "'");
  }
  return v;
}

}  // namespace

nlohmann::json meta_to_json(const DatasetMeta& meta) {
  return {{"scenario", meta.scenario},
          {"seed", meta.seed},
          {"params", meta.params},
          {"relevant_range", range_to_json(meta.relevant)},
          {"proxy_range", range_to_json(meta.proxy)}};
}

DatasetMeta meta_from_json(const nlohmann::json& j) {
  DatasetMeta meta;
  meta.scenario = j.value("scenario", std::string{});
  meta.seed = j.value("seed", std::uint64_t{0});
  meta.params = j.value("params", nlohmann::json::object());
  if (j.contains("relevant_range")) meta.relevant = range_from_json(j.at("relevant_range"));
  if (j.contains("proxy_range")) meta.proxy = range_from_json(j.at("proxy_range"));
  return meta;
}

Dataset dataset_from_csv(const std::string& text, DatasetMeta meta) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t cols = 1;
  for (char c : line) cols += c == ',';
  if (line.rfind("y", 0) != 0) throw std::runtime_error("dataset header must start with 'y'");
  const std::size_t m = cols - 1;

  std::vector<double> values;
  std::size_t n = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t fields = 0;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      const auto end = comma == std::string::npos ? line.size() : comma;
      values.push_back(parse_double(std::string_view(line).substr(start, end - start), line_no));
      ++fields;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields != cols) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(cols) + " fields, got " + std::to_string(fields));
    }
    ++n;
  }
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  Vector y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    y[static_cast<Eigen::Index>(i)] = values[i * cols];
    for (std::size_t j = 0; j < m; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + 1 + j];
    }
  }
  try {
    return Dataset(std::move(x), std::move(y), std::move(meta));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
}

void write_dataset(const std::filesystem::path& csv_path, const Dataset& d) {
  write_file_atomic(csv_path, dataset_to_csv(d));
  write_file_atomic(meta_path_for(csv_path), meta_to_json(d.meta()).dump(2) + "\n");
}

Dataset read_dataset(const std::filesystem::path& csv_path) {
  DatasetMeta meta;
  const auto mp = meta_path_for(csv_path);
  if (std::filesystem::exists(mp)) meta = meta_from_json(nlohmann::json::parse(read_text_file(mp)));
  return dataset_from_csv(read_text_file(csv_path), std::move(meta));
}

nlohmann::json coefficients_to_json(const Coefficients& beta) {
  nlohmann::json nz = nlohmann::json::array();
  for (const auto& [j, v] : beta.nonzeros()) nz.push_back({j + 1, v});
  return {{"m", beta.m()},
          {"nonzeros", nz},
          {"l1", beta.l1_norm()},
          {"l2", beta.l2_norm()},
          {"support", beta.support()}};
}

Coefficients coefficients_from_json(const nlohmann::json& j) {
  const auto m = j.at("m").get<std::size_t>();
  std::vector<std::pair<std::size_t, double>> nz;
  for (const auto& e : j.at("nonzeros")) {
    const auto index = e.at(0).get<std::size_t>();
    if (index < 1) throw std::runtime_error("coefficient indices are 1-based");
    nz.emplace_back(index - 1, e.at(1).get<double>());
  }
  return Coefficients::from_nonzeros(m, nz);
}

nlohmann::json report_to_json(const SolveReport& r) {
  return {{"iterations", r.iterations},     {"objective", r.objective},
          {"kkt_residual", r.kkt_residual}, {"converged", r.converged},
          {"diverged", r.diverged},         {"step_rejections", r.step_rejections},
          {"final_step", r.final_step}};
}

nlohmann::json subset_solution_to_json(const SubsetSolution& s) {
  nlohmann::json subset = nlohmann::json::array();
  for (auto j : s.subset) subset.push_back(j + 1);
  nlohmann::json nz = nlohmann::json::array();
  for (const auto& [j, v] : s.beta.nonzeros()) nz.push_back({j + 1, v});
  return {{"subset", subset}, {"beta", nz}, {"risk", s.risk}, {"unbounded", s.unbounded}};
}

}  // namespace l1persist
