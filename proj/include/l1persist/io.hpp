#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "l1persist/oracle.hpp"
#include "l1persist/risk.hpp"
#include "l1persist/solvers.hpp"

namespace l1persist {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Writes `contents` to a temporary sibling and renames it into place, so a
/// failed run never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// "d.csv" -> "d.meta.json".
std::filesystem::path meta_path_for(const std::filesystem::path& csv_path);

/// Header `y,x1,...,xm`, one row per observation.
std::string dataset_to_csv(const Dataset& d);
/// {scenario, seed, params, relevant_range, proxy_range}; ranges are
/// 1-based inclusive [first, last] or null.
nlohmann::json meta_to_json(const DatasetMeta& meta);
DatasetMeta meta_from_json(const nlohmann::json& j);

/// Parses the CSV produced by dataset_to_csv. Throws std::runtime_error.
Dataset dataset_from_csv(const std::string& text, DatasetMeta meta = {});

/// Writes the CSV and its meta sidecar.
void write_dataset(const std::filesystem::path& csv_path, const Dataset& d);
/// Reads the CSV and, when present, its meta sidecar.
Dataset read_dataset(const std::filesystem::path& csv_path);

/// {m, nonzeros: [[index, value], ...], l1, l2, support}, indices 1-based.
nlohmann::json coefficients_to_json(const Coefficients& beta);
Coefficients coefficients_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const SolveReport& report);

/// {subset, beta: nonzeros, risk}, indices 1-based.
nlohmann::json subset_solution_to_json(const SubsetSolution& s);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace l1persist
