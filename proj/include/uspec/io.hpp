#pragma once

#include <filesystem>
#include <string>

#include "uspec/core.hpp"

namespace uspec {

// csv: comma separated, '.' decimal point, optional non-numeric header row.
// f64_binary: u64 N, u64 d (little endian), then N*d little-endian doubles.
enum class DataFormat { csv, f64_binary };

/// ".bin" / ".f64" select the binary format, anything else is CSV.
DataFormat format_from_path(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, DataFormat format);
Dataset parse_csv(const std::string& text);

void save_dataset(const Dataset& data, const std::filesystem::path& path, DataFormat format);

/// One decimal label per line.
void save_labels(const Labeling& labeling, const std::filesystem::path& path);
Labeling load_labels(const std::filesystem::path& path);

}  // namespace uspec
