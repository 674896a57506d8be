//
// Copyright 2026 The Unlearn Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "unlearn_audit/tabular_io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "unlearn_audit/error.h"

namespace unlearn_audit {
namespace {

constexpr std::array<char, 4> kMagic = {'U', 'A', 'D', '1'};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      break;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool ParseReal(std::string_view field, double& out) {
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

// Labels outside [0, 2^31) are label errors; anything non-integral is a
// parse error.
bool ParseLabel(std::string_view field, long long& out) {
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec == std::errc::result_out_of_range) {
    out = std::numeric_limits<long long>::max();
    return true;
  }
  return ec == std::errc() && ptr == field.data() + field.size();
}

Dataset LoadCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  Dataset dataset;
  dataset.name = path.stem().string();
  std::vector<double> values;
  std::size_t columns = 0;
  std::string line;
  std::size_t line_number = 0;
  bool first_content_line = true;
  long long max_label = -1;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    const std::vector<std::string_view> fields = SplitFields(line);
    if (first_content_line) {
      first_content_line = false;
      const bool all_numeric =
          std::all_of(fields.begin(), fields.end(), [](std::string_view f) {
            double unused;
            return ParseReal(f, unused);
          });
      if (!all_numeric) {
        columns = fields.size();
        continue;
      }
    }
    if (columns == 0) columns = fields.size();
    if (columns < 2) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(line_number) +
                      ": need at least one feature column and a label");
    }
    if (fields.size() != columns) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(line_number) +
                      ": expected " + std::to_string(columns) +
                      " columns, got " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c + 1 < columns; ++c) {
      double v;
      if (!ParseReal(fields[c], v)) {
        throw Error(ErrorCode::kParse,
                    path.string() + ":" + std::to_string(line_number) +
                        ": non-numeric field '" + std::string(fields[c]) +
                        "' in column " + std::to_string(c + 1));
      }
      values.push_back(v);
    }
    long long label;
    if (!ParseLabel(fields.back(), label)) {
      throw Error(ErrorCode::kParse,
                  path.string() + ":" + std::to_string(line_number) +
                      ": label '" + std::string(fields.back()) +
                      "' is not an integer");
    }
    if (label < 0 || label > std::numeric_limits<std::int32_t>::max()) {
      throw Error(ErrorCode::kLabel,
                  path.string() + ":" + std::to_string(line_number) +
                      ": label " + std::string(fields.back()) +
                      " outside [0, 2^31)");
    }
    max_label = std::max(max_label, label);
    dataset.labels.push_back(static_cast<int>(label));
  }
  if (dataset.labels.empty()) {
    throw Error(ErrorCode::kParse, path.string() + ": no data rows");
  }
  const auto n = static_cast<Eigen::Index>(dataset.labels.size());
  const auto d = static_cast<Eigen::Index>(columns - 1);
  dataset.features = Eigen::Map<const Matrix>(values.data(), n, d);
  dataset.num_classes = static_cast<int>(max_label + 1);
  dataset.Validate();
  return dataset;
}

std::uint32_t ReadU32(std::istream& in, const std::filesystem::path& path,
                      const char* what) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw Error(ErrorCode::kParse,
                path.string() + ": truncated while reading " + what);
  }
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void WriteU32(std::ostream& out, std::uint32_t v) {
  const std::array<unsigned char, 4> b = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

Dataset LoadBinary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic) {
    throw Error(ErrorCode::kParse, path.string() + ": bad magic, want UAD1");
  }
  const std::uint32_t n = ReadU32(in, path, "row count");
  const std::uint32_t d = ReadU32(in, path, "feature count");
  const std::uint32_t c = ReadU32(in, path, "class count");
  if (n == 0 || d == 0 || c == 0) {
    throw Error(ErrorCode::kParse, path.string() + ": zero-sized header");
  }
  Dataset dataset;
  dataset.name = path.stem().string();
  dataset.features.resize(n, d);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) {
      const std::uint32_t bits = ReadU32(in, path, "features");
      dataset.features(i, j) = static_cast<double>(std::bit_cast<float>(bits));
    }
  }
  dataset.labels.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t label = ReadU32(in, path, "labels");
    if (label >= c || label > std::numeric_limits<std::int32_t>::max()) {
      throw Error(ErrorCode::kLabel, path.string() + ": row " +
                                         std::to_string(i) + " label " +
                                         std::to_string(label) +
                                         " outside [0, " + std::to_string(c) +
                                         ")");
    }
    dataset.labels[i] = static_cast<int>(label);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kParse, path.string() + ": trailing bytes");
  }
  dataset.num_classes = static_cast<int>(c);
  dataset.Validate();
  return dataset;
}

void SaveCsv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (int j = 0; j < dataset.feature_dim(); ++j) out << 'f' << j << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (int j = 0; j < dataset.feature_dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g",
                    dataset.features(static_cast<Eigen::Index>(i), j));
      out << buf << ',';
    }
    out << dataset.labels[i] << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void SaveBinary(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kMagic.data(), 4);
  WriteU32(out, static_cast<std::uint32_t>(dataset.size()));
  WriteU32(out, static_cast<std::uint32_t>(dataset.feature_dim()));
  WriteU32(out, static_cast<std::uint32_t>(dataset.num_classes));
  for (Eigen::Index i = 0; i < dataset.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < dataset.features.cols(); ++j) {
      WriteU32(out, std::bit_cast<std::uint32_t>(
                        static_cast<float>(dataset.features(i, j))));
    }
  }
  for (int label : dataset.labels) {
    WriteU32(out, static_cast<std::uint32_t>(label));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace

std::optional<TabularFormat> ParseTabularFormat(std::string_view name) {
  if (name == "csv_labeled" || name == "csv") return TabularFormat::kCsvLabeled;
  if (name == "binary_f32" || name == "bin") return TabularFormat::kBinaryF32;
  return std::nullopt;
}

std::string_view TabularFormatName(TabularFormat format) {
  return format == TabularFormat::kCsvLabeled ? "csv_labeled" : "binary_f32";
}

Dataset LoadTabular(const std::filesystem::path& path, TabularFormat format) {
  return format == TabularFormat::kCsvLabeled ? LoadCsv(path)
                                              : LoadBinary(path);
}

void SaveTabular(const Dataset& dataset, const std::filesystem::path& path,
                 TabularFormat format) {
  dataset.Validate();
  if (format == TabularFormat::kCsvLabeled) {
    SaveCsv(dataset, path);
  } else {
    SaveBinary(dataset, path);
  }
}

}  // namespace unlearn_audit
