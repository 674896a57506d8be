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

#ifndef UNLEARN_AUDIT_TABULAR_IO_H_
#define UNLEARN_AUDIT_TABULAR_IO_H_

#include <filesystem>
#include <optional>
#include <string_view>

#include "unlearn_audit/dataset.h"

namespace unlearn_audit {

// On-disk dataset layouts.
//
// kCsvLabeled: comma-separated decimal features followed by an integer label
// column. A first row containing any non-numeric field is treated as a
// header.
//
// kBinaryF32: little-endian; magic "UAD1", u32 n, u32 d, u32 C, then n*d
// float32 features in row-major order, then n uint32 labels.
enum class TabularFormat { kCsvLabeled, kBinaryF32 };

std::optional<TabularFormat> ParseTabularFormat(std::string_view name);
std::string_view TabularFormatName(TabularFormat format);

// Row order is preserved. For CSV, num_classes = 1 + max label; for the
// binary layout it is taken from the header.
Dataset LoadTabular(const std::filesystem::path& path, TabularFormat format);

// CSV features are written with 9 significant digits; binary features are
// narrowed to float32.
void SaveTabular(const Dataset& dataset, const std::filesystem::path& path,
                 TabularFormat format);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_TABULAR_IO_H_
