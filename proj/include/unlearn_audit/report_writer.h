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

#ifndef UNLEARN_AUDIT_REPORT_WRITER_H_
#define UNLEARN_AUDIT_REPORT_WRITER_H_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "unlearn_audit/harness.h"
#include "unlearn_audit/train.h"
#include "unlearn_audit/unlearn.h"

#include "json.hpp"

namespace unlearn_audit {

enum class ReportFormat { kCsv, kJson, kSvg };

using ReportFormats = std::set<ReportFormat>;

ReportFormats AllReportFormats();
// "csv,json,svg" style list. Throws kConfig on unknown names.
ReportFormats ParseReportFormats(std::string_view list);

inline constexpr std::string_view kMetricsCsvHeader =
    "epoch,train_acc,val_acc,test_acc,forget_acc,retain_acc,mia_forget_acc,"
    "mia_retain_acc,adversary_success";

// %.9g, with "nan" for missing values.
std::string FormatReal(double value);

// Header plus one row per trace entry.
std::string FormatMetricsCsv(const UnlearnTrace& trace);
// Per-epoch training curve: epoch,train_acc,val_acc,test_acc,mean_loss.
std::string FormatTrainingCsv(const std::vector<EpochMetrics>& history);

nlohmann::json ReportToJson(const ExperimentReport& report,
                            bool include_timings = true);
ExperimentReport ReportFromJson(const nlohmann::json& json);
nlohmann::json SweepToJson(const SweepReport& sweep,
                           bool include_timings = true);

// Two panels: model accuracies and MIA accuracies per epoch, with the
// pre-unlearning baseline drawn at epoch 0.
std::string RenderCurvesSvg(const ExperimentReport& report);

// Writes `contents` to a temporary sibling and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

// Emits metrics.csv, report.json and/or curves.svg into `out_dir`, creating
// it if needed. On failure every file written by this call is removed.
// Returns the written paths in a fixed order (csv, json, svg).
std::vector<std::filesystem::path> WriteReport(
    const ExperimentReport& report, const std::filesystem::path& out_dir,
    const ReportFormats& formats);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_REPORT_WRITER_H_
