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

#include "unlearn_audit/report_writer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>

#include "unlearn_audit/error.h"

namespace unlearn_audit {
namespace {

using nlohmann::json;

json Real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double ReadReal(const json& j, const char* key) {
  const json& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                     : v.get<double>();
}

json MetricsToJson(const EpochMetrics& m) {
  return {{"epoch", m.epoch},           {"train_acc", Real(m.train_acc)},
          {"val_acc", Real(m.val_acc)}, {"test_acc", Real(m.test_acc)},
          {"forget_acc", Real(m.forget_acc)},
          {"retain_acc", Real(m.retain_acc)},
          {"mean_loss", Real(m.mean_loss)}};
}

EpochMetrics MetricsFromJson(const json& j) {
  EpochMetrics m;
  m.epoch = j.at("epoch").get<int>();
  m.train_acc = ReadReal(j, "train_acc");
  m.val_acc = ReadReal(j, "val_acc");
  m.test_acc = ReadReal(j, "test_acc");
  m.forget_acc = ReadReal(j, "forget_acc");
  m.retain_acc = ReadReal(j, "retain_acc");
  m.mean_loss = ReadReal(j, "mean_loss");
  return m;
}

json AttackToJson(const AttackReport& r) {
  return {{"mia_forget_acc", Real(r.mia_forget_acc)},
          {"mia_retain_acc", Real(r.mia_retain_acc)},
          {"adversary_success", Real(r.adversary_success)},
          {"forget_pairs", r.forget_pairs},
          {"retain_pairs", r.retain_pairs},
          {"success_pairs", r.success_pairs}};
}

AttackReport AttackFromJson(const json& j) {
  AttackReport r;
  r.mia_forget_acc = ReadReal(j, "mia_forget_acc");
  r.mia_retain_acc = ReadReal(j, "mia_retain_acc");
  r.adversary_success = ReadReal(j, "adversary_success");
  r.forget_pairs = j.at("forget_pairs").get<std::size_t>();
  r.retain_pairs = j.at("retain_pairs").get<std::size_t>();
  r.success_pairs = j.at("success_pairs").get<std::size_t>();
  return r;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Series {
  const char* name;
  const char* color;
  bool dashed;
  std::vector<double> values;  // index = epoch
};

// One line-chart panel with its top-left corner at (x0, y0).
void DrawPanel(std::ostringstream& svg, double x0, double y0,
               const std::string& title, const std::vector<Series>& series,
               int max_epoch) {
  constexpr double kWidth = 420.0;
  constexpr double kHeight = 280.0;
  const double span = std::max(1, max_epoch);
  auto px = [&](int epoch) { return x0 + kWidth * epoch / span; };
  auto py = [&](double v) { return y0 + kHeight * (1.0 - v); };

  svg << "<text x=\"" << Fixed(x0 + kWidth / 2) << "\" y=\""
      << Fixed(y0 - 12) << "\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";
  svg << "<rect x=\"" << Fixed(x0) << "\" y=\"" << Fixed(y0) << "\" width=\""
      << Fixed(kWidth) << "\" height=\"" << Fixed(kHeight)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = tick / 4.0;
    svg << "<line x1=\"" << Fixed(x0) << "\" y1=\"" << Fixed(py(v))
        << "\" x2=\"" << Fixed(x0 + kWidth) << "\" y2=\"" << Fixed(py(v))
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << Fixed(x0 - 6) << "\" y=\"" << Fixed(py(v) + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">" << Fixed(v)
        << "</text>\n";
  }
  svg << "<text x=\"" << Fixed(x0) << "\" y=\"" << Fixed(y0 + kHeight + 14)
      << "\" font-size=\"10\">0</text>\n";
  svg << "<text x=\"" << Fixed(x0 + kWidth) << "\" y=\""
      << Fixed(y0 + kHeight + 14) << "\" text-anchor=\"end\" font-size=\"10\">"
      << max_epoch << "</text>\n";
  svg << "<text x=\"" << Fixed(x0 + kWidth / 2) << "\" y=\""
      << Fixed(y0 + kHeight + 28)
      << "\" text-anchor=\"middle\" font-size=\"11\">epoch</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const Series& line = series[s];
    std::string points;
    for (std::size_t e = 0; e < line.values.size(); ++e) {
      if (!std::isfinite(line.values[e])) continue;
      if (!points.empty()) points += ' ';
      points += Fixed(px(static_cast<int>(e))) + "," +
                Fixed(py(std::clamp(line.values[e], 0.0, 1.0)));
    }
    svg << "<polyline fill=\"none\" stroke=\"" << line.color
        << "\" stroke-width=\"1.5\""
        << (line.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\""
        << points << "\"/>\n";
    const double ly = y0 + kHeight + 44 + 14.0 * static_cast<double>(s);
    svg << "<line x1=\"" << Fixed(x0) << "\" y1=\"" << Fixed(ly - 4)
        << "\" x2=\"" << Fixed(x0 + 20) << "\" y2=\"" << Fixed(ly - 4)
        << "\" stroke=\"" << line.color << "\""
        << (line.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    svg << "<text x=\"" << Fixed(x0 + 26) << "\" y=\"" << Fixed(ly)
        << "\" font-size=\"11\">" << line.name << "</text>\n";
  }
}

}  // namespace

ReportFormats AllReportFormats() {
  return {ReportFormat::kCsv, ReportFormat::kJson, ReportFormat::kSvg};
}

ReportFormats ParseReportFormats(std::string_view list) {
  ReportFormats out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const std::string_view name = list.substr(start, end - start);
    if (name == "csv") {
      out.insert(ReportFormat::kCsv);
    } else if (name == "json") {
      out.insert(ReportFormat::kJson);
    } else if (name == "svg") {
      out.insert(ReportFormat::kSvg);
    } else {
      throw Error(ErrorCode::kConfig,
                  "unknown report format '" + std::string(name) + "'");
    }
    start = end + 1;
  }
  return out;
}

std::string FormatReal(double value) {
  if (!std::isfinite(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string FormatMetricsCsv(const UnlearnTrace& trace) {
  std::string out(kMetricsCsvHeader);
  out += '\n';
  for (const TraceEntry& e : trace.entries) {
    const EpochMetrics& m = e.metrics;
    out += std::to_string(m.epoch);
    for (double v : {m.train_acc, m.val_acc, m.test_acc, m.forget_acc,
                     m.retain_acc, e.attack.mia_forget_acc,
                     e.attack.mia_retain_acc, e.attack.adversary_success}) {
      out += ',';
      out += FormatReal(v);
    }
    out += '\n';
  }
  return out;
}

std::string FormatTrainingCsv(const std::vector<EpochMetrics>& history) {
  std::string out = "epoch,train_acc,val_acc,test_acc,mean_loss\n";
  for (const EpochMetrics& m : history) {
    out += std::to_string(m.epoch);
    for (double v : {m.train_acc, m.val_acc, m.test_acc, m.mean_loss}) {
      out += ',';
      out += FormatReal(v);
    }
    out += '\n';
  }
  return out;
}

json ReportToJson(const ExperimentReport& report, bool include_timings) {
  json j;
  j["config"] = report.config;
  j["seed"] = report.seed;
  j["dataset_name"] = report.dataset_name;
  j["num_classes"] = report.num_classes;
  j["feature_dim"] = report.feature_dim;
  j["completed_stage"] = report.completed_stage;
  j["sizes"] = {{"target_train", report.sizes.target_train},
                {"shadow_pool", report.sizes.shadow_pool},
                {"test", report.sizes.test},
                {"validation", report.sizes.validation},
                {"retain", report.sizes.retain},
                {"forget", report.sizes.forget}};

  json baseline;
  baseline["metrics"] = MetricsToJson(report.baseline.metrics);
  baseline["attack"] = AttackToJson(report.baseline.attack);
  baseline["target_history"] = json::array();
  for (const EpochMetrics& m : report.baseline.target_history) {
    baseline["target_history"].push_back(MetricsToJson(m));
  }
  baseline["shadows"] = json::array();
  for (const ShadowSummary& s : report.baseline.shadows) {
    baseline["shadows"].push_back({{"members", s.members},
                                   {"nonmembers", s.nonmembers},
                                   {"member_acc", Real(s.member_acc)},
                                   {"nonmember_acc", Real(s.nonmember_acc)}});
  }
  baseline["attack_records"] = report.baseline.attack_records;
  j["baseline"] = std::move(baseline);

  json trace;
  trace["method"] = report.trace.method;
  trace["learning_rate"] = Real(report.trace.learning_rate);
  trace["epochs_run"] = report.trace.epochs_run;
  trace["entries"] = json::array();
  for (const TraceEntry& e : report.trace.entries) {
    trace["entries"].push_back(
        {{"metrics", MetricsToJson(e.metrics)},
         {"attack", AttackToJson(e.attack)}});
  }
  j["trace"] = std::move(trace);

  if (include_timings) {
    json timings = json::array();
    for (const PhaseTiming& t : report.timings) {
      timings.push_back({{"phase", t.phase}, {"seconds", t.seconds}});
    }
    j["wall_clock_seconds"] = std::move(timings);
  }
  return j;
}

ExperimentReport ReportFromJson(const json& j) {
  try {
    ExperimentReport r;
    r.config = j.at("config").get<ConfigMap>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.dataset_name = j.at("dataset_name").get<std::string>();
    r.num_classes = j.at("num_classes").get<int>();
    r.feature_dim = j.at("feature_dim").get<int>();
    r.completed_stage = j.at("completed_stage").get<std::string>();
    const json& sizes = j.at("sizes");
    r.sizes.target_train = sizes.at("target_train").get<std::size_t>();
    r.sizes.shadow_pool = sizes.at("shadow_pool").get<std::size_t>();
    r.sizes.test = sizes.at("test").get<std::size_t>();
    r.sizes.validation = sizes.at("validation").get<std::size_t>();
    r.sizes.retain = sizes.at("retain").get<std::size_t>();
    r.sizes.forget = sizes.at("forget").get<std::size_t>();

    const json& baseline = j.at("baseline");
    r.baseline.metrics = MetricsFromJson(baseline.at("metrics"));
    r.baseline.attack = AttackFromJson(baseline.at("attack"));
    for (const json& m : baseline.at("target_history")) {
      r.baseline.target_history.push_back(MetricsFromJson(m));
    }
    for (const json& s : baseline.at("shadows")) {
      r.baseline.shadows.push_back(
          {s.at("members").get<std::size_t>(),
           s.at("nonmembers").get<std::size_t>(),
           ReadReal(s, "member_acc"), ReadReal(s, "nonmember_acc")});
    }
    r.baseline.attack_records =
        baseline.at("attack_records").get<std::size_t>();

    const json& trace = j.at("trace");
    r.trace.method = trace.at("method").get<std::string>();
    r.trace.learning_rate = ReadReal(trace, "learning_rate");
    r.trace.epochs_run = trace.at("epochs_run").get<int>();
    for (const json& e : trace.at("entries")) {
      r.trace.entries.push_back(
          {MetricsFromJson(e.at("metrics")), AttackFromJson(e.at("attack"))});
    }
    if (j.contains("wall_clock_seconds")) {
      for (const json& t : j.at("wall_clock_seconds")) {
        r.timings.push_back(
            {t.at("phase").get<std::string>(), t.at("seconds").get<double>()});
      }
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("report json: ") + e.what());
  }
}

json SweepToJson(const SweepReport& sweep, bool include_timings) {
  json entries = json::array();
  for (const SweepEntry& e : sweep.entries) {
    json entry = {{"learning_rate", e.learning_rate},
                  {"status", e.report ? "ok" : "failed"}};
    if (e.report) {
      entry["report"] = ReportToJson(*e.report, include_timings);
    } else {
      entry["error"] = e.error;
    }
    entries.push_back(std::move(entry));
  }
  return {{"entries", std::move(entries)}};
}

std::string RenderCurvesSvg(const ExperimentReport& report) {
  const int epochs = static_cast<int>(report.trace.entries.size());
  auto column = [&](auto baseline_value, auto entry_value) {
    std::vector<double> v;
    v.push_back(baseline_value);
    for (const TraceEntry& e : report.trace.entries) {
      v.push_back(entry_value(e));
    }
    return v;
  };
  const EpochMetrics& b = report.baseline.metrics;
  const AttackReport& ba = report.baseline.attack;
  const std::vector<Series> accuracy = {
      {"train", "#1f77b4", false,
       column(b.train_acc, [](const TraceEntry& e) { return e.metrics.train_acc; })},
      {"validation", "#2ca02c", false,
       column(b.val_acc, [](const TraceEntry& e) { return e.metrics.val_acc; })},
      {"test", "#9467bd", false,
       column(b.test_acc, [](const TraceEntry& e) { return e.metrics.test_acc; })},
      {"forget", "#d62728", false,
       column(b.forget_acc,
              [](const TraceEntry& e) { return e.metrics.forget_acc; })},
      {"retain", "#ff7f0e", true,
       column(b.retain_acc,
              [](const TraceEntry& e) { return e.metrics.retain_acc; })},
  };
  const std::vector<Series> mia = {
      {"MIA forget", "#1f77b4", false,
       column(ba.mia_forget_acc,
              [](const TraceEntry& e) { return e.attack.mia_forget_acc; })},
      {"MIA retain", "#ff7f0e", true,
       column(ba.mia_retain_acc,
              [](const TraceEntry& e) { return e.attack.mia_retain_acc; })},
      {"adversary success", "#7f7f7f", true,
       column(ba.adversary_success,
              [](const TraceEntry& e) { return e.attack.adversary_success; })},
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" "
         "height=\"460\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"1000\" height=\"460\" fill=\"white\"/>\n";
  svg << "<text x=\"500\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << report.dataset_name << " / " << report.trace.method << "</text>\n";
  DrawPanel(svg, 50, 50, "Model accuracy", accuracy, epochs);
  DrawPanel(svg, 550, 50, "MIA accuracy", mia, epochs);
  svg << "</svg>\n";
  return svg.str();
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move " + tmp.string() + " to " +
                                    path.string());
  }
}

std::vector<std::filesystem::path> WriteReport(
    const ExperimentReport& report, const std::filesystem::path& out_dir,
    const ReportFormats& formats) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " +
                                    ec.message());
  }
  std::vector<std::filesystem::path> written;
  try {
    if (formats.count(ReportFormat::kCsv)) {
      written.push_back(out_dir / "metrics.csv");
      WriteFileAtomic(written.back(), FormatMetricsCsv(report.trace));
    }
    if (formats.count(ReportFormat::kJson)) {
      written.push_back(out_dir / "report.json");
      WriteFileAtomic(written.back(), ReportToJson(report).dump(2) + "\n");
    }
    if (formats.count(ReportFormat::kSvg)) {
      written.push_back(out_dir / "curves.svg");
      WriteFileAtomic(written.back(), RenderCurvesSvg(report));
    }
  } catch (...) {
    for (const auto& path : written) std::filesystem::remove(path, ec);
    throw;
  }
  return written;
}

}  // namespace unlearn_audit
