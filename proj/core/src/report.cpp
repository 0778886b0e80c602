#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "json_io.hpp"
#include "mwpx/error.hpp"
#include "mwpx/harness.hpp"

namespace mwpx {

using nlohmann::json;

namespace {

Category parse_category(const std::string& key) {
  auto c = category_from_string(key);
  if (!c) throw Error(ErrorCode::CorruptFile, "report: unknown category '" + key + "'");
  return *c;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json tallies_to_json(const std::map<Category, CategoryTally>& tallies) {
  json out = json::object();
  for (const auto& [c, t] : tallies) out[std::string(to_string(c))] = json{{"count", t.count}, {"correct", t.correct}};
  return out;
}

std::map<Category, CategoryTally> tallies_from_json(const json& j) {
  std::map<Category, CategoryTally> out;
  for (const auto& [key, value] : j.items())
    out[parse_category(key)] = {value.at("count").get<std::size_t>(), value.at("correct").get<std::size_t>()};
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  const auto& m = report.metadata;
  json counts = json::object();
  for (auto c : kAllCategories) counts[std::string(to_string(c))] = m.operation_counts[static_cast<std::size_t>(c)];
  json variants = json::array();
  for (const auto& v : report.variants) {
    variants.push_back(json{{"name", v.name},
                            {"label", v.label},
                            {"fold_accuracy", v.fold_accuracy},
                            {"mean_accuracy", v.mean_accuracy},
                            {"decrease", v.decrease},
                            {"per_operation", tallies_to_json(v.per_operation)}});
  }
  json j{{"metadata",
          {{"solver", config_to_json(m.solver)},
           {"folds", m.folds},
           {"seed", m.seed},
           {"dataset_hash", m.dataset_hash},
           {"dataset_size", m.dataset_size},
           {"operation_counts", counts},
           {"tagger", m.tagger},
           {"model_checksums", m.model_checksums}}},
         {"variants", variants}};
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(std::string_view json_text) {
  ExperimentReport r;
  try {
    auto j = json::parse(json_text);
    const auto& m = j.at("metadata");
    r.metadata.solver = config_from_json(m.at("solver"));
    r.metadata.folds = m.at("folds").get<std::size_t>();
    r.metadata.seed = m.at("seed").get<std::uint64_t>();
    r.metadata.dataset_hash = m.at("dataset_hash").get<std::string>();
    r.metadata.dataset_size = m.at("dataset_size").get<std::size_t>();
    for (const auto& [key, value] : m.at("operation_counts").items())
      r.metadata.operation_counts[static_cast<std::size_t>(parse_category(key))] = value.get<std::size_t>();
    r.metadata.tagger = m.value("tagger", std::string());
    r.metadata.model_checksums = m.value("model_checksums", std::vector<std::string>{});
    for (const auto& v : j.at("variants")) {
      VariantResult out;
      out.name = v.at("name").get<std::string>();
      out.label = v.at("label").get<std::string>();
      out.fold_accuracy = v.at("fold_accuracy").get<std::vector<double>>();
      out.mean_accuracy = v.at("mean_accuracy").get<double>();
      out.decrease = v.at("decrease").get<double>();
      out.per_operation = tallies_from_json(v.at("per_operation"));
      r.variants.push_back(std::move(out));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("report: ") + e.what());
  }
  return r;
}

std::string report_markdown(const ExperimentReport& report) {
  const auto& m = report.metadata;
  std::ostringstream out;
  out << "# Perturbation suite\n\n";
  out << "- dataset: " << m.dataset_size << " problems (hash " << m.dataset_hash << ")\n";
  out << "- folds: " << m.folds << ", seed: " << m.seed << "\n";
  out << "- solver: " << to_string(m.solver.cell) << ", " << m.solver.layers << " layer(s), hidden "
      << m.solver.hidden_dim << ", " << m.solver.epochs << " epochs\n\n";
  out << "| Perturbation | CV Accuracy | Decrease |\n";
  out << "|---|---|---|\n";
  for (const auto& v : report.variants) {
    out << "| " << v.label << " | " << fixed(v.mean_accuracy, 3) << " | "
        << (v.name == kOriginalVariant ? std::string("-") : fixed(v.decrease, 3)) << " |\n";
  }
  out << "\n## Per-operation accuracy\n\n| Perturbation |";
  for (auto c : kAllCategories) out << ' ' << to_string(c) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < kAllCategories.size(); ++i) out << "---|";
  out << '\n';
  for (const auto& v : report.variants) {
    out << "| " << v.label << " |";
    for (auto c : kAllCategories) {
      auto it = v.per_operation.find(c);
      out << ' ' << (it == v.per_operation.end() ? std::string("-") : fixed(it->second.accuracy(), 3)) << " |";
    }
    out << '\n';
  }
  return out.str();
}

std::string variant_accuracy_csv(const ExperimentReport& report) {
  std::ostringstream out;
  std::size_t folds = report.variants.empty() ? 0 : report.variants.front().fold_accuracy.size();
  out << "variant,label";
  for (std::size_t f = 0; f < folds; ++f) out << ",fold_" << f;
  out << ",mean,decrease\n";
  for (const auto& v : report.variants) {
    out << v.name << ',' << v.label;
    for (double a : v.fold_accuracy) out << ',' << fixed(a, 6);
    out << ',' << fixed(v.mean_accuracy, 6) << ',' << fixed(v.decrease, 6) << '\n';
  }
  return out.str();
}

std::string per_operation_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "variant,category,count,correct,accuracy\n";
  for (const auto& v : report.variants)
    for (const auto& [c, t] : v.per_operation)
      out << v.name << ',' << to_string(c) << ',' << t.count << ',' << t.correct << ',' << fixed(t.accuracy(), 6)
          << '\n';
  return out.str();
}

std::string operation_distribution_csv(const std::array<std::size_t, 5>& counts) {
  std::size_t total = 0;
  for (auto n : counts) total += n;
  std::ostringstream out;
  out << "category,count,fraction\n";
  for (auto c : kAllCategories) {
    auto n = counts[static_cast<std::size_t>(c)];
    out << to_string(c) << ',' << n << ','
        << fixed(total ? static_cast<double>(n) / static_cast<double>(total) : 0.0, 6) << '\n';
  }
  return out.str();
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& content) {
    auto path = dir / name;
    write_file(path, content);
    written.push_back(path);
  };
  if (formats.contains(ReportFormat::Json)) emit("report.json", report_to_json(report));
  if (formats.contains(ReportFormat::Markdown)) emit("report.md", report_markdown(report));
  if (formats.contains(ReportFormat::Csv)) {
    emit("variant_accuracy.csv", variant_accuracy_csv(report));
    emit("per_op_accuracy.csv", per_operation_csv(report));
    emit("op_distribution.csv", operation_distribution_csv(report.metadata.operation_counts));
  }
  return written;
}

}  // namespace mwpx
