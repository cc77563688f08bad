#include "reviewforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "reviewforge/hash.hpp"

namespace reviewforge {

namespace {

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double f_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

void append_row(std::ostringstream& out, const char* name, const ClassStats& stats) {
  out << "  " << name;
  for (std::size_t i = std::string(name).size(); i < 10; ++i) out << ' ';
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%9.3f %9.3f %9.3f %9zu\n", stats.precision, stats.recall,
                stats.f1, stats.support);
  out << buf;
}

}  // namespace

ClassificationReport report_from_predictions(std::span<const std::int8_t> predicted,
                                             std::span<const std::int8_t> actual) {
  if (predicted.size() != actual.size())
    throw std::invalid_argument("prediction and label counts differ");
  ClassificationReport report;
  report.total = actual.size();
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const bool is_machine = actual[i] > 0;
    const bool said_machine = predicted[i] > 0;
    if (is_machine && said_machine) ++report.true_machine;
    if (is_machine && !said_machine) ++report.false_human;
    if (!is_machine && said_machine) ++report.false_machine;
    if (!is_machine && !said_machine) ++report.true_human;
  }
  const auto tm = static_cast<double>(report.true_machine);
  const auto fm = static_cast<double>(report.false_machine);
  const auto th = static_cast<double>(report.true_human);
  const auto fh = static_cast<double>(report.false_human);

  report.machine.support = report.true_machine + report.false_human;
  report.human.support = report.true_human + report.false_machine;
  report.machine.precision = safe_div(tm, tm + fm);
  report.machine.recall = safe_div(tm, tm + fh);
  report.machine.f1 = f_score(report.machine.precision, report.machine.recall);
  report.human.precision = safe_div(th, th + fh);
  report.human.recall = safe_div(th, th + fm);
  report.human.f1 = f_score(report.human.precision, report.human.recall);
  report.macro_f1 = (report.machine.f1 + report.human.f1) / 2.0;
  report.accuracy =
      report.total > 0 ? (tm + th) / static_cast<double>(report.total) : 0.0;
  return report;
}

ClassificationReport evaluate(const BoostedEnsemble& ensemble,
                              const std::vector<FeatureVector>& test) {
  std::vector<std::int8_t> predicted(test.size());
  std::vector<std::int8_t> actual(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    predicted[i] = label_sign(ensemble.classify(test[i]));
    actual[i] = label_sign(test[i].label);
  }
  return report_from_predictions(predicted, actual);
}

std::string ClassificationReport::pretty() const {
  std::ostringstream out;
  out << "            precision    recall   f-score   support\n";
  append_row(out, "human", human);
  append_row(out, "machine", machine);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "  avg / total %7.3f accuracy %7.3f %9zu\n", macro_f1, accuracy,
                total);
  out << buf;
  if (config_hash != 0) out << "  config " << hex64(config_hash) << "\n";
  for (const auto& warning : warnings) out << "  warning: " << warning << "\n";
  return out.str();
}

std::string ClassificationReport::csv() const {
  std::ostringstream out;
  out << "class,precision,recall,f_score,support\n";
  auto row = [&](const char* name, const ClassStats& stats) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%zu\n", name, stats.precision,
                  stats.recall, stats.f1, stats.support);
    out << buf;
  };
  row("human", human);
  row("machine", machine);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "average,,,%.6f,%zu\n", macro_f1, total);
  out << buf;
  return out.str();
}

MarginHistogram MarginHistogram::build(std::span<const double> human_margins,
                                       std::span<const double> machine_margins, int bins) {
  if (bins < 2) throw std::invalid_argument("histogram needs at least 2 bins");
  MarginHistogram hist;
  hist.bins = bins;
  hist.human.assign(static_cast<std::size_t>(bins), 0);
  hist.machine.assign(static_cast<std::size_t>(bins), 0);
  auto fill = [&](std::span<const double> margins, std::vector<std::size_t>& counts) {
    for (double m : margins) {
      double clamped = std::clamp(m, -1.0, 1.0);
      int bin = static_cast<int>((clamped + 1.0) / 2.0 * bins);
      if (bin >= bins) bin = bins - 1;  // margin exactly +1
      ++counts[static_cast<std::size_t>(bin)];
    }
  };
  fill(human_margins, hist.human);
  fill(machine_margins, hist.machine);
  return hist;
}

double MarginHistogram::bin_left(int bin) const {
  return -1.0 + 2.0 * static_cast<double>(bin) / static_cast<double>(bins);
}

double MarginHistogram::bin_right(int bin) const {
  return -1.0 + 2.0 * static_cast<double>(bin + 1) / static_cast<double>(bins);
}

std::string MarginHistogram::csv() const {
  std::ostringstream out;
  out << "bin_left,bin_right,count_human,count_machine\n";
  for (int b = 0; b < bins; ++b) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%zu,%zu\n", bin_left(b), bin_right(b),
                  human[static_cast<std::size_t>(b)], machine[static_cast<std::size_t>(b)]);
    out << buf;
  }
  return out.str();
}

}  // namespace reviewforge
