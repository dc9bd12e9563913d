#include "trollslayer/ccdf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "io_util.hpp"
#include "trollslayer/error.hpp"

namespace trollslayer {

std::vector<CcdfPoint> ccdf(std::span<const double> values) {
  if (values.empty()) throw DataError("ccdf of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw DataError("ccdf sample contains a non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CcdfPoint> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    // sorted.size() - i samples are >= sorted[i].
    out.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
  }
  return out;
}

std::vector<CcdfSeries> ccdf_by_label(const FeatureTable& features, const LabelTable& labels,
                                      const std::string& name) {
  const auto feature = feature_by_name(name);
  if (!feature) {
    std::string valid;
    for (Feature f : all_features()) {
      if (!valid.empty()) valid += ", ";
      valid += feature_name(f);
    }
    throw DataError("unknown feature '" + name + "'; valid features: " + valid);
  }
  // The table may come in any order, so join through a map rather than find().
  std::unordered_map<std::uint64_t, Label> by_item;
  by_item.reserve(labels.labels.size());
  for (const auto& l : labels.labels) by_item.emplace(raw(l.item), l.label);
  std::vector<double> abusive, acceptable;
  for (const auto& fv : features) {
    const auto it = by_item.find(raw(fv.message));
    const auto v = fv.get(*feature);
    if (it == by_item.end() || !v) continue;
    if (it->second == Label::abusive) abusive.push_back(*v);
    if (it->second == Label::acceptable) acceptable.push_back(*v);
  }
  std::vector<CcdfSeries> out(2);
  out[0].feature = out[1].feature = name;
  out[0].label = Label::abusive;
  out[1].label = Label::acceptable;
  if (!abusive.empty()) out[0].points = ccdf(abusive);
  if (!acceptable.empty()) out[1].points = ccdf(acceptable);
  return out;
}

std::vector<CcdfSeries> ccdf_all_features_serial(const FeatureTable& features,
                                                 const LabelTable& labels) {
  std::vector<CcdfSeries> out;
  for (Feature f : all_features()) {
    auto series = ccdf_by_label(features, labels, std::string(feature_name(f)));
    out.insert(out.end(), series.begin(), series.end());
  }
  return out;
}

std::vector<CcdfSeries> ccdf_all_features(const FeatureTable& features, const LabelTable& labels) {
  std::vector<std::vector<CcdfSeries>> per_feature(kFeatureCount);
  const auto n = static_cast<std::int64_t>(kFeatureCount);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    per_feature[i] = ccdf_by_label(features, labels, std::string(feature_name(all_features()[i])));
  }
  std::vector<CcdfSeries> out;
  for (auto& s : per_feature) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::string format_ccdf_csv(const std::vector<CcdfSeries>& series) {
  std::ostringstream out;
  out << "feature,label,x,p\n";
  for (const auto& s : series) {
    for (const auto& pt : s.points) {
      out << s.feature << ',' << to_string(s.label) << ',' << io::fixed6(pt.x) << ','
          << io::fixed6(pt.p) << '\n';
    }
  }
  return out.str();
}

void write_ccdf_csv(const std::filesystem::path& path, const std::vector<CcdfSeries>& series) {
  io::open_out(path) << format_ccdf_csv(series);
}

}  // namespace trollslayer
