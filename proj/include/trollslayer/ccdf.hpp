#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "trollslayer/annotation.hpp"
#include "trollslayer/features.hpp"

namespace trollslayer {

struct CcdfPoint {
  double x = 0.0;
  double p = 0.0;  // fraction of samples >= x

  bool operator==(const CcdfPoint&) const = default;
};

// One point per distinct value, ascending, p = |{v >= x}| / n. Throws
// DataError on empty input or non-finite values.
std::vector<CcdfPoint> ccdf(std::span<const double> values);

struct CcdfSeries {
  std::string feature;
  Label label = Label::abusive;
  std::vector<CcdfPoint> points;  // empty when no sample of this class exists

  bool empty() const { return points.empty(); }
  bool operator==(const CcdfSeries&) const = default;
};

// Abusive and acceptable series for one feature, joined on message id.
// Undecided, incomplete and unlabeled messages are left out, as are rows
// where the feature is absent. Throws DataError for an unknown feature
// name, listing the valid ones.
std::vector<CcdfSeries> ccdf_by_label(const FeatureTable& features, const LabelTable& labels,
                                      const std::string& feature);

// Every feature. Parallel over features; output order is feature column order
// then abusive before acceptable.
std::vector<CcdfSeries> ccdf_all_features(const FeatureTable& features, const LabelTable& labels);
std::vector<CcdfSeries> ccdf_all_features_serial(const FeatureTable& features,
                                                 const LabelTable& labels);

// ccdf.csv: feature,label,x,p
std::string format_ccdf_csv(const std::vector<CcdfSeries>& series);
void write_ccdf_csv(const std::filesystem::path& path, const std::vector<CcdfSeries>& series);

}  // namespace trollslayer
