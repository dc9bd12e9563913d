#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trollslayer/annotation.hpp"

namespace trollslayer {

// Per-item category counts n_ij over a fixed number of categories.
class RatingMatrix {
 public:
  explicit RatingMatrix(int categories);

  // Throws DataError on a wrong column count or negative entries.
  void add_item(std::vector<int> counts);

  int categories() const { return categories_; }
  std::size_t items() const { return rows_.size(); }
  std::span<const int> row(std::size_t i) const { return rows_[i]; }
  int raters(std::size_t i) const;

 private:
  int categories_;
  std::vector<std::vector<int>> rows_;
};

// Columns: abusive, acceptable, undecided, then zero-filled up to `categories`.
RatingMatrix rating_matrix(const VoteStore& store, int categories = 3);

// Proportion of agreeing rater pairs: sum_j n_j (n_j - 1) / (r (r - 1)).
// Throws DegenerateStatistic when r < 2.
double item_agreement(std::span<const int> counts);

// P_i for every item; empty for items with fewer than `min_raters` (>= 2) raters.
// The parallel and serial versions return identical vectors.
std::vector<std::optional<double>> item_agreements(const RatingMatrix& m, int min_raters = 2);
std::vector<std::optional<double>> item_agreements_serial(const RatingMatrix& m, int min_raters = 2);

struct AgreementReport {
  double observed = 0.0;        // P_o, mean P_i over eligible items
  double randolph_kappa = 0.0;  // (P_o - 1/k) / (1 - 1/k)
  std::size_t eligible = 0;
  std::size_t excluded = 0;     // items below min_raters
  int categories = 0;
};

// Throws DegenerateStatistic when no item is eligible.
double overall_agreement(const RatingMatrix& m, int min_raters = 2);

// Free-marginal kappa with chance agreement 1/k.
double randolph_kappa(double observed, int k);
double randolph_kappa(const RatingMatrix& m, int k, int min_raters = 2);

AgreementReport agreement_report(const RatingMatrix& m, int k, int min_raters = 2);

// Fixed-marginal kappa with chance agreement sum_j p_j^2 over pooled
// category proportions. All eligible items must share one rater count;
// throws DataError otherwise and DegenerateStatistic when P_e = 1.
double fleiss_kappa(const RatingMatrix& m);

}  // namespace trollslayer

#include "json.hpp"

namespace trollslayer {

// Agreement summary as printed by `trollslayer kappa`: the all-items variant
// (>= 2 raters) at the top level and the >= 3 raters variant nested under
// "min_3_raters". Values are null when no item qualifies.
nlohmann::json agreement_json(const RatingMatrix& m, int k);

}  // namespace trollslayer
