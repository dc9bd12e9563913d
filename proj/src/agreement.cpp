#include "trollslayer/agreement.hpp"

#include <numeric>

#include "trollslayer/error.hpp"

namespace trollslayer {

RatingMatrix::RatingMatrix(int categories) : categories_(categories) {
  if (categories < 2) throw DataError("a rating matrix needs at least 2 categories");
}

void RatingMatrix::add_item(std::vector<int> counts) {
  if (counts.size() != static_cast<std::size_t>(categories_)) {
    throw DataError("item has " + std::to_string(counts.size()) + " categories, expected " +
                    std::to_string(categories_));
  }
  for (int c : counts) {
    if (c < 0) throw DataError("negative rating count");
  }
  rows_.push_back(std::move(counts));
}

int RatingMatrix::raters(std::size_t i) const {
  return std::accumulate(rows_[i].begin(), rows_[i].end(), 0);
}

RatingMatrix rating_matrix(const VoteStore& store, int categories) {
  if (categories < 3) throw DataError("votes use 3 categories; --categories must be >= 3");
  RatingMatrix m(categories);
  for (const auto& [_, votes] : store.by_item()) {
    std::vector<int> counts(categories, 0);
    for (const auto& v : votes) {
      switch (v.value) {
        case VoteValue::abusive: ++counts[0]; break;
        case VoteValue::acceptable: ++counts[1]; break;
        case VoteValue::undecided: ++counts[2]; break;
      }
    }
    m.add_item(std::move(counts));
  }
  return m;
}

double item_agreement(std::span<const int> counts) {
  long long r = 0, pairs = 0;
  for (int n : counts) {
    r += n;
    pairs += static_cast<long long>(n) * (n - 1);
  }
  if (r < 2) throw DegenerateStatistic("item agreement needs at least 2 raters");
  return static_cast<double>(pairs) / static_cast<double>(r * (r - 1));
}

std::vector<std::optional<double>> item_agreements_serial(const RatingMatrix& m, int min_raters) {
  const int floor = std::max(min_raters, 2);
  std::vector<std::optional<double>> out(m.items());
  for (std::size_t i = 0; i < m.items(); ++i) {
    if (m.raters(i) >= floor) out[i] = item_agreement(m.row(i));
  }
  return out;
}

std::vector<std::optional<double>> item_agreements(const RatingMatrix& m, int min_raters) {
  const int floor = std::max(min_raters, 2);
  std::vector<std::optional<double>> out(m.items());
  const auto n = static_cast<std::int64_t>(m.items());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    if (m.raters(i) >= floor) out[i] = item_agreement(m.row(i));
  }
  return out;
}

namespace {

// Summed in item order so the result does not depend on thread count.
std::pair<double, std::size_t> mean_agreement(const RatingMatrix& m, int min_raters) {
  double sum = 0.0;
  std::size_t eligible = 0;
  for (const auto& p : item_agreements(m, min_raters)) {
    if (!p) continue;
    sum += *p;
    ++eligible;
  }
  if (eligible == 0) throw DegenerateStatistic("no item has enough raters for agreement");
  return {sum / static_cast<double>(eligible), eligible};
}

}  // namespace

double overall_agreement(const RatingMatrix& m, int min_raters) {
  return mean_agreement(m, min_raters).first;
}

double randolph_kappa(double observed, int k) {
  if (k < 2) throw DataError("kappa needs k >= 2 categories");
  const double chance = 1.0 / k;
  return (observed - chance) / (1.0 - chance);
}

double randolph_kappa(const RatingMatrix& m, int k, int min_raters) {
  if (k < m.categories()) throw DataError("k is smaller than the matrix's category count");
  return randolph_kappa(overall_agreement(m, min_raters), k);
}

AgreementReport agreement_report(const RatingMatrix& m, int k, int min_raters) {
  if (k < m.categories()) throw DataError("k is smaller than the matrix's category count");
  AgreementReport r;
  const auto [observed, eligible] = mean_agreement(m, min_raters);
  r.observed = observed;
  r.randolph_kappa = randolph_kappa(observed, k);
  r.eligible = eligible;
  r.excluded = m.items() - eligible;
  r.categories = k;
  return r;
}

double fleiss_kappa(const RatingMatrix& m) {
  int raters = -1;
  std::size_t items = 0;
  std::vector<double> totals(m.categories(), 0.0);
  double observed = 0.0;
  for (std::size_t i = 0; i < m.items(); ++i) {
    const int r = m.raters(i);
    if (r < 2) continue;
    if (raters == -1) raters = r;
    if (r != raters) throw DataError("Fleiss kappa needs the same number of raters on every item");
    ++items;
    observed += item_agreement(m.row(i));
    for (int j = 0; j < m.categories(); ++j) totals[j] += m.row(i)[j];
  }
  if (items == 0) throw DegenerateStatistic("no item has enough raters for agreement");
  observed /= static_cast<double>(items);
  const double all = static_cast<double>(items) * raters;
  double chance = 0.0;
  for (double t : totals) chance += (t / all) * (t / all);
  if (chance >= 1.0) throw DegenerateStatistic("Fleiss kappa undefined: chance agreement is 1");
  return (observed - chance) / (1.0 - chance);
}

}  // namespace trollslayer

namespace trollslayer {

namespace {

nlohmann::json variant_json(const RatingMatrix& m, int k, int min_raters) {
  nlohmann::json j;
  try {
    const AgreementReport r = agreement_report(m, k, min_raters);
    j["P_o"] = r.observed;
    j["randolph_kappa"] = r.randolph_kappa;
    j["eligible_items"] = r.eligible;
    j["excluded_items"] = r.excluded;
  } catch (const DegenerateStatistic&) {
    j["P_o"] = nullptr;
    j["randolph_kappa"] = nullptr;
    j["eligible_items"] = 0;
    j["excluded_items"] = m.items();
  }
  return j;
}

}  // namespace

nlohmann::json agreement_json(const RatingMatrix& m, int k) {
  nlohmann::json j = variant_json(m, k, 2);
  j["categories"] = k;
  j["min_3_raters"] = variant_json(m, k, 3);
  return j;
}

}  // namespace trollslayer
