#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trollslayer/annotation.hpp"
#include "trollslayer/crawler.hpp"
#include "trollslayer/error.hpp"

namespace trollslayer {

// public_labels.csv: exactly `message_id,label`, one row per labels.csv row.
// Throws DataError pointing at `aggregate` when labels.csv is missing.
void export_public(const std::filesystem::path& labels_csv, const std::filesystem::path& out);

struct PipelineConfig {
  std::filesystem::path seeds;
  std::string source;  // as accepted by open_source()
  int max_depth = 2;
  std::uint64_t max_follows = 5000;
  int max_in_flight = 4;
  BackoffPolicy backoff;
  std::function<void(std::chrono::milliseconds)> sleep;
  // Votes to import; without them the run stops after features.
  std::optional<std::filesystem::path> votes;
  std::filesystem::path badwords;
  int min_votes = kDefaultMinVotes;
  int categories = 3;
  std::filesystem::path out;
};

struct StageError : Error {
  StageError(std::string stage, const std::string& what, std::string remedy)
      : Error("stage '" + stage + "' failed: " + what + " (" + remedy + ")"),
        stage(std::move(stage)),
        remedy(std::move(remedy)) {}
  std::string stage;
  std::string remedy;
};

struct StageOutcome {
  std::string name;
  bool ran = false;  // false: inputs and outputs matched the manifest
};

struct PipelineReport {
  std::vector<StageOutcome> stages;
  bool awaiting_votes = false;
  bool crawl_aborted = false;
};

// crawl -> import votes -> aggregate -> kappa -> features -> ccdf -> export.
// Each stage records input and output hashes in manifest.json and is skipped
// when both still match. Failures raise StageError.
PipelineReport run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

}  // namespace trollslayer
