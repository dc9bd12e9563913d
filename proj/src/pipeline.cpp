#include "trollslayer/pipeline.hpp"

#include <ostream>

#include "io_util.hpp"
#include "json.hpp"
#include "trollslayer/agreement.hpp"
#include "trollslayer/ccdf.hpp"
#include "trollslayer/features.hpp"
#include "trollslayer/hashing.hpp"
#include "trollslayer/sources.hpp"

namespace trollslayer {

namespace fs = std::filesystem;
using nlohmann::json;

void export_public(const fs::path& labels_csv, const fs::path& out) {
  if (!fs::exists(labels_csv)) {
    throw DataError(labels_csv.string() + " not found; run `trollslayer aggregate` first");
  }
  const LabelTable table = read_labels_csv(labels_csv);
  auto os = io::open_out(out);
  os << "message_id,label\n";
  for (const auto& l : table.labels) os << raw(l.item) << ',' << to_string(l.label) << '\n';
}

namespace {

class Fingerprint {
 public:
  Fingerprint& add(const std::string& key, const std::string& value) {
    text_ += key + "=" + value + "\n";
    return *this;
  }
  Fingerprint& file(const std::string& key, const fs::path& path) {
    return add(key, fs::exists(path) ? sha256_file(path) : "missing");
  }
  std::string digest() const { return sha256_hex(text_); }

 private:
  std::string text_;
};

class Runner {
 public:
  Runner(const PipelineConfig& cfg, std::ostream* log) : cfg_(cfg), log_(log) {
    fs::create_directories(cfg.out);
    const fs::path path = cfg.out / files::kManifest;
    if (fs::exists(path)) {
      try {
        manifest_ = json::parse(io::read_file(path));
      } catch (const json::exception&) {
        manifest_ = json::object();
      }
    }
    if (!manifest_.is_object()) manifest_ = json::object();
  }

  template <typename Action>
  void stage(const std::string& name, const std::string& inputs,
             const std::vector<std::string>& outputs, const std::string& remedy, Action&& action) {
    json& entry = manifest_["stages"][name];
    if (up_to_date(entry, inputs, outputs)) {
      report_.stages.push_back({name, false});
      if (log_) *log_ << name << ": up to date\n";
      return;
    }
    try {
      action();
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what(), remedy);
    }
    entry = json::object();
    entry["inputs"] = inputs;
    for (const auto& f : outputs) entry["outputs"][f] = sha256_file(cfg_.out / f);
    save_manifest();
    report_.stages.push_back({name, true});
    if (log_) *log_ << name << ": done\n";
  }

  void set_collected_at(Timestamp ts) { manifest_["collected_at"] = format_timestamp(ts); }

  void save_manifest() const {
    io::open_out(cfg_.out / files::kManifest) << manifest_.dump(2) << '\n';
  }

  const Dataset& dataset() {
    if (!dataset_) dataset_ = load_dataset(cfg_.out);
    return *dataset_;
  }
  void drop_dataset() { dataset_.reset(); }

  PipelineReport& report() { return report_; }

 private:
  bool up_to_date(const json& entry, const std::string& inputs,
                  const std::vector<std::string>& outputs) const {
    if (!entry.is_object() || entry.value("inputs", "") != inputs) return false;
    const auto it = entry.find("outputs");
    if (it == entry.end()) return false;
    for (const auto& f : outputs) {
      const fs::path p = cfg_.out / f;
      if (!fs::exists(p) || !it->contains(f) || (*it)[f] != sha256_file(p)) return false;
    }
    return true;
  }

  const PipelineConfig& cfg_;
  std::ostream* log_;
  json manifest_ = json::object();
  std::optional<Dataset> dataset_;
  PipelineReport report_;
};

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& cfg, std::ostream* log) {
  Runner run(cfg, log);
  const fs::path& out = cfg.out;

  // crawl
  {
    Fingerprint fp;
    fp.add("source", cfg.source)
        .file("seeds", cfg.seeds)
        .add("max_depth", std::to_string(cfg.max_depth))
        .add("max_follows", std::to_string(cfg.max_follows));
    if (cfg.source.starts_with("fixture:")) {
      const fs::path dir = cfg.source.substr(8);
      for (const char* f : {files::kFollows, files::kUsers, files::kTweets, files::kManifest}) {
        fp.file(std::string("fixture/") + f, dir / f);
      }
    }
    run.stage("crawl", fp.digest(),
              {files::kFollows, files::kUsers, files::kTweets, files::kDepths, files::kFetchLog},
              "check --seeds and --source, then rerun", [&] {
                CrawlConfig cc;
                cc.seeds = read_seeds(cfg.seeds);
                cc.max_depth = cfg.max_depth;
                cc.max_follows = cfg.max_follows;
                cc.max_in_flight = cfg.max_in_flight;
                cc.backoff = cfg.backoff;
                cc.sleep = cfg.sleep;
                auto source = open_source(cfg.source);
                CrawlResult result = bbfs(*source, cc);
                save_crawl(out, result);
                run.set_collected_at(result.data.collected_at);
                run.save_manifest();
                run.drop_dataset();
                if (result.aborted) {
                  run.report().crawl_aborted = true;
                  throw StageError("crawl", "rate limit retries exhausted; partial result written",
                                   "rerun later to finish the crawl");
                }
              });
  }

  // features (independent of votes)
  const auto features_stage = [&] {
    Fingerprint fp;
    for (const char* f : {files::kFollows, files::kUsers, files::kTweets, files::kDepths}) {
      fp.file(f, out / f);
    }
    fp.add("collected_at", format_timestamp(read_collected_at(out))).file("badwords", cfg.badwords);
    run.stage("features", fp.digest(), {files::kFeatures}, "check --badwords and the crawl output",
              [&] {
                const BadwordList badwords = BadwordList::load(cfg.badwords);
                write_features_csv(out / files::kFeatures, extract_all(run.dataset(), badwords));
              });
  };

  fs::path votes_in;
  if (cfg.votes) {
    votes_in = *cfg.votes;
  } else if (fs::exists(out / files::kVotes)) {
    votes_in = out / files::kVotes;
  }
  if (votes_in.empty()) {
    features_stage();
    run.report().awaiting_votes = true;
    if (log) *log << "votes: none yet; collect them with `trollslayer serve` or pass --votes\n";
    return run.report();
  }

  run.stage("votes", Fingerprint().file("votes", votes_in).digest(), {files::kVotes},
            "fix the reported line in the votes file and rerun", [&] {
              const VoteStore store = read_votes_jsonl(votes_in);
              const Dataset& ds = run.dataset();
              for (const auto& [item, _] : store.by_item()) {
                if (!ds.messages.contains(item)) {
                  throw DataError(votes_in.string() + ": vote for unknown message " + to_string(item));
                }
              }
              const fs::path dest = out / files::kVotes;
              if (!fs::exists(dest) || !fs::equivalent(votes_in, dest)) {
                fs::copy_file(votes_in, dest, fs::copy_options::overwrite_existing);
              }
            });

  const fs::path votes = out / files::kVotes;
  run.stage("aggregate",
            Fingerprint().file("votes", votes).add("min_votes", std::to_string(cfg.min_votes)).digest(),
            {files::kLabels}, "check --min-votes", [&] {
              write_labels_csv(out / files::kLabels, aggregate_all(read_votes_jsonl(votes), cfg.min_votes));
            });

  run.stage("kappa",
            Fingerprint().file("votes", votes).add("categories", std::to_string(cfg.categories)).digest(),
            {files::kKappa}, "check --categories", [&] {
              const json j = agreement_json(rating_matrix(read_votes_jsonl(votes), cfg.categories),
                                            cfg.categories);
              io::open_out(out / files::kKappa) << j.dump(2) << '\n';
            });

  features_stage();

  run.stage("ccdf",
            Fingerprint().file("features", out / files::kFeatures).file("labels", out / files::kLabels).digest(),
            {files::kCcdf}, "rerun the features and aggregate stages", [&] {
              const FeatureTable features = read_features_csv(out / files::kFeatures);
              const LabelTable labels = read_labels_csv(out / files::kLabels);
              write_ccdf_csv(out / files::kCcdf, ccdf_all_features(features, labels));
            });

  run.stage("export-public", Fingerprint().file("labels", out / files::kLabels).digest(),
            {files::kPublicLabels}, "rerun the aggregate stage",
            [&] { export_public(out / files::kLabels, out / files::kPublicLabels); });

  return run.report();
}

}  // namespace trollslayer
