// Command-line entry point: crawl, serve, aggregate, kappa, features, ccdf,
// export-public, pipeline and stats.
#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "trollslayer/agreement.hpp"
#include "trollslayer/ccdf.hpp"
#include "trollslayer/depth_stats.hpp"
#include "trollslayer/features.hpp"
#include "trollslayer/pipeline.hpp"
#include "trollslayer/service.hpp"
#include "trollslayer/sources.hpp"

namespace fs = std::filesystem;
using namespace trollslayer;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

AnnotationServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crawl a follower neighbourhood, crowdsource abuse labels and characterise them"};
  app.require_subcommand(1);

  // crawl
  std::string seeds_file, source, out_dir;
  int max_depth = 2;
  std::uint64_t max_follows = 5000;
  int max_in_flight = 4;
  auto* crawl = app.add_subcommand("crawl", "Bounded BFS crawl from seed users");
  crawl->add_option("--seeds", seeds_file, "File with one decimal user id per line")->required();
  crawl->add_option("--source", source, "fixture:DIR or http(s)://HOST")->required();
  crawl->add_option("--max-depth", max_depth, "Expand nodes at depth < max-depth")->capture_default_str();
  crawl->add_option("--max-follows", max_follows, "Skip expanding nodes with more followers")
      ->capture_default_str();
  crawl->add_option("--max-in-flight", max_in_flight, "Concurrent fetches per depth level")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  crawl->add_option("--out", out_dir, "Output directory")->required();

  // serve
  std::string data_dir, static_dir, host = "127.0.0.1";
  int port = 8080;
  int target_votes = kDefaultMinVotes;
  auto* serve = app.add_subcommand("serve", "Run the annotation web service");
  serve->add_option("--data", data_dir, "Dataset directory; votes go to DIR/votes.jsonl")->required();
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--target-votes", target_votes, "Votes wanted per item")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  serve->add_option("--static", static_dir, "Directory holding the built UI bundle");

  // aggregate
  std::string votes_file, labels_out;
  int min_votes = kDefaultMinVotes;
  auto* aggregate = app.add_subcommand("aggregate", "Turn votes into consensus labels");
  aggregate->add_option("--votes", votes_file, "votes.jsonl")->required();
  aggregate->add_option("--min-votes", min_votes, "Votes needed for a decided label")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  aggregate->add_option("--out", labels_out, "labels.csv to write")->required();

  // kappa
  int categories = 3;
  auto* kappa = app.add_subcommand("kappa", "Inter-rater agreement and free-marginal kappa");
  kappa->add_option("--votes", votes_file, "votes.jsonl")->required();
  kappa->add_option("--categories", categories, "Number of rating categories k")
      ->capture_default_str()
      ->check(CLI::Range(3, 1000));

  // features
  std::string badwords_file, features_out;
  auto* features = app.add_subcommand("features", "Per-message-edge feature table");
  features->add_option("--data", data_dir, "Dataset directory")->required();
  features->add_option("--badwords", badwords_file, "One lowercase term per line")->required();
  features->add_option("--out", features_out, "features.csv to write")->required();

  // ccdf
  std::string features_file, labels_file, feature_name_opt, ccdf_out;
  auto* ccdf_cmd = app.add_subcommand("ccdf", "Label-conditioned CCDF of a feature");
  ccdf_cmd->add_option("--features", features_file, "features.csv")->required();
  ccdf_cmd->add_option("--labels", labels_file, "labels.csv")->required();
  ccdf_cmd->add_option("--feature", feature_name_opt, "Feature column (default: all)");
  ccdf_cmd->add_option("--out", ccdf_out, "ccdf.csv to write")->required();

  // export-public
  std::string public_out;
  auto* export_cmd = app.add_subcommand("export-public", "Write message ids and labels only");
  export_cmd->add_option("--labels", labels_file, "labels.csv")->required();
  export_cmd->add_option("--out", public_out, "File to write")->required();

  // pipeline
  std::string pipeline_votes;
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage, skipping up-to-date ones");
  pipeline->add_option("--seeds", seeds_file, "File with one decimal user id per line")->required();
  pipeline->add_option("--source", source, "fixture:DIR or http(s)://HOST")->required();
  pipeline->add_option("--votes", pipeline_votes, "votes.jsonl to import (default: OUT/votes.jsonl)");
  pipeline->add_option("--badwords", badwords_file, "One lowercase term per line")->required();
  pipeline->add_option("--max-depth", max_depth, "Expand nodes at depth < max-depth")->capture_default_str();
  pipeline->add_option("--max-follows", max_follows, "Skip expanding nodes with more followers")
      ->capture_default_str();
  pipeline->add_option("--min-votes", min_votes, "Votes needed for a decided label")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  pipeline->add_option("--categories", categories, "Rating categories for kappa")
      ->capture_default_str()
      ->check(CLI::Range(3, 1000));
  pipeline->add_option("--out", out_dir, "Dataset directory")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "Per-depth counts of a crawled dataset");
  stats->add_option("--data", data_dir, "Dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*crawl) {
      CrawlConfig cfg;
      cfg.seeds = read_seeds(seeds_file);
      cfg.max_depth = max_depth;
      cfg.max_follows = max_follows;
      cfg.max_in_flight = max_in_flight;
      auto src = open_source(source);
      const CrawlResult result = bbfs(*src, cfg);
      save_crawl(out_dir, result);
      std::cout << "users " << result.data.depths.size() << ", follow edges "
                << result.data.follows.edge_count() << ", messages " << result.data.messages.size()
                << ", message edges " << result.data.message_graph.edge_count() << '\n';
      if (!result.skipped.empty()) std::cout << "skipped " << result.skipped.size() << " nodes\n";
      if (result.aborted) {
        std::cerr << "crawl aborted after exhausting rate-limit retries; partial result written\n";
        return kDataError;
      }
    } else if (*serve) {
      const Dataset ds = load_dataset(data_dir);
      AnnotationService service(annotation_items(ds), fs::path(data_dir) / files::kVotes, target_votes);
      std::optional<fs::path> assets;
      if (!static_dir.empty()) assets = static_dir;
      AnnotationServer server(service, assets);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const Progress p = service.progress();
      std::cout << "serving " << p.total_items << " items on http://" << host << ':' << bound << '\n'
                << std::flush;
      server.listen();
      g_server = nullptr;
    } else if (*aggregate) {
      const LabelTable table = aggregate_all(read_votes_jsonl(votes_file), min_votes);
      write_labels_csv(labels_out, table);
      const auto& s = table.summary;
      std::cout << "abusive " << s.abusive << ", acceptable " << s.acceptable << ", undecided "
                << s.undecided << ", incomplete " << s.incomplete << ", perfect disagreement "
                << s.perfect_disagreement << '\n';
    } else if (*kappa) {
      const RatingMatrix m = rating_matrix(read_votes_jsonl(votes_file), categories);
      std::cout << agreement_json(m, categories).dump() << '\n';
    } else if (*features) {
      const Dataset ds = load_dataset(data_dir);
      write_features_csv(features_out, extract_all(ds, BadwordList::load(badwords_file)));
    } else if (*ccdf_cmd) {
      const FeatureTable table = read_features_csv(features_file);
      const LabelTable labels = read_labels_csv(labels_file);
      const auto series = feature_name_opt.empty() ? ccdf_all_features(table, labels)
                                                   : ccdf_by_label(table, labels, feature_name_opt);
      write_ccdf_csv(ccdf_out, series);
      for (const auto& s : series) {
        if (s.empty()) std::cerr << "note: no " << to_string(s.label) << " samples for " << s.feature << '\n';
      }
    } else if (*export_cmd) {
      export_public(labels_file, public_out);
    } else if (*pipeline) {
      PipelineConfig cfg;
      cfg.seeds = seeds_file;
      cfg.source = source;
      cfg.max_depth = max_depth;
      cfg.max_follows = max_follows;
      if (!pipeline_votes.empty()) cfg.votes = pipeline_votes;
      cfg.badwords = badwords_file;
      cfg.min_votes = min_votes;
      cfg.categories = categories;
      cfg.out = out_dir;
      run_pipeline(cfg, &std::cout);
    } else if (*stats) {
      std::cout << format_depth_stats(depth_stats(load_dataset(data_dir)));
    }
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
