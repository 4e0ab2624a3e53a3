#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gamerep/checkpoint.hpp"
#include "gamerep/dataset.hpp"
#include "gamerep/error.hpp"
#include "gamerep/evaluate.hpp"
#include "gamerep/experiment.hpp"
#include "gamerep/plot.hpp"
#include "gamerep/png_io.hpp"
#include "gamerep/synthetic.hpp"
#include "gamerep/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gamerep::data_error("missing-file", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw gamerep::data_error("io", "cannot create directory '" + dir + "'");
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void print_corpus_table(const gamerep::Manifest& m, std::ostream& os) {
  // Games per genre per style, echoing the corpus inventory layout.
  std::map<int, std::map<int, int>> counts;
  for (const auto& g : m.games) counts[g.genre_id][g.style_id] += 1;

  std::size_t name_w = 5;
  for (const auto& g : m.genres) name_w = std::max(name_w, g.name.size());

  os << std::left << std::setw(static_cast<int>(name_w + 2)) << "genre";
  for (const auto& s : m.styles)
    os << std::right << std::setw(static_cast<int>(s.name.size() + 2)) << s.name;
  os << std::right << std::setw(7) << "total" << "\n";

  std::map<int, int> style_totals;
  int grand = 0;
  for (const auto& g : m.genres) {
    os << std::left << std::setw(static_cast<int>(name_w + 2)) << g.name;
    int row = 0;
    for (const auto& s : m.styles) {
      const int c = counts[g.id][s.id];
      os << std::right << std::setw(static_cast<int>(s.name.size() + 2)) << c;
      row += c;
      style_totals[s.id] += c;
    }
    os << std::right << std::setw(7) << row << "\n";
    grand += row;
  }
  os << std::left << std::setw(static_cast<int>(name_w + 2)) << "total";
  for (const auto& s : m.styles)
    os << std::right << std::setw(static_cast<int>(s.name.size() + 2)) << style_totals[s.id];
  os << std::right << std::setw(7) << grand << "\n";
}

int cmd_generate(const GenerateArgs& args) {
  gamerep::SyntheticConfig cfg;
  if (!args.config_path.empty())
    cfg = gamerep::synthetic_config_from_json(slurp(args.config_path));
  if (args.seed_given) cfg.seed = args.seed;

  const gamerep::SyntheticDataset gen = gamerep::generate_synthetic(cfg);
  ensure_dir(args.out_dir);

  gamerep::Manifest manifest = gen.manifest();
  for (int g = 0; g < gen.game_count(); ++g) {
    auto& game = manifest.games[static_cast<std::size_t>(g)];
    const std::string game_dir = "images/" + game.id;
    ensure_dir((fs::path(args.out_dir) / game_dir).string());
    game.images.clear();
    for (int i = 0; i < cfg.images_per_game; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "img_%04d.png", i);
      const std::string rel = game_dir + "/" + name;
      gamerep::write_png((fs::path(args.out_dir) / rel).string(),
                         gen.render(g, i).image);
      game.images.push_back(rel);
    }
    game.generator_ref.reset();  // file-backed now; keep synthetic block as provenance
  }
  gamerep::save_manifest(manifest, (fs::path(args.out_dir) / "manifest.json").string());

  std::cout << "wrote " << gen.game_count() * cfg.images_per_game << " images and manifest to "
            << args.out_dir << "\n\n";
  print_corpus_table(manifest, std::cout);
  return 0;
}

// ------------------------------------------------------------------- split

int cmd_split(const std::string& manifest_path, double ratio, std::uint64_t seed,
              const std::string& out_path) {
  const gamerep::Manifest m = gamerep::load_manifest(manifest_path);
  const gamerep::SplitSpec spec = gamerep::stratified_game_split(m, ratio, seed);
  gamerep::save_split(spec, out_path);

  std::map<int, std::pair<int, int>> per_genre;  // genre -> (train, val)
  for (const auto& id : spec.train_games) per_genre[m.find_game(id)->genre_id].first += 1;
  for (const auto& id : spec.val_games) per_genre[m.find_game(id)->genre_id].second += 1;
  std::cout << "wrote split to " << out_path << "\n";
  for (const auto& g : m.genres)
    std::cout << "  " << g.name << ": " << per_genre[g.id].first << " train / "
              << per_genre[g.id].second << " val\n";
  return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  std::string manifest_path;
  std::string split_path;
  std::string method;
  std::string config_path;
  std::string out_dir;
  int epochs = -1;
  int batch = -1;
  double lr = -1.0;
  double margin = -1.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

gamerep::EpochCallback checkpoint_writer(const std::string& out_dir,
                                         const gamerep::ModelConfig& model,
                                         std::uint64_t seed, std::ofstream& history) {
  return [out_dir, model, seed, &history](const gamerep::EpochRecord& rec,
                                          const gamerep::Parameters& params) {
    history << gamerep::epoch_record_to_json(rec) << "\n";
    history.flush();
    char name[64];
    std::snprintf(name, sizeof(name), "%s_epoch_%03d.ckpt", rec.stage.c_str(), rec.epoch);
    gamerep::write_checkpoint((fs::path(out_dir) / name).string(), model, params,
                              {seed, rec.stage});
    std::cout << "  " << rec.stage << " epoch " << rec.epoch << ": loss " << rec.loss;
    if (rec.train_acc) std::cout << ", train_acc " << *rec.train_acc;
    if (rec.val_acc) std::cout << ", val_acc " << *rec.val_acc;
    std::cout << " (" << std::fixed << std::setprecision(1) << rec.seconds << "s)\n"
              << std::defaultfloat << std::setprecision(6);
  };
}

int cmd_train(const TrainArgs& args) {
  if (args.method != "supervised" && args.method != "contrastive")
    throw gamerep::config_error("method", "--method must be supervised or contrastive");

  const gamerep::Manifest manifest = gamerep::load_manifest(args.manifest_path);
  const gamerep::SplitSpec split = gamerep::load_split(args.split_path);
  gamerep::LoadedDataset data = gamerep::load_dataset(manifest);
  gamerep::apply_split(data, split);

  gamerep::ModelConfig model;
  gamerep::TrainConfig train;
  if (!args.config_path.empty()) {
    const json j = json::parse(slurp(args.config_path), nullptr, false);
    if (j.is_discarded())
      throw gamerep::config_error("config-parse", "config file is not valid JSON");
    if (j.contains("model")) model = gamerep::model_config_from_json(j["model"].dump());
    if (j.contains("train")) train = gamerep::train_config_from_json(j["train"].dump());
  }
  model.input_h = manifest.image_h;
  model.input_w = manifest.image_w;
  model.class_count = manifest.genre_count();

  // Flags win over the config file.
  if (args.epochs >= 0) train.epochs = args.epochs;
  if (args.batch >= 0) train.batch = args.batch;
  if (args.lr >= 0.0) train.lr = args.lr;
  if (args.margin >= 0.0) train.margin = args.margin;
  if (args.seed_given) train.seed = args.seed;
  train.validate();
  model.validate();

  ensure_dir(args.out_dir);
  {
    std::ofstream mc(fs::path(args.out_dir) / "model_config.json");
    mc << gamerep::model_config_to_json(model) << "\n";
    std::ofstream tc(fs::path(args.out_dir) / "train_config.json");
    tc << gamerep::train_config_to_json(train) << "\n";
  }
  std::ofstream history(fs::path(args.out_dir) / "history.jsonl");
  if (!history) throw gamerep::data_error("io", "cannot write history log");
  const gamerep::EpochCallback cb =
      checkpoint_writer(args.out_dir, model, train.seed, history);

  gamerep::TrainResult result;
  std::string final_stage;
  if (args.method == "supervised") {
    std::cout << "training fully supervised (" << train.epochs << " epochs)\n";
    result = gamerep::train_fully_supervised(data, model, train, cb);
    final_stage = "supervised";
  } else {
    std::cout << "contrastive pretraining (" << train.epochs << " epochs)\n";
    gamerep::TrainResult pre = gamerep::pretrain_contrastive(data, model, train, cb);
    std::cout << "fitting classifier on the frozen encoder\n";
    result = gamerep::fit_classifier_frozen(std::move(pre.params), data, model, train, cb);
    final_stage = "classifier-fit";
  }

  const std::string final_path = (fs::path(args.out_dir) / "model.ckpt").string();
  gamerep::write_checkpoint(final_path, model, result.params, {train.seed, final_stage});
  std::cout << "final checkpoint: " << final_path << "\n";
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string checkpoint_path;
  std::string manifest_path;
  std::string split_path;
  std::string out_dir;
  bool with_tsne = false;
  bool with_csv = false;
  std::uint64_t tsne_seed = 0;
  std::vector<std::string> compare;
};

int cmd_eval_compare(const std::vector<std::string>& paths) {
  const gamerep::ReportMetrics a = gamerep::load_report_metrics(paths[0]);
  const gamerep::ReportMetrics b = gamerep::load_report_metrics(paths[1]);
  auto line = [&](const char* name, double va, double vb) {
    std::cout << name << ": " << std::showpos << vb - va << std::noshowpos << " (" << va
              << " -> " << vb << ")\n";
  };
  line("train_acc delta", a.train_acc, b.train_acc);
  line("val_acc delta", a.val_acc, b.val_acc);
  line("silhouette delta", a.silhouette_score, b.silhouette_score);
  return 0;
}

int cmd_eval(const EvalArgs& args) {
  if (!args.compare.empty()) return cmd_eval_compare(args.compare);
  if (args.checkpoint_path.empty() || args.manifest_path.empty() || args.split_path.empty())
    throw gamerep::config_error("missing-flag",
                                "eval needs --checkpoint, --manifest and --split");

  const gamerep::Checkpoint ck = gamerep::read_checkpoint(args.checkpoint_path);
  const gamerep::Manifest manifest = gamerep::load_manifest(args.manifest_path);
  const gamerep::SplitSpec split = gamerep::load_split(args.split_path);
  gamerep::LoadedDataset data = gamerep::load_dataset(manifest);
  gamerep::apply_split(data, split);

  gamerep::EvalOptions opts;
  opts.train_seed = ck.meta.train_seed;
  opts.with_tsne = args.with_tsne;
  opts.tsne.seed = args.tsne_seed;
  const gamerep::EvalReport report =
      gamerep::evaluate_model(ck.config, ck.params, data, opts);

  ensure_dir(args.out_dir);
  gamerep::write_eval_report(report, (fs::path(args.out_dir) / "eval.json").string());
  std::cout << "train_acc " << report.train_acc << ", val_acc " << report.val_acc
            << ", silhouette " << report.silhouette_score << "\n";

  if (args.with_csv) {
    gamerep::write_representations_csv(
        (fs::path(args.out_dir) / "representations_val.csv").string(), data,
        data.val_indices, report.val_representations);
  }
  if (args.with_tsne) {
    gamerep::write_projection_csv((fs::path(args.out_dir) / "tsne_val.csv").string(),
                                  data, data.val_indices, *report.tsne_coords);
    // Marker = game's ordinal within its genre, color = genre.
    std::map<std::string, int> ordinal;
    std::map<int, int> next_in_genre;
    for (const auto& g : data.manifest.games) ordinal[g.id] = next_in_genre[g.genre_id]++;
    std::vector<int> genres, marks;
    for (std::size_t i : data.val_indices) {
      genres.push_back(data.samples[i].genre_id);
      marks.push_back(ordinal[data.samples[i].game_id]);
    }
    gamerep::scatter_png((fs::path(args.out_dir) / "tsne_val.png").string(),
                         *report.tsne_coords, genres, marks);
  }
  std::cout << "report written to " << args.out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------- reproduce

int cmd_reproduce(const std::vector<std::uint64_t>& seeds, const std::string& out_dir) {
  gamerep::ReproduceConfig cfg = gamerep::default_reproduce_config();
  if (!seeds.empty()) cfg.seeds = seeds;
  cfg.out_dir = out_dir;
  if (!out_dir.empty()) ensure_dir(out_dir);
  const gamerep::ReproduceResult result = gamerep::run_reproduction(cfg, &std::cout);
  std::cout << "\n" << result.table;
  if (!out_dir.empty()) std::cout << "\nartifacts in " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gamerep: style-invariant game image representations "
               "(supervised vs contrastive training, silhouette evaluation)"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Render a synthetic corpus to PNG + manifest");
  gen->add_option("--config", gen_args.config_path, "Synthetic config JSON");
  gen->add_option("--out", gen_args.out_dir, "Output directory")->required();
  gen->add_option("--seed", gen_args.seed, "Generator seed (overrides config)")
      ->each([&](const std::string&) { gen_args.seed_given = true; });

  std::string split_manifest, split_out;
  double split_ratio = 0.75;
  std::uint64_t split_seed = 0;
  auto* spl = app.add_subcommand("split", "Produce a game-disjoint train/val split");
  spl->add_option("--manifest", split_manifest, "Manifest path")->required();
  spl->add_option("--ratio", split_ratio, "Train-side fraction (default 0.75)");
  spl->add_option("--seed", split_seed, "Split seed");
  spl->add_option("--out", split_out, "Output split JSON path")->required();

  TrainArgs train_args;
  auto* trn = app.add_subcommand("train", "Train with either method");
  trn->add_option("--manifest", train_args.manifest_path, "Manifest path")->required();
  trn->add_option("--split", train_args.split_path, "Split JSON path")->required();
  trn->add_option("--method", train_args.method, "supervised | contrastive")->required();
  trn->add_option("--config", train_args.config_path, "JSON config file (flags win)");
  trn->add_option("--epochs", train_args.epochs, "Epochs per stage");
  trn->add_option("--batch", train_args.batch, "Batch size");
  trn->add_option("--lr", train_args.lr, "Initial learning rate");
  trn->add_option("--margin", train_args.margin, "Contrastive margin");
  trn->add_option("--seed", train_args.seed, "Training seed")
      ->each([&](const std::string&) { train_args.seed_given = true; });
  trn->add_option("--out", train_args.out_dir, "Output directory")->required();

  EvalArgs eval_args;
  auto* evl = app.add_subcommand("eval", "Evaluate a checkpoint or compare two reports");
  evl->add_option("--checkpoint", eval_args.checkpoint_path, "Checkpoint path");
  evl->add_option("--manifest", eval_args.manifest_path, "Manifest path");
  evl->add_option("--split", eval_args.split_path, "Split JSON path");
  evl->add_flag("--tsne", eval_args.with_tsne, "Also compute the 2-D projection");
  evl->add_flag("--csv", eval_args.with_csv, "Export validation representations as CSV");
  evl->add_option("--tsne-seed", eval_args.tsne_seed, "Projection seed");
  evl->add_option("--out", eval_args.out_dir, "Output directory");
  evl->add_option("--compare", eval_args.compare, "Two report JSONs to diff")->expected(2);

  std::vector<std::uint64_t> repro_seeds;
  std::string repro_out = "reproduce_out";
  auto* rep = app.add_subcommand("reproduce",
                                 "Full comparison: generate, split, train both methods, report");
  rep->add_option("--seeds", repro_seeds, "Training seeds (comma separated)")
      ->delimiter(',');
  rep->add_option("--out", repro_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error[cli]: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_args);
    if (spl->parsed()) return cmd_split(split_manifest, split_ratio, split_seed, split_out);
    if (trn->parsed()) return cmd_train(train_args);
    if (evl->parsed()) {
      if (eval_args.out_dir.empty() && eval_args.compare.empty())
        throw gamerep::config_error("missing-flag", "eval needs --out (or --compare)");
      return cmd_eval(eval_args);
    }
    if (rep->parsed()) return cmd_reproduce(repro_seeds, repro_out);
  } catch (const gamerep::Error& e) {
    std::cerr << e.what() << "\n";
    return gamerep::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
