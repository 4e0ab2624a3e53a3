#include "gamerep/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gamerep/error.hpp"
#include "gamerep/rng.hpp"

namespace gamerep {

using nlohmann::json;

SplitSpec stratified_game_split(const Manifest& m, double ratio, std::uint64_t seed) {
  validate_manifest(m);
  if (!(ratio > 0.0 && ratio < 1.0))
    throw config_error("split-ratio", "ratio must lie strictly between 0 and 1");

  SplitSpec spec;
  spec.ratio = ratio;
  spec.seed = seed;

  for (const auto& genre : m.genres) {
    const std::vector<int> game_idx = m.games_in_genre(genre.id);
    const int total = static_cast<int>(game_idx.size());
    if (total < 2)
      throw data_error("infeasible-split",
                       "genre '" + genre.name + "' has fewer than 2 games");

    const int target = std::clamp(
        static_cast<int>(std::llround(ratio * total)), 1, total - 1);

    // Bucket by style, ordered by style id for determinism.
    std::map<int, std::vector<int>> buckets;
    for (int gi : game_idx) buckets[m.games[gi].style_id].push_back(gi);

    Rng rng(derive_seed(seed, {0x53504c54, static_cast<std::uint64_t>(genre.id)}));

    // Proportional base take per bucket; leftover seats are handed out by a
    // seeded shuffle over buckets that still have spare games.
    std::vector<int> bucket_styles;
    std::vector<int> take;
    int assigned = 0;
    for (const auto& [style, games] : buckets) {
      const int t = static_cast<int>(target * games.size() / total);
      bucket_styles.push_back(style);
      take.push_back(t);
      assigned += t;
    }
    int remainder = target - assigned;
    std::vector<std::size_t> order(bucket_styles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    while (remainder > 0) {
      rng.shuffle(order);
      bool progress = false;
      for (std::size_t i : order) {
        if (remainder == 0) break;
        const int cap = static_cast<int>(buckets[bucket_styles[i]].size());
        if (take[i] < cap) {
          ++take[i];
          --remainder;
          progress = true;
        }
      }
      if (!progress) break;  // cannot happen: target <= total
    }

    for (std::size_t i = 0; i < bucket_styles.size(); ++i) {
      std::vector<int>& games = buckets[bucket_styles[i]];
      rng.shuffle(games);
      for (std::size_t k = 0; k < games.size(); ++k) {
        const std::string& id = m.games[games[k]].id;
        if (static_cast<int>(k) < take[i])
          spec.train_games.push_back(id);
        else
          spec.val_games.push_back(id);
      }
    }
  }

  std::sort(spec.train_games.begin(), spec.train_games.end());
  std::sort(spec.val_games.begin(), spec.val_games.end());
  return spec;
}

void validate_split(const Manifest& m, const SplitSpec& s) {
  std::set<std::string> train(s.train_games.begin(), s.train_games.end());
  std::set<std::string> val(s.val_games.begin(), s.val_games.end());
  if (train.size() != s.train_games.size() || val.size() != s.val_games.size())
    throw data_error("split-mismatch", "split lists a game twice");
  for (const auto& id : train)
    if (val.count(id)) throw data_error("split-mismatch", "game '" + id + "' is on both sides");

  std::map<int, int> train_per_genre, val_per_genre;
  for (const auto& game : m.games) {
    const bool in_train = train.erase(game.id) > 0;
    const bool in_val = val.erase(game.id) > 0;
    if (!in_train && !in_val)
      throw data_error("split-mismatch", "game '" + game.id + "' missing from the split");
    (in_train ? train_per_genre : val_per_genre)[game.genre_id] += 1;
  }
  if (!train.empty() || !val.empty())
    throw data_error("split-mismatch", "split references games not in the manifest");
  for (const auto& genre : m.genres) {
    if (train_per_genre[genre.id] == 0 || val_per_genre[genre.id] == 0)
      throw data_error("split-mismatch",
                       "genre '" + genre.name + "' is empty on one side of the split");
  }
}

std::string split_to_json(const SplitSpec& s) {
  json j{{"train_games", s.train_games},
         {"val_games", s.val_games},
         {"ratio", s.ratio},
         {"seed", s.seed}};
  return j.dump(2);
}

SplitSpec split_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw data_error("schema", "split file is not valid JSON");
  try {
    SplitSpec s;
    s.train_games = j.at("train_games").get<std::vector<std::string>>();
    s.val_games = j.at("val_games").get<std::vector<std::string>>();
    s.ratio = j.at("ratio").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
  } catch (const json::exception& e) {
    throw data_error("schema", std::string("split file does not match schema: ") + e.what());
  }
}

SplitSpec load_split(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("missing-file", "cannot open split '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return split_from_json(ss.str());
}

void save_split(const SplitSpec& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("io", "cannot write split '" + path + "'");
  out << split_to_json(s) << "\n";
}

}  // namespace gamerep
