#include "gamerep/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "gamerep/error.hpp"

namespace gamerep {

using nlohmann::json;

std::vector<int> Manifest::games_in_genre(int genre_id) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(games.size()); ++i)
    if (games[i].genre_id == genre_id) out.push_back(i);
  return out;
}

const GameEntry* Manifest::find_game(const std::string& game_id) const {
  for (const auto& g : games)
    if (g.id == game_id) return &g;
  return nullptr;
}

const std::string& Manifest::genre_name(int genre_id) const {
  for (const auto& g : genres)
    if (g.id == genre_id) return g.name;
  throw data_error("unknown-genre", "no genre with id " + std::to_string(genre_id));
}

const std::string& Manifest::style_name(int style_id) const {
  for (const auto& s : styles)
    if (s.id == style_id) return s.name;
  throw data_error("unknown-style", "no style with id " + std::to_string(style_id));
}

void validate_manifest(const Manifest& m) {
  if (m.image_h < 1 || m.image_w < 1)
    throw data_error("schema", "image_size must be positive");
  if (m.games.empty()) throw data_error("empty-manifest", "manifest lists no games");
  if (m.genres.size() < 2)
    throw data_error("schema", "a manifest needs at least 2 genres");

  // Genre ids must be dense and unique: exactly {0 .. n-1}.
  std::set<int> genre_ids;
  for (const auto& g : m.genres) genre_ids.insert(g.id);
  if (genre_ids.size() != m.genres.size() || *genre_ids.begin() != 0 ||
      *genre_ids.rbegin() != static_cast<int>(m.genres.size()) - 1)
    throw data_error("schema", "genre ids must be dense and unique starting at 0");

  std::set<int> style_ids;
  for (const auto& s : m.styles) {
    if (!style_ids.insert(s.id).second)
      throw data_error("schema", "duplicate style id " + std::to_string(s.id));
  }

  std::unordered_set<std::string> seen_games;
  std::unordered_map<int, int> games_per_genre;
  for (const auto& game : m.games) {
    if (!seen_games.insert(game.id).second)
      throw data_error("duplicate-game", "game '" + game.id + "' appears more than once");
    if (!genre_ids.count(game.genre_id))
      throw data_error("schema", "game '" + game.id + "' references unknown genre " +
                                     std::to_string(game.genre_id));
    if (!style_ids.count(game.style_id))
      throw data_error("schema", "game '" + game.id + "' references unknown style " +
                                     std::to_string(game.style_id));
    if (game.images.empty() && !game.generator_ref.has_value())
      throw data_error("schema", "game '" + game.id + "' has neither images nor a generator_ref");
    if (game.generator_ref.has_value() && !m.synthetic.has_value())
      throw data_error("schema",
                       "game '" + game.id + "' has a generator_ref but the manifest has no synthetic block");
    games_per_genre[game.genre_id] += 1;
  }
  for (int gid : genre_ids) {
    if (games_per_genre[gid] < 2)
      throw data_error("genre-too-small",
                       "genre " + std::to_string(gid) +
                           " has fewer than 2 games; a game-disjoint split would be impossible");
  }
}

namespace {

json config_to_json_obj(const SyntheticConfig& c) {
  return json{{"genre_count", c.genre_count},
              {"games_per_genre", c.games_per_genre},
              {"images_per_game", c.images_per_game},
              {"image_size", {c.image_h, c.image_w}},
              {"palette_count", c.palette_count},
              {"background_textures", c.background_textures},
              {"noise_range", {c.noise_min, c.noise_max}},
              {"seed", c.seed}};
}

SyntheticConfig config_from_json_obj(const json& j) {
  SyntheticConfig c;
  c.genre_count = j.value("genre_count", c.genre_count);
  c.games_per_genre = j.value("games_per_genre", c.games_per_genre);
  c.images_per_game = j.value("images_per_game", c.images_per_game);
  if (j.contains("image_size")) {
    c.image_h = j.at("image_size").at(0).get<int>();
    c.image_w = j.at("image_size").at(1).get<int>();
  }
  c.palette_count = j.value("palette_count", c.palette_count);
  if (j.contains("background_textures"))
    c.background_textures = j.at("background_textures").get<std::vector<std::string>>();
  if (j.contains("noise_range")) {
    c.noise_min = j.at("noise_range").at(0).get<double>();
    c.noise_max = j.at("noise_range").at(1).get<double>();
  }
  c.seed = j.value("seed", c.seed);
  return c;
}

}  // namespace

std::string synthetic_config_to_json(const SyntheticConfig& c) {
  return config_to_json_obj(c).dump(2);
}

SyntheticConfig synthetic_config_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw config_error("config-parse", "synthetic config is not valid JSON");
  try {
    return config_from_json_obj(j);
  } catch (const json::exception& e) {
    throw config_error("config-parse", std::string("bad synthetic config: ") + e.what());
  }
}

std::string manifest_to_json(const Manifest& m) {
  json j;
  j["image_size"] = {m.image_h, m.image_w};
  j["genres"] = json::array();
  for (const auto& g : m.genres) j["genres"].push_back({{"id", g.id}, {"name", g.name}});
  j["styles"] = json::array();
  for (const auto& s : m.styles) j["styles"].push_back({{"id", s.id}, {"name", s.name}});
  j["games"] = json::array();
  for (const auto& game : m.games) {
    json jg{{"id", game.id}, {"genre_id", game.genre_id}, {"style_id", game.style_id}};
    if (game.generator_ref.has_value())
      jg["generator_ref"] = *game.generator_ref;
    else
      jg["images"] = game.images;
    j["games"].push_back(jg);
  }
  if (m.synthetic.has_value()) j["synthetic"] = config_to_json_obj(*m.synthetic);
  return j.dump(2);
}

Manifest manifest_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw data_error("schema", "manifest is not valid JSON");
  Manifest m;
  try {
    m.image_h = j.at("image_size").at(0).get<int>();
    m.image_w = j.at("image_size").at(1).get<int>();
    for (const auto& jg : j.at("genres"))
      m.genres.push_back({jg.at("id").get<int>(), jg.at("name").get<std::string>()});
    for (const auto& js : j.at("styles"))
      m.styles.push_back({js.at("id").get<int>(), js.at("name").get<std::string>()});
    for (const auto& jg : j.at("games")) {
      GameEntry g;
      g.id = jg.at("id").get<std::string>();
      g.genre_id = jg.at("genre_id").get<int>();
      g.style_id = jg.at("style_id").get<int>();
      if (jg.contains("images")) g.images = jg.at("images").get<std::vector<std::string>>();
      if (jg.contains("generator_ref")) g.generator_ref = jg.at("generator_ref").get<int>();
      m.games.push_back(std::move(g));
    }
    if (j.contains("synthetic")) m.synthetic = config_from_json_obj(j.at("synthetic"));
  } catch (const json::exception& e) {
    throw data_error("schema", std::string("manifest does not match schema: ") + e.what());
  }
  validate_manifest(m);
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("missing-file", "cannot open manifest '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Manifest m = manifest_from_json(ss.str());
  m.base_dir = std::filesystem::path(path).parent_path().string();
  return m;
}

void save_manifest(const Manifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("io", "cannot write manifest '" + path + "'");
  out << manifest_to_json(m) << "\n";
}

}  // namespace gamerep
