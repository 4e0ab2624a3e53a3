#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "gamerep/error.hpp"
#include "gamerep/manifest.hpp"
#include "gamerep/rng.hpp"
#include "gamerep/split.hpp"

using namespace gamerep;

namespace {

Manifest table_style_manifest() {
  // Layout in the style of a real corpus inventory: games bucketed per genre
  // across three styling categories.
  Manifest m;
  m.image_h = 32;
  m.image_w = 32;
  m.genres = {{0, "soccer"}, {1, "racing"}, {2, "fighting"}};
  m.styles = {{0, "retro"}, {1, "modern"}, {2, "photoreal"}};
  int uid = 0;
  auto add_games = [&](int genre, int style, int count) {
    for (int i = 0; i < count; ++i) {
      GameEntry g;
      g.id = "game" + std::to_string(uid++);
      g.genre_id = genre;
      g.style_id = style;
      g.images = {"img.png"};
      m.games.push_back(g);
    }
  };
  add_games(0, 0, 2);
  add_games(0, 1, 3);
  add_games(0, 2, 2);
  add_games(1, 0, 3);
  add_games(1, 1, 2);
  add_games(2, 1, 4);
  add_games(2, 2, 2);
  return m;
}

Manifest random_manifest(Rng& rng) {
  Manifest m;
  m.image_h = 16;
  m.image_w = 16;
  const int genres = static_cast<int>(2 + rng.below(6));
  const int styles = static_cast<int>(1 + rng.below(4));
  for (int g = 0; g < genres; ++g) m.genres.push_back({g, "g" + std::to_string(g)});
  for (int s = 0; s < styles; ++s) m.styles.push_back({s, "s" + std::to_string(s)});
  int uid = 0;
  for (int g = 0; g < genres; ++g) {
    const int count = static_cast<int>(2 + rng.below(9));
    for (int i = 0; i < count; ++i) {
      GameEntry e;
      e.id = "game" + std::to_string(uid++);
      e.genre_id = g;
      e.style_id = static_cast<int>(rng.below(static_cast<std::uint64_t>(styles)));
      e.images = {"x.png"};
      m.games.push_back(e);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("manifest json round trip preserves structure") {
  const Manifest m = table_style_manifest();
  const Manifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.games.size() == m.games.size());
  CHECK(back.genres.size() == 3);
  CHECK(back.styles.size() == 3);
  std::map<int, std::map<int, int>> counts;
  for (const auto& g : back.games) counts[g.genre_id][g.style_id] += 1;
  CHECK(counts[0][1] == 3);
  CHECK(counts[2][1] == 4);
  CHECK(back.image_h == 32);
}

TEST_CASE("manifest validation rejects each violation with its own code") {
  auto expect_code = [](Manifest m, const std::string& code) {
    try {
      validate_manifest(m);
      FAIL("expected rejection: ", code);
    } catch (const Error& e) {
      CHECK(e.code() == code);
      CHECK(e.kind() == ErrorKind::data);
    }
  };

  {
    Manifest m = table_style_manifest();
    m.games.clear();
    expect_code(m, "empty-manifest");
  }
  {
    Manifest m = table_style_manifest();
    m.games.push_back(m.games[0]);  // same id listed again (under another genre)
    m.games.back().genre_id = 1;
    expect_code(m, "duplicate-game");
  }
  {
    Manifest m = table_style_manifest();
    // Strip genre 2 down to one game.
    std::vector<GameEntry> keep;
    int seen = 0;
    for (const auto& g : m.games)
      if (g.genre_id != 2 || seen++ == 0) keep.push_back(g);
    m.games = keep;
    expect_code(m, "genre-too-small");
  }
  {
    Manifest m = table_style_manifest();
    m.games[0].style_id = 99;
    expect_code(m, "schema");
  }
  {
    Manifest m = table_style_manifest();
    m.genres[1].id = 5;  // ids no longer dense
    expect_code(m, "schema");
  }
}

TEST_CASE("load_manifest distinguishes missing files from parse errors") {
  try {
    load_manifest("/nonexistent/manifest.json");
    FAIL("expected missing-file");
  } catch (const Error& e) {
    CHECK(e.code() == "missing-file");
  }
  const auto path = std::filesystem::temp_directory_path() / "gamerep_badmanifest.json";
  std::ofstream(path) << "{ not json";
  try {
    load_manifest(path.string());
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.code() == "schema");
  }
  std::filesystem::remove(path);
}

TEST_CASE("split on the fixture: 4 games per genre at 0.75 gives 3/1") {
  Manifest m;
  m.image_h = m.image_w = 16;
  m.genres = {{0, "a"}, {1, "b"}};
  m.styles = {{0, "s"}};
  for (int g = 0; g < 2; ++g)
    for (int i = 0; i < 4; ++i) {
      GameEntry e;
      e.id = "g" + std::to_string(g) + "_" + std::to_string(i);
      e.genre_id = g;
      e.style_id = 0;
      e.images = {"x.png"};
      m.games.push_back(e);
    }
  const SplitSpec s = stratified_game_split(m, 0.75, 3);
  std::map<int, int> train_per_genre;
  for (const auto& id : s.train_games) train_per_genre[m.find_game(id)->genre_id] += 1;
  CHECK(train_per_genre[0] == 3);
  CHECK(train_per_genre[1] == 3);
  CHECK(s.val_games.size() == 2);
}

TEST_CASE("style buckets {retro:4, modern:4} at 0.75 give 3 + 3 in train") {
  // Enumerated by the quota rule: target = round(0.75 * 8) = 6, and each
  // 4-game bucket contributes floor(6 * 4/8) = 3 with no remainder.
  Manifest m;
  m.image_h = m.image_w = 16;
  m.genres = {{0, "genre"}, {1, "other"}};
  m.styles = {{0, "retro"}, {1, "modern"}};
  for (int i = 0; i < 4; ++i) {
    GameEntry e;
    e.id = "retro" + std::to_string(i);
    e.genre_id = 0;
    e.style_id = 0;
    e.images = {"x.png"};
    m.games.push_back(e);
  }
  for (int i = 0; i < 4; ++i) {
    GameEntry e;
    e.id = "modern" + std::to_string(i);
    e.genre_id = 0;
    e.style_id = 1;
    e.images = {"x.png"};
    m.games.push_back(e);
  }
  for (int i = 0; i < 2; ++i) {
    GameEntry e;
    e.id = "pad" + std::to_string(i);
    e.genre_id = 1;
    e.style_id = 0;
    e.images = {"x.png"};
    m.games.push_back(e);
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SplitSpec s = stratified_game_split(m, 0.75, seed);
    int retro = 0, modern = 0;
    for (const auto& id : s.train_games) {
      const GameEntry* g = m.find_game(id);
      if (g->genre_id != 0) continue;
      (g->style_id == 0 ? retro : modern) += 1;
    }
    CHECK(retro == 3);
    CHECK(modern == 3);
  }
}

TEST_CASE("property: 1000 random manifests split cleanly") {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const Manifest m = random_manifest(rng);
    const double ratio = rng.uniform(0.05, 0.95);
    const std::uint64_t seed = rng.u64();
    const SplitSpec s = stratified_game_split(m, ratio, seed);

    // Disjoint + total.
    std::set<std::string> train(s.train_games.begin(), s.train_games.end());
    std::set<std::string> val(s.val_games.begin(), s.val_games.end());
    CHECK(train.size() + val.size() == m.games.size());
    for (const auto& id : val) CHECK(train.count(id) == 0);

    // Per genre: both sides non-empty and within one game of the target.
    std::map<int, int> total_g, train_g;
    for (const auto& g : m.games) {
      total_g[g.genre_id] += 1;
      if (train.count(g.id)) train_g[g.genre_id] += 1;
    }
    for (const auto& [genre, total] : total_g) {
      const int t = train_g[genre];
      CHECK(t >= 1);
      CHECK(t <= total - 1);
      CHECK(std::abs(t - ratio * total) <= 1.0 + 1e-9);
    }

    // Determinism.
    const SplitSpec again = stratified_game_split(m, ratio, seed);
    CHECK(again.train_games == s.train_games);
    CHECK(again.val_games == s.val_games);
  }
}

TEST_CASE("split rejects bad ratios and infeasible genres") {
  const Manifest m = table_style_manifest();
  CHECK_THROWS_AS(stratified_game_split(m, 0.0, 1), Error);
  CHECK_THROWS_AS(stratified_game_split(m, 1.0, 1), Error);

  Manifest bad = m;
  GameEntry lone;
  lone.id = "lone";
  lone.genre_id = 3;
  lone.style_id = 0;
  lone.images = {"x.png"};
  bad.genres.push_back({3, "lonely"});
  bad.games.push_back(lone);
  try {
    stratified_game_split(bad, 0.75, 1);
    FAIL("expected infeasible split");
  } catch (const Error& e) {
    // Rejected during validation (the genre has < 2 games).
    CHECK(e.kind() == ErrorKind::data);
  }
}

TEST_CASE("split json round trip") {
  const Manifest m = table_style_manifest();
  const SplitSpec s = stratified_game_split(m, 0.6, 17);
  const SplitSpec back = split_from_json(split_to_json(s));
  CHECK(back.train_games == s.train_games);
  CHECK(back.val_games == s.val_games);
  CHECK(back.ratio == s.ratio);
  CHECK(back.seed == s.seed);
  validate_split(m, back);
}

TEST_CASE("validate_split rejects stale or foreign splits") {
  const Manifest m = table_style_manifest();
  SplitSpec s = stratified_game_split(m, 0.6, 17);
  s.val_games.pop_back();
  CHECK_THROWS_AS(validate_split(m, s), Error);
  SplitSpec s2 = stratified_game_split(m, 0.6, 17);
  s2.train_games.push_back("unknown-game");
  CHECK_THROWS_AS(validate_split(m, s2), Error);
}
