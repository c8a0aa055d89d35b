#include "coopnet/io.hpp"

#include "doctest.h"

#include "coopnet/errors.hpp"
#include "support.hpp"

using namespace coopnet;
using io::Json;
using testsupport::Rng;

namespace {

Network net(int n, std::initializer_list<std::pair<int, int>> links) {
  std::vector<Link> ls;
  for (auto [a, b] : links) ls.emplace_back(a, b);
  return Network(PlayerSet(n), std::move(ls));
}

}  // namespace

TEST_CASE("network json round trip and canonical bytes") {
  Network g = net(3, {{1, 3}, {1, 2}});
  Json j = io::network_to_json(g);
  CHECK(io::network_from_json(j) == g);
  CHECK(io::dump(j) == "{\n  \"players\": 3,\n  \"links\": [\n    [\n      1,\n      2\n    ],\n    [\n      1,\n      3\n    ]\n  ]\n}\n");
  CHECK(io::dump(io::network_to_json(io::network_from_json(j))) == io::dump(j));
}

TEST_CASE("network reader rejections carry the offending field") {
  auto parse = [](const char* text) { return io::network_from_json(Json::parse(text)); };
  CHECK_THROWS_WITH_AS(parse(R"({"players":3,"links":[[1,1]]})"),
                       doctest::Contains("links[0]"), data_error);
  CHECK_THROWS_WITH_AS(parse(R"({"players":3,"links":[[1,2],[2,1]]})"),
                       doctest::Contains("duplicate"), data_error);
  CHECK_THROWS_WITH_AS(parse(R"({"players":3,"links":[[1,4]]})"),
                       doctest::Contains("out of range"), data_error);
  CHECK_THROWS_AS(parse(R"({"players":0,"links":[]})"), data_error);
  CHECK_THROWS_AS(parse(R"({"players":3})"), data_error);
  CHECK_THROWS_AS(parse(R"({"links":[]})"), data_error);
  CHECK_THROWS_AS(parse(R"({"players":3,"links":[[1]]})"), data_error);
  CHECK_THROWS_AS(parse(R"({"players":3,"links":[["a",2]]})"), data_error);
}

TEST_CASE("rational json forms") {
  CHECK(io::rational_from_json(Json(5), "x") == Rational(5));
  CHECK(io::rational_from_json(Json("5/2"), "x") == Rational(5, 2));
  CHECK(io::rational_from_json(Json("-7"), "x") == Rational(-7));
  CHECK_THROWS_AS(io::rational_from_json(Json(0.5), "x"), data_error);
  CHECK_THROWS_AS(io::rational_from_json(Json("1/0"), "x"), data_error);
  CHECK(io::rational_to_json(Rational(5, 2)) == Json("5/2"));
  CHECK(io::rational_to_json(Rational(-3)) == Json("-3"));
}

TEST_CASE("tu game files") {
  Json j = Json::parse(R"({"kind":"tu","players":3,"worths":{"1,3":"1","1,2,3":"5/2"}})");
  io::LoadedGame game = io::game_from_json(j, "<memory>");
  CHECK(game.kind == io::LoadedGame::Kind::tu);
  REQUIRE(game.tu.has_value());
  CHECK(game.tu->value(mask_of({1, 3})) == Rational(1));
  CHECK(game.tu->value(mask_of({1, 2, 3})) == Rational(5, 2));
  CHECK(game.tu->value(mask_of({2})) == Rational(0));
  // round trip through the writer
  Json out = io::tu_to_json(*game.tu);
  io::LoadedGame again = io::game_from_json(out, "<memory>");
  CHECK(*again.tu == *game.tu);

  CHECK_THROWS_WITH_AS(
      io::game_from_json(Json::parse(R"({"kind":"tu","players":3,"worths":{"3,1":"1"}})"), "m"),
      doctest::Contains("ascending"), data_error);
  CHECK_THROWS_AS(
      io::game_from_json(Json::parse(R"({"kind":"tu","players":3,"worths":{"1,4":"1"}})"), "m"),
      data_error);
  CHECK_THROWS_AS(
      io::game_from_json(Json::parse(R"({"kind":"tu","players":3,"worths":{"":"1"}})"), "m"),
      data_error);
}

TEST_CASE("pff game files") {
  Json j = Json::parse(R"({
    "kind":"pff","players":3,
    "entries":[
      {"coalition":[3],"partition":[[1,2],[3]],"worth":"1"},
      {"coalition":[1,2,3],"partition":[[1,2,3]],"worth":1}
    ]})");
  io::LoadedGame game = io::game_from_json(j, "<memory>");
  REQUIRE(game.pff.has_value());
  PlayerSet three(3);
  CHECK(game.pff->value(mask_of({3}), Partition(three, {mask_of({1, 2}), mask_of({3})})) ==
        Rational(1));
  Json out = io::pff_to_json(*game.pff);
  CHECK(*io::game_from_json(out, "m").pff == *game.pff);

  CHECK_THROWS_WITH_AS(
      io::game_from_json(
          Json::parse(
              R"({"kind":"pff","players":3,"entries":[{"coalition":[1,3],"partition":[[1,2],[3]],"worth":1}]})"),
          "m"),
      doctest::Contains("not a block"), data_error);
  CHECK_THROWS_WITH_AS(
      io::game_from_json(
          Json::parse(
              R"({"kind":"pff","players":3,"entries":[{"coalition":[3],"partition":[[3],[1,2]],"worth":1}]})"),
          "m"),
      doctest::Contains("sorted"), data_error);
  CHECK_THROWS_WITH_AS(
      io::game_from_json(
          Json::parse(
              R"({"kind":"pff","players":3,"entries":[{"coalition":[3],"partition":[[1,2],[3]],"worth":1},{"coalition":[3],"partition":[[1,2],[3]],"worth":2}]})"),
          "m"),
      doctest::Contains("duplicate"), data_error);
}

TEST_CASE("worth table files") {
  Json j = Json::parse(R"({
    "kind":"worth-table","players":3,
    "entries":[{"component":[3],"network":[[1,2]],"worth":1}]})");
  io::LoadedGame game = io::game_from_json(j, "<memory>");
  CHECK(game.kind == io::LoadedGame::Kind::worth_table);
  CHECK(game.worth(mask_of({3}), net(3, {{1, 2}})) == Rational(1));
  CHECK(game.worth(mask_of({1, 2}), net(3, {{1, 2}})) == Rational(0));

  Json out = io::worth_table_to_json(game.players, game.table_entries);
  io::LoadedGame again = io::game_from_json(out, "m");
  CHECK(io::dump(io::worth_table_to_json(again.players, again.table_entries)) == io::dump(out));

  CHECK_THROWS_WITH_AS(
      io::game_from_json(
          Json::parse(
              R"({"kind":"worth-table","players":3,"entries":[{"component":[1,2],"network":[[1,3]],"worth":1}]})"),
          "m"),
      doctest::Contains("not a component"), data_error);
}

TEST_CASE("linked beneficiary files") {
  Json j = Json::parse(R"({"kind":"linked-beneficiary","players":3,"beneficiary":3,"pair":[1,2]})");
  io::LoadedGame game = io::game_from_json(j, "<memory>");
  CHECK(game.kind == io::LoadedGame::Kind::linked_beneficiary);
  CHECK(game.beneficiary == 3);
  CHECK(game.worth(mask_of({3}), net(3, {{1, 2}})) == Rational(1));
  Json out = io::linked_beneficiary_to_json(game.players, game.beneficiary, *game.pair);
  CHECK(io::dump(out) == io::dump(j));

  CHECK_THROWS_AS(
      io::game_from_json(Json::parse(R"({"kind":"linked-beneficiary","players":3})"), "m"),
      data_error);
  CHECK_THROWS_AS(io::game_from_json(Json::parse(R"({"kind":"nope","players":3})"), "m"),
                  data_error);
  CHECK_THROWS_AS(io::game_from_json(Json::parse(R"({"players":3})"), "m"), data_error);
}

TEST_CASE("allocation json round trip") {
  Allocation a(PlayerSet(3));
  a[1] = Rational(1, 3);
  a[2] = Rational(-2);
  a[3] = Rational(5, 2);
  Json j = io::allocation_to_json(a, "bce");
  CHECK(io::allocation_from_json(j) == a);
  CHECK(j["rule"] == "bce");
  CHECK_THROWS_AS(
      io::allocation_from_json(Json::parse(R"({"kind":"allocation","players":2,"payoffs":{"1":"0"}})")),
      data_error);
}

TEST_CASE("writers are byte deterministic") {
  Rng rng(61);
  PffGame v = testsupport::random_pff_game(rng, PlayerSet(4));
  std::string once = io::dump(io::pff_to_json(v));
  std::string twice = io::dump(io::pff_to_json(v));
  CHECK(once == twice);
  io::LoadedGame back = io::game_from_json(Json::parse(once), "m");
  CHECK(io::dump(io::pff_to_json(*back.pff)) == once);

  TuGame t = testsupport::random_tu_game(rng, PlayerSet(4));
  std::string tu_once = io::dump(io::tu_to_json(t));
  CHECK(io::dump(io::tu_to_json(*io::game_from_json(Json::parse(tu_once), "m").tu)) == tu_once);
}

TEST_CASE("file io reports the path on errors") {
  CHECK_THROWS_WITH_AS(io::read_network_file("/nonexistent/net.json"),
                       doctest::Contains("/nonexistent/net.json"), data_error);
  CHECK_THROWS_WITH_AS(io::read_game_file("/nonexistent/game.json"),
                       doctest::Contains("/nonexistent/game.json"), data_error);
}
