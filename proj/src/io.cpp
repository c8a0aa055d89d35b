#include "coopnet/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "coopnet/errors.hpp"

namespace coopnet::io {

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw data_error(context + ": " + message);
}

long long require_int(const Json& j, const std::string& context) {
  if (!j.is_number_integer()) fail(context, "expected an integer");
  return j.get<long long>();
}

PlayerSet read_players(const Json& j, const std::string& context) {
  if (!j.contains("players")) fail(context, "missing \"players\"");
  long long n = require_int(j["players"], context + ".players");
  if (n < 1 || n > kMaxPlayers) {
    fail(context + ".players", "player count must be between 1 and " + std::to_string(kMaxPlayers));
  }
  return PlayerSet(static_cast<int>(n));
}

Link read_link(const Json& j, int n, const std::string& context) {
  if (!j.is_array() || j.size() != 2) fail(context, "a link must be a pair [i,j]");
  long long a = require_int(j[0], context + "[0]");
  long long b = require_int(j[1], context + "[1]");
  if (a < 1 || a > n || b < 1 || b > n) {
    fail(context, "endpoint out of range 1.." + std::to_string(n));
  }
  if (a == b) fail(context, "self-loops are not allowed");
  return Link(static_cast<Player>(a), static_cast<Player>(b));
}

PlayerMask read_player_list(const Json& j, int n, const std::string& context,
                            bool require_ascending = true) {
  if (!j.is_array() || j.empty()) fail(context, "expected a nonempty array of players");
  PlayerMask m = 0;
  long long prev = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    long long p = require_int(j[i], context + "[" + std::to_string(i) + "]");
    if (p < 1 || p > n) {
      fail(context + "[" + std::to_string(i) + "]", "player out of range 1.." + std::to_string(n));
    }
    if (require_ascending && p <= prev) {
      fail(context, "players must be listed in ascending order without repeats");
    }
    prev = p;
    m |= player_bit(static_cast<Player>(p));
  }
  return m;
}

Json player_list_json(PlayerMask m) {
  Json out = Json::array();
  for (Player p : players_of(m)) out.push_back(p);
  return out;
}

Json partition_json(const Partition& p) {
  Json out = Json::array();
  for (PlayerMask b : p.blocks()) out.push_back(player_list_json(b));
  return out;
}

Partition read_partition(const Json& j, PlayerSet players, const std::string& context) {
  if (!j.is_array() || j.empty()) fail(context, "a partition must be a nonempty array of blocks");
  std::vector<PlayerMask> blocks;
  Player prev_min = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    PlayerMask b = read_player_list(j[i], players.n, context + "[" + std::to_string(i) + "]");
    if (min_player(b) <= prev_min) fail(context, "blocks must be sorted by their least player");
    prev_min = min_player(b);
    blocks.push_back(b);
  }
  try {
    return Partition(players, std::move(blocks));
  } catch (const std::exception& e) {
    fail(context, e.what());
  }
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error(path + ": cannot open file for writing");
  out << text;
  if (!out) throw data_error(path + ": write failed");
}

Json rational_to_json(const Rational& r) { return Json(r.to_string()); }

Rational rational_from_json(const Json& j, const std::string& context) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return Rational::from_string(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(context, e.what());
    }
  }
  fail(context, "expected an integer or a \"p/q\" string");
}

Json network_to_json(const Network& g) {
  Json out;
  out["players"] = g.player_count();
  Json links = Json::array();
  for (const Link& l : g.links()) links.push_back(Json::array({l.a, l.b}));
  out["links"] = std::move(links);
  return out;
}

Network network_from_json(const Json& j) {
  const std::string context = "network";
  if (!j.is_object()) fail(context, "expected an object");
  PlayerSet players = read_players(j, context);
  if (!j.contains("links")) fail(context, "missing \"links\"");
  const Json& links_json = j["links"];
  if (!links_json.is_array()) fail(context + ".links", "expected an array");
  std::vector<Link> links;
  for (std::size_t i = 0; i < links_json.size(); ++i) {
    Link l = read_link(links_json[i], players.n, context + ".links[" + std::to_string(i) + "]");
    if (std::find(links.begin(), links.end(), l) != links.end()) {
      fail(context + ".links[" + std::to_string(i) + "]",
           "duplicate link {" + std::to_string(l.a) + "," + std::to_string(l.b) + "}");
    }
    links.push_back(l);
  }
  return Network(players, std::move(links));
}

Network read_network_file(const std::string& path) {
  try {
    return network_from_json(parse_file(path));
  } catch (const data_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

std::string LoadedGame::kind_name() const {
  switch (kind) {
    case Kind::tu: return "tu";
    case Kind::pff: return "pff";
    case Kind::worth_table: return "worth-table";
    case Kind::linked_beneficiary: return "linked-beneficiary";
  }
  return "?";
}

namespace {

LoadedGame load_tu(const Json& j, PlayerSet players, const std::string& source) {
  TuGame game(players);
  if (j.contains("worths")) {
    const Json& worths = j["worths"];
    if (!worths.is_object()) fail("tu.worths", "expected an object");
    for (const auto& [key, value] : worths.items()) {
      std::string context = "tu.worths[\"" + key + "\"]";
      PlayerMask coalition = 0;
      long long prev = 0;
      std::stringstream ss(key);
      std::string part;
      while (std::getline(ss, part, ',')) {
        long long p;
        try {
          std::size_t used = 0;
          p = std::stoll(part, &used);
          if (used != part.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
          fail(context, "coalition key must be a comma-joined ascending player list");
        }
        if (p < 1 || p > players.n) fail(context, "player out of range 1.." + std::to_string(players.n));
        if (p <= prev) fail(context, "players must be ascending without repeats");
        prev = p;
        coalition |= player_bit(static_cast<Player>(p));
      }
      if (coalition == 0) fail(context, "coalition key must list at least one player");
      game.set(coalition, rational_from_json(value, context));
    }
  }
  WorthFunction worth = WorthFunction::from_tu(game);
  return LoadedGame{LoadedGame::Kind::tu, players, std::move(game), std::nullopt,
                    {},       0,       std::nullopt, std::move(worth), source};
}

LoadedGame load_pff(const Json& j, PlayerSet players, const std::string& source) {
  PffGame game(players);
  if (j.contains("entries")) {
    const Json& entries = j["entries"];
    if (!entries.is_array()) fail("pff.entries", "expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      std::string context = "pff.entries[" + std::to_string(i) + "]";
      const Json& e = entries[i];
      if (!e.is_object() || !e.contains("coalition") || !e.contains("partition") ||
          !e.contains("worth")) {
        fail(context, "each entry needs \"coalition\", \"partition\" and \"worth\"");
      }
      PlayerMask coalition = read_player_list(e["coalition"], players.n, context + ".coalition");
      Partition partition = read_partition(e["partition"], players, context + ".partition");
      if (!partition.has_block(coalition)) {
        fail(context, "coalition " + subset_to_string(coalition) + " is not a block of " +
                          partition_to_string(partition));
      }
      if (!game.value(coalition, partition).is_zero()) fail(context, "duplicate embedded coalition");
      game.set(EmbeddedCoalition(coalition, partition),
               rational_from_json(e["worth"], context + ".worth"));
    }
  }
  WorthFunction worth = WorthFunction::from_pff(game);
  return LoadedGame{LoadedGame::Kind::pff, players, std::nullopt, std::move(game),
                    {},        0,        std::nullopt, std::move(worth), source};
}

LoadedGame load_worth_table(const Json& j, PlayerSet players, const std::string& source) {
  std::vector<WorthTableEntry> entries;
  if (j.contains("entries")) {
    const Json& list = j["entries"];
    if (!list.is_array()) fail("worth-table.entries", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string context = "worth-table.entries[" + std::to_string(i) + "]";
      const Json& e = list[i];
      if (!e.is_object() || !e.contains("component") || !e.contains("network") ||
          !e.contains("worth")) {
        fail(context, "each entry needs \"component\", \"network\" and \"worth\"");
      }
      PlayerMask component = read_player_list(e["component"], players.n, context + ".component");
      const Json& links_json = e["network"];
      if (!links_json.is_array()) fail(context + ".network", "expected an array of links");
      std::vector<Link> links;
      for (std::size_t k = 0; k < links_json.size(); ++k) {
        links.push_back(
            read_link(links_json[k], players.n, context + ".network[" + std::to_string(k) + "]"));
      }
      Network net(players, std::move(links));
      if (!components(net).has_block(component)) {
        fail(context, subset_to_string(component) + " is not a component of " +
                          network_to_string(net));
      }
      entries.push_back(WorthTableEntry{component, std::move(net),
                                        rational_from_json(e["worth"], context + ".worth")});
    }
  }
  std::vector<WorthTableEntry> copy = entries;
  WorthFunction worth = WorthFunction::table(players, std::move(copy));
  return LoadedGame{LoadedGame::Kind::worth_table, players, std::nullopt, std::nullopt,
                    std::move(entries), 0, std::nullopt, std::move(worth), source};
}

LoadedGame load_linked_beneficiary(const Json& j, PlayerSet players, const std::string& source) {
  if (!j.contains("beneficiary") || !j.contains("pair")) {
    fail("linked-beneficiary", "needs \"beneficiary\" and \"pair\"");
  }
  long long b = require_int(j["beneficiary"], "linked-beneficiary.beneficiary");
  if (b < 1 || b > players.n) fail("linked-beneficiary.beneficiary", "player out of range");
  Link pair = read_link(j["pair"], players.n, "linked-beneficiary.pair");
  WorthFunction worth =
      WorthFunction::linked_beneficiary(players, static_cast<Player>(b), pair);
  return LoadedGame{LoadedGame::Kind::linked_beneficiary,
                    players,
                    std::nullopt,
                    std::nullopt,
                    {},
                    static_cast<Player>(b),
                    pair,
                    std::move(worth),
                    source};
}

}  // namespace

LoadedGame game_from_json(const Json& j, const std::string& source) {
  if (!j.is_object()) throw data_error(source + ": a game file must hold an object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw data_error(source + ": missing \"kind\" discriminator");
  }
  std::string kind = j["kind"].get<std::string>();
  try {
    PlayerSet players = read_players(j, kind);
    if (kind == "tu") return load_tu(j, players, source);
    if (kind == "pff") return load_pff(j, players, source);
    if (kind == "worth-table") return load_worth_table(j, players, source);
    if (kind == "linked-beneficiary") return load_linked_beneficiary(j, players, source);
  } catch (const data_error&) {
    throw;
  } catch (const std::exception& e) {
    throw data_error(source + ": " + e.what());
  }
  throw data_error(source + ": unknown game kind \"" + kind + "\"");
}

LoadedGame read_game_file(const std::string& path) {
  try {
    return game_from_json(parse_file(path), path);
  } catch (const data_error& e) {
    std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw data_error(path + ": " + what);
  }
}

Json tu_to_json(const TuGame& v) {
  Json out;
  out["kind"] = "tu";
  out["players"] = v.players().n;
  Json worths = Json::object();
  for (const auto& [coalition, worth] : v.worths()) {
    std::string key;
    for (Player p : players_of(coalition)) {
      if (!key.empty()) key += ",";
      key += std::to_string(p);
    }
    worths[key] = rational_to_json(worth);
  }
  out["worths"] = std::move(worths);
  return out;
}

Json pff_to_json(const PffGame& v) {
  Json out;
  out["kind"] = "pff";
  out["players"] = v.players().n;
  Json entries = Json::array();
  for (const auto& [ec, worth] : v.entries()) {
    Json e;
    e["coalition"] = player_list_json(ec.coalition);
    e["partition"] = partition_json(ec.partition);
    e["worth"] = rational_to_json(worth);
    entries.push_back(std::move(e));
  }
  out["entries"] = std::move(entries);
  return out;
}

Json worth_table_to_json(PlayerSet players, std::vector<WorthTableEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const WorthTableEntry& a, const WorthTableEntry& b) {
    if (a.network.link_mask() != b.network.link_mask()) {
      return a.network.link_mask() < b.network.link_mask();
    }
    return a.component < b.component;
  });
  Json out;
  out["kind"] = "worth-table";
  out["players"] = players.n;
  Json list = Json::array();
  for (const WorthTableEntry& e : entries) {
    if (e.worth.is_zero()) continue;
    Json entry;
    entry["component"] = player_list_json(e.component);
    Json links = Json::array();
    for (const Link& l : e.network.links()) links.push_back(Json::array({l.a, l.b}));
    entry["network"] = std::move(links);
    entry["worth"] = rational_to_json(e.worth);
    list.push_back(std::move(entry));
  }
  out["entries"] = std::move(list);
  return out;
}

Json linked_beneficiary_to_json(PlayerSet players, Player beneficiary, Link pair) {
  Json out;
  out["kind"] = "linked-beneficiary";
  out["players"] = players.n;
  out["beneficiary"] = beneficiary;
  out["pair"] = Json::array({pair.a, pair.b});
  return out;
}

Json allocation_to_json(const Allocation& a, const std::string& rule) {
  Json out;
  out["kind"] = "allocation";
  if (!rule.empty()) out["rule"] = rule;
  out["players"] = a.players.n;
  Json payoffs = Json::object();
  for (Player p = 1; p <= a.players.n; ++p) payoffs[std::to_string(p)] = rational_to_json(a[p]);
  out["payoffs"] = std::move(payoffs);
  return out;
}

Allocation allocation_from_json(const Json& j) {
  const std::string context = "allocation";
  if (!j.is_object()) fail(context, "expected an object");
  PlayerSet players = read_players(j, context);
  if (!j.contains("payoffs") || !j["payoffs"].is_object()) fail(context, "missing \"payoffs\"");
  Allocation out(players);
  PlayerMask seen = 0;
  for (const auto& [key, value] : j["payoffs"].items()) {
    long long p;
    try {
      p = std::stoll(key);
    } catch (const std::exception&) {
      fail(context + ".payoffs", "keys must be player numbers");
    }
    if (p < 1 || p > players.n) fail(context + ".payoffs", "player out of range");
    out[static_cast<Player>(p)] = rational_from_json(value, context + ".payoffs[\"" + key + "\"]");
    seen |= player_bit(static_cast<Player>(p));
  }
  if (seen != players.all()) fail(context + ".payoffs", "every player needs a payoff");
  return out;
}

Json dividends_to_json(const DividendTable& d) {
  Json out;
  out["kind"] = "dividends";
  out["players"] = d.players();
  Json entries = Json::array();
  for (const auto& [ec, coeff] : d.nonzero()) {
    Json e;
    e["coalition"] = player_list_json(ec.coalition);
    e["partition"] = partition_json(ec.partition);
    e["dividend"] = rational_to_json(coeff);
    entries.push_back(std::move(e));
  }
  out["entries"] = std::move(entries);
  return out;
}

Json audit_reports_to_json(const std::vector<AuditReport>& reports) {
  Json out;
  out["kind"] = "audit-report";
  Json list = Json::array();
  for (const AuditReport& r : reports) {
    Json entry;
    entry["axiom"] = r.axiom;
    entry["rule"] = r.rule;
    entry["game"] = r.game;
    entry["network"] = r.network;
    entry["checked"] = r.checked;
    Json violations = Json::array();
    for (const Violation& v : r.violations) {
      Json vi;
      Json players = Json::array();
      for (Player p : v.players) players.push_back(p);
      vi["players"] = std::move(players);
      Json nets = Json::array();
      for (const Network& n : v.networks) nets.push_back(network_to_json(n));
      vi["networks"] = std::move(nets);
      vi["lhs"] = rational_to_json(v.lhs);
      vi["rhs"] = rational_to_json(v.rhs);
      if (!v.note.empty()) vi["note"] = v.note;
      violations.push_back(std::move(vi));
    }
    entry["violations"] = std::move(violations);
    list.push_back(std::move(entry));
  }
  out["reports"] = std::move(list);
  return out;
}

Json oracle_report_to_json(const OracleReport& report, const std::string& axiom) {
  Json out;
  out["kind"] = "oracle-report";
  out["axiom"] = axiom;
  out["consistent"] = report.consistent;
  out["full_rank"] = report.full_rank;
  out["networks_solved"] = report.networks_solved;
  if (!report.issue.empty()) out["issue"] = report.issue;
  Json payoffs = Json::object();
  for (Player p = 1; p <= report.allocation.players.n; ++p) {
    payoffs[std::to_string(p)] = rational_to_json(report.allocation[p]);
  }
  out["payoffs"] = std::move(payoffs);
  return out;
}

}  // namespace coopnet::io
