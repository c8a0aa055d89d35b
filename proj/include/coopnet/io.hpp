#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coopnet/axioms.hpp"
#include "coopnet/games.hpp"
#include "coopnet/netcore.hpp"
#include "coopnet/values.hpp"

namespace coopnet::io {

// ordered_json keeps insertion order, so every writer below is byte
// deterministic
using Json = nlohmann::ordered_json;

std::string dump(const Json& j);  // 2-space indent, trailing newline
Json parse_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& context);

Json network_to_json(const Network& g);
Network network_from_json(const Json& j);
Network read_network_file(const std::string& path);

// A game file of any kind, always usable as a worth function.
struct LoadedGame {
  enum class Kind { tu, pff, worth_table, linked_beneficiary };
  Kind kind;
  PlayerSet players;
  std::optional<TuGame> tu;
  std::optional<PffGame> pff;
  std::vector<WorthTableEntry> table_entries;  // worth_table only
  Player beneficiary = 0;                      // linked_beneficiary only
  std::optional<Link> pair;                    // linked_beneficiary only
  WorthFunction worth;
  std::string source;

  std::string kind_name() const;
};

LoadedGame game_from_json(const Json& j, const std::string& source);
LoadedGame read_game_file(const std::string& path);

Json tu_to_json(const TuGame& v);
Json pff_to_json(const PffGame& v);
Json worth_table_to_json(PlayerSet players, std::vector<WorthTableEntry> entries);
Json linked_beneficiary_to_json(PlayerSet players, Player beneficiary, Link pair);

Json allocation_to_json(const Allocation& a, const std::string& rule = "");
Allocation allocation_from_json(const Json& j);

Json dividends_to_json(const DividendTable& d);
Json audit_reports_to_json(const std::vector<AuditReport>& reports);
Json oracle_report_to_json(const OracleReport& report, const std::string& axiom);

}  // namespace coopnet::io
