#include "coopnet/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "coopnet/axioms.hpp"
#include "coopnet/errors.hpp"
#include "coopnet/games.hpp"
#include "coopnet/io.hpp"
#include "coopnet/netcore.hpp"
#include "coopnet/values.hpp"

namespace coopnet {

namespace {

using io::Json;
using io::LoadedGame;

constexpr int kExitPass = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitResource = 4;

struct Caps {
  int players = kDefaultPlayerCap;
  int links = kDefaultLinkCap;
};

void check_player_cap(int n, const Caps& caps) {
  if (n > caps.players) {
    throw resource_limit_error("input uses " + std::to_string(n) +
                               " players, over the configured cap " + std::to_string(caps.players));
  }
}

LoadedGame load_game(const std::string& path, const Caps& caps) {
  LoadedGame game = io::read_game_file(path);
  check_player_cap(game.players.n, caps);
  return game;
}

// the link cap is not checked here: it guards only the link-subset
// recursions (fce-direct and the fairness oracle), which check it themselves
Network load_network(const std::string& path, const Caps& caps) {
  Network g = io::read_network_file(path);
  check_player_cap(g.player_count(), caps);
  return g;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int usage_error(std::ostream& err, const std::string& message) {
  err << "usage error: " << message << "\n";
  return kExitUsage;
}

RuleUnderTest rule_by_name(const std::string& name, std::uint64_t seed, int link_cap) {
  if (name == "bce") return bce_rule();
  if (name == "fce") return fce_rule();
  if (name == "fce-direct") return fce_direct_rule(link_cap);
  if (name == "hash") return seeded_rule(seed);
  if (name == "zero") return zero_rule();
  throw data_error("unknown rule \"" + name + "\"");
}

// --- compute -----------------------------------------------------------------

struct ComputeOptions {
  std::string rule;
  std::string game_path;
  std::string network_path;
  std::string format = "table";
  Caps caps;
};

int cmd_compute(const ComputeOptions& opt, std::ostream& out, std::ostream& err) {
  LoadedGame game = load_game(opt.game_path, opt.caps);
  const bool needs_network =
      opt.rule == "bce" || opt.rule == "fce" || opt.rule == "fce-direct" || opt.rule == "jw" ||
      opt.rule == "myerson";
  if (needs_network && opt.network_path.empty()) {
    return usage_error(err, "rule " + opt.rule + " needs --network");
  }
  if (!needs_network && !opt.network_path.empty()) {
    return usage_error(err, "rule " + opt.rule + " takes no --network");
  }

  Allocation alloc(game.players);
  if (opt.rule == "shapley" || opt.rule == "myerson") {
    if (!game.tu) {
      return usage_error(err, "rule " + opt.rule + " needs a tu game (got " + game.kind_name() + ")");
    }
    alloc = opt.rule == "shapley" ? shapley(*game.tu)
                                  : myerson(*game.tu, load_network(opt.network_path, opt.caps));
  } else if (opt.rule == "pff-value" || opt.rule == "ef") {
    if (!game.pff) {
      return usage_error(err, "rule " + opt.rule + " needs a pff game (got " + game.kind_name() + ")");
    }
    alloc = opt.rule == "pff-value" ? pff_value(*game.pff) : ef_value(*game.pff);
  } else {
    Network g = load_network(opt.network_path, opt.caps);
    if (g.players() != game.players) {
      throw data_error("game and network disagree on the player count");
    }
    if (opt.rule == "bce") {
      alloc = bce(game.worth, g);
    } else if (opt.rule == "fce") {
      alloc = fce_formula(game.worth, g);
    } else if (opt.rule == "fce-direct") {
      alloc = fce_direct(game.worth, g, opt.caps.links);
    } else {  // jw
      alloc = jw_value(game.worth, g);
    }
  }

  if (opt.format == "json") {
    out << io::dump(io::allocation_to_json(alloc, opt.rule));
  } else {
    out << alloc.to_string() << "\n";
  }
  return kExitPass;
}

// --- audit ---------------------------------------------------------------------

struct AuditOptions {
  std::string rules = "bce";
  std::string axioms;
  std::string game_path;
  std::string network_path;
  std::string format = "table";
  int sample = 0;
  std::uint64_t seed = 1;
  Caps caps;
};

int cmd_audit(const AuditOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<std::string> axiom_names = split_list(opt.axioms);
  if (axiom_names.empty()) return usage_error(err, "audit needs a nonempty --axioms list");
  SuiteSpec spec;
  for (const std::string& name : axiom_names) {
    auto axiom = axiom_from_name(name);
    if (!axiom) return usage_error(err, "unknown axiom \"" + name + "\"");
    spec.axioms.push_back(*axiom);
  }
  std::vector<std::string> rule_names = split_list(opt.rules);
  if (rule_names.empty()) return usage_error(err, "audit needs a nonempty --rules list");
  for (const std::string& name : rule_names) {
    spec.rules.push_back(rule_by_name(name, opt.seed, opt.caps.links));
  }
  LoadedGame game = load_game(opt.game_path, opt.caps);
  Network g = load_network(opt.network_path, opt.caps);
  if (g.players() != game.players) throw data_error("game and network disagree on the player count");
  spec.games.emplace_back(opt.game_path, game.worth);
  spec.networks.emplace_back(opt.network_path, g);
  spec.symmetry_sample = opt.sample;
  spec.seed = opt.seed;

  std::vector<AuditReport> reports = run_suite(spec);
  bool all_pass = true;
  for (const AuditReport& r : reports) all_pass = all_pass && r.passed();

  if (opt.format == "json") {
    out << io::dump(io::audit_reports_to_json(reports));
  } else {
    for (const AuditReport& r : reports) {
      out << (r.passed() ? "[pass]" : "[FAIL]") << " rule=" << r.rule << " axiom=" << r.axiom
          << " checked=" << r.checked;
      if (!r.passed()) out << " violations=" << r.violations.size();
      out << "\n";
      for (const Violation& v : r.violations) {
        out << "  players={";
        for (std::size_t i = 0; i < v.players.size(); ++i) {
          out << (i ? "," : "") << v.players[i];
        }
        out << "} lhs=" << v.lhs.to_string() << " rhs=" << v.rhs.to_string() << "\n";
      }
    }
  }
  return all_pass ? kExitPass : kExitViolations;
}

// --- dividends -------------------------------------------------------------------

int cmd_dividends(const std::string& game_path, bool verify, const std::string& format,
                  const Caps& caps, std::ostream& out, std::ostream& err) {
  LoadedGame game = load_game(game_path, caps);
  if (!game.pff) {
    return usage_error(err, "dividends needs a pff game (got " + game.kind_name() + ")");
  }
  DividendTable table = pff_dividends(*game.pff);
  bool verified = true;
  std::size_t checked = 0;
  if (verify) {
    // independent reconstruction: re-sum coefficients over all predecessor
    // embedded coalitions and compare against the game, entry by entry
    const EmbeddedCoalitionSpace& space = EmbeddedCoalitionSpace::get(game.players.n);
    for (int idx = 0; idx < space.size(); ++idx) {
      const auto& e = space.entry(idx);
      const Partition& q = space.partition(e.partition_index);
      Rational sum(0);
      for (int other = 0; other < space.size(); ++other) {
        const auto& o = space.entry(other);
        if ((o.coalition & ~e.coalition) != 0) continue;
        if (!space.partition(o.partition_index).refines(q)) continue;
        sum += table.dense()[other];
      }
      ++checked;
      if (sum != game.pff->value(e.coalition, q)) {
        verified = false;
        err << "reconstruction failed at " << embedded_to_string(space.embedded(idx)) << ": sum "
            << sum.to_string() << " vs worth "
            << game.pff->value(e.coalition, q).to_string() << "\n";
        break;
      }
    }
  }
  if (format == "json") {
    Json doc = io::dividends_to_json(table);
    if (verify) {
      doc["verified"] = verified;
      doc["reconstruction_checked"] = checked;
    }
    out << io::dump(doc);
  } else {
    for (const auto& [ec, coeff] : table.nonzero()) {
      out << embedded_to_string(ec) << " = " << coeff.to_string() << "\n";
    }
    if (verify && verified) {
      out << "reconstruction verified over " << checked << " embedded coalitions\n";
    }
  }
  return verified ? kExitPass : kExitViolations;
}

// --- restrict / project -----------------------------------------------------------

int cmd_restrict(const std::string& game_path, const std::string& network_path, const Caps& caps,
                 std::ostream& out, std::ostream& err) {
  LoadedGame game = load_game(game_path, caps);
  if (!game.pff) {
    return usage_error(err, "restrict needs a pff game (got " + game.kind_name() + ")");
  }
  Network g = load_network(network_path, caps);
  if (g.players() != game.players) throw data_error("game and network disagree on the player count");
  out << io::dump(io::pff_to_json(graph_restrict_pff(*game.pff, g)));
  return kExitPass;
}

int cmd_project(const std::string& game_path, const std::string& network_path,
                const std::vector<std::string>& target_paths, const Caps& caps, std::ostream& out,
                std::ostream&) {
  LoadedGame game = load_game(game_path, caps);
  Network g = load_network(network_path, caps);
  if (g.players() != game.players) throw data_error("game and network disagree on the player count");
  WorthFunction projected = project_worth(game.worth, g);

  std::vector<Network> targets;
  if (!target_paths.empty()) {
    for (const std::string& path : target_paths) {
      Network t = load_network(path, caps);
      if (t.players() != game.players) {
        throw data_error(path + ": target network disagrees on the player count");
      }
      targets.push_back(std::move(t));
    }
  } else {
    int n = g.player_count();
    if (n > 12) {
      throw resource_limit_error(
          "the default target family enumerates 2^" + std::to_string(n) +
          " player-deletion networks; pass explicit --target files for n > 12");
    }
    std::set<LinkMask> seen;
    for (PlayerMask d = 0; d <= g.players().all(); ++d) {
      Network t = remove_players(g, d);
      if (seen.insert(t.link_mask()).second) targets.push_back(std::move(t));
    }
    std::sort(targets.begin(), targets.end(), [](const Network& a, const Network& b) {
      if (a.link_count() != b.link_count()) return a.link_count() < b.link_count();
      return a.link_mask() < b.link_mask();
    });
  }

  std::vector<WorthTableEntry> entries;
  for (const Network& t : targets) {
    for (PlayerMask comp : components(t).blocks()) {
      Rational worth = projected.eval_unchecked(comp, t);
      if (!worth.is_zero()) entries.push_back(WorthTableEntry{comp, t, std::move(worth)});
    }
  }
  out << io::dump(io::worth_table_to_json(game.players, std::move(entries)));
  return kExitPass;
}

// --- oracle --------------------------------------------------------------------

int cmd_oracle(const std::string& game_path, const std::string& network_path,
               const std::string& axiom, const std::string& format, const Caps& caps,
               std::ostream& out, std::ostream&) {
  LoadedGame game = load_game(game_path, caps);
  Network g = load_network(network_path, caps);
  if (g.players() != game.players) throw data_error("game and network disagree on the player count");
  EqualGainsAxiom which =
      axiom == "bc" ? EqualGainsAxiom::balanced_contributions : EqualGainsAxiom::fairness;
  OracleReport report = oracle_solve(game.worth, g, which, caps.links);
  if (format == "json") {
    out << io::dump(io::oracle_report_to_json(report, axiom));
  } else {
    out << report.allocation.to_string() << "\n";
    out << "consistent=" << (report.consistent ? "yes" : "no")
        << " full-rank=" << (report.full_rank ? "yes" : "no")
        << " networks-solved=" << report.networks_solved << "\n";
    if (!report.issue.empty()) out << "issue: " << report.issue << "\n";
  }
  return report.consistent && report.full_rank ? kExitPass : kExitViolations;
}

// --- identity ------------------------------------------------------------------

int cmd_identity(const std::string& game_path, const std::string& network_path,
                 const std::string& rule_name, std::uint64_t seed, const std::string& cycle_spec,
                 const std::string& format, const Caps& caps, std::ostream& out, std::ostream&) {
  LoadedGame game = load_game(game_path, caps);
  Network g = load_network(network_path, caps);
  if (g.players() != game.players) throw data_error("game and network disagree on the player count");
  RuleUnderTest rule = rule_by_name(rule_name, seed, caps.links);

  std::vector<Cycle> cycles;
  if (!cycle_spec.empty()) {
    Cycle z;
    for (const std::string& item : split_list(cycle_spec)) {
      try {
        z.vertices.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw data_error("--cycle expects a comma-separated player list");
      }
    }
    validate_cycle(g, z);
    cycles.push_back(std::move(z));
  } else {
    cycles = enumerate_cycles(g);
  }

  AllocationCache cache(rule, game.worth);
  bool all_equal = true;
  Json results = Json::array();
  for (const Cycle& z : cycles) {
    CycleSumResult r = cycle_sum_check(cache, g, z);
    all_equal = all_equal && r.equal;
    if (format == "json") {
      Json e;
      Json verts = Json::array();
      for (Player p : z.vertices) verts.push_back(p);
      e["cycle"] = std::move(verts);
      e["lhs"] = io::rational_to_json(r.lhs);
      e["rhs"] = io::rational_to_json(r.rhs);
      e["equal"] = r.equal;
      results.push_back(std::move(e));
    } else {
      out << "cycle ";
      for (std::size_t i = 0; i < z.vertices.size(); ++i) {
        out << (i ? "-" : "") << z.vertices[i];
      }
      out << ": lhs=" << r.lhs.to_string() << " rhs=" << r.rhs.to_string()
          << " equal=" << (r.equal ? "yes" : "no") << "\n";
    }
  }
  if (format == "json") {
    Json doc;
    doc["kind"] = "identity-report";
    doc["rule"] = rule.name;
    doc["cycles"] = std::move(results);
    doc["all_equal"] = all_equal;
    out << io::dump(doc);
  } else if (cycles.empty()) {
    out << "no cycles in the network\n";
  }
  return all_equal ? kExitPass : kExitViolations;
}

// --- examples ------------------------------------------------------------------

Json payoff_json(const std::vector<std::string>& values) {
  Json payoffs = Json::object();
  for (std::size_t i = 0; i < values.size(); ++i) payoffs[std::to_string(i + 1)] = values[i];
  return payoffs;
}

int cmd_examples(const std::string& out_dir, std::ostream& out, std::ostream&) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto path_of = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };
  int files = 0;
  auto emit = [&](const std::string& name, const Json& doc) {
    io::write_text_file(path_of(name), io::dump(doc));
    ++files;
  };

  PlayerSet three(3), four(4);

  emit("dollar-for-3-when-1-2-linked.json", io::linked_beneficiary_to_json(three, 3, Link(1, 2)));
  emit("dollar-for-3-when-1-2-linked-n4.json", io::linked_beneficiary_to_json(four, 3, Link(1, 2)));

  emit("net3-line-12.json", io::network_to_json(Network(three, {Link(1, 2)})));
  emit("net3-12-13.json", io::network_to_json(Network(three, {Link(1, 2), Link(1, 3)})));
  emit("net3-13-23.json", io::network_to_json(Network(three, {Link(1, 3), Link(2, 3)})));
  emit("net4-chain.json",
       io::network_to_json(Network(four, {Link(1, 2), Link(1, 4), Link(3, 4)})));

  {
    PffGame unanimity_pair(three);
    Partition pair_apart(three, {mask_of({1, 2}), mask_of({3})});
    unanimity_pair.set(EmbeddedCoalition(mask_of({3}), pair_apart), Rational(1));
    unanimity_pair.set(EmbeddedCoalition(mask_of({1, 2, 3}), Partition::one_block(three)),
                       Rational(1));
    emit("pff-third-paid-when-1-2-together.json", io::pff_to_json(unanimity_pair));
  }

  {
    // worth table paying any component that contains player 3 whenever the
    // concrete link {1,2} is present in the network
    std::vector<WorthTableEntry> entries;
    entries.push_back({mask_of({3}), Network(three, {Link(1, 2)}), Rational(1)});
    entries.push_back({mask_of({1, 2, 3}), Network(three, {Link(1, 2), Link(1, 3)}), Rational(1)});
    entries.push_back({mask_of({1, 2, 3}), Network(three, {Link(1, 2), Link(2, 3)}), Rational(1)});
    entries.push_back(
        {mask_of({1, 2, 3}), Network(three, {Link(1, 2), Link(1, 3), Link(2, 3)}), Rational(1)});
    emit("table-pay-3-on-edge-12.json", io::worth_table_to_json(three, std::move(entries)));
  }

  Json manifest;
  manifest["kind"] = "examples-manifest";
  Json entries = Json::array();

  auto computation = [](const std::string& rule, const std::vector<std::string>& payoffs) {
    Json c;
    c["rule"] = rule;
    c["payoffs"] = payoff_json(payoffs);
    return c;
  };
  auto audit = [](const std::string& rule, const std::string& axiom, bool expect_pass) {
    Json a;
    a["rule"] = rule;
    a["axiom"] = axiom;
    a["expect_pass"] = expect_pass;
    return a;
  };
  auto entry = [&](const std::string& name, const std::string& description,
                   const std::string& game, const std::string& network, Json computations,
                   Json audits) {
    Json e;
    e["name"] = name;
    e["description"] = description;
    e["game"] = game;
    if (!network.empty()) e["network"] = network;
    e["computations"] = std::move(computations);
    if (!audits.empty()) e["audits"] = std::move(audits);
    return e;
  };

  entries.push_back(entry(
      "isolated-beneficiary",
      "player 3 earns a dollar while 1 and 2 are partners; with 3 isolated, both equal-gains "
      "notions leave the dollar with 3",
      "dollar-for-3-when-1-2-linked.json", "net3-line-12.json",
      Json::array({computation("bce", {"0", "0", "1"}), computation("fce", {"0", "0", "1"})}),
      Json::array()));
  entries.push_back(entry(
      "exposed-beneficiary",
      "adding the link {1,3} exposes player 3 to player 1's withdrawal threat: balanced "
      "contributions splits the dollar equally, fairness (single-link deletion) does not",
      "dollar-for-3-when-1-2-linked.json", "net3-12-13.json",
      Json::array({computation("bce", {"1/3", "1/3", "1/3"}),
                   computation("fce", {"0", "0", "1"}),
                   computation("fce-direct", {"0", "0", "1"})}),
      Json::array({audit("bce", "ce", true), audit("bce", "bc", true), audit("bce", "sym", true),
                   audit("bce", "f", false), audit("fce", "ce", true), audit("fce", "f", true),
                   audit("fce", "bc", false)})));
  entries.push_back(entry(
      "indirect-dependence",
      "on four players the beneficiary sits two links away from the partnership; the rule is "
      "balanced on links yet unbalanced for the non-adjacent pair {1,3}",
      "dollar-for-3-when-1-2-linked-n4.json", "net4-chain.json",
      Json::array({computation("bce", {"0", "0", "1", "0"})}),
      Json::array({audit("bce", "bcplus", false), audit("bce", "bc", true),
                   audit("bce", "ce", true)})));
  entries.push_back(entry(
      "partition-reward",
      "partition-function game paying coalitions containing 3 whenever 1 and 2 share a block; "
      "its dividend table is a single unit coefficient",
      "pff-third-paid-when-1-2-together.json", "",
      Json::array({computation("pff-value", {"0", "0", "1"}), computation("ef", {"1/3", "1/3", "1/3"})}),
      Json::array()));
  entries.push_back(entry(
      "same-restriction-different-payoffs",
      "graph restriction by the one-link and the two-link network yields the same restricted "
      "game, yet the bc-based rule pays differently on the two networks while the "
      "fairness-based rule cannot tell them apart",
      "pff-third-paid-when-1-2-together.json", "net3-12-13.json",
      Json::array({computation("bce", {"1/3", "1/3", "1/3"}), computation("fce", {"0", "0", "1"})}),
      Json::array()));
  entries.push_back(entry(
      "edge-reward-projection",
      "table variant keyed to the concrete link {1,2}; projecting onto the one-link network "
      "rewrites it to depend only on component structure",
      "table-pay-3-on-edge-12.json", "net3-12-13.json",
      Json::array({computation("bce", {"1/3", "1/3", "1/3"}), computation("fce", {"0", "0", "1"})}),
      Json::array()));
  manifest["entries"] = std::move(entries);
  emit("manifest.json", manifest);

  out << "wrote " << files << " files to " << out_dir << "\n";
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact allocation rules for cooperative games on networks"};
  app.name("coopnet");
  app.require_subcommand(1);

  Caps caps;
  app.add_option("--cap-players", caps.players, "player-count guard (max 16)");
  app.add_option("--cap-links", caps.links, "link-count guard for link-subset recursions");

  ComputeOptions compute;
  CLI::App* c_compute = app.add_subcommand("compute", "evaluate an allocation rule");
  c_compute->add_option("--rule", compute.rule, "allocation rule")
      ->required()
      ->check(CLI::IsMember(
          {"bce", "fce", "fce-direct", "myerson", "jw", "ef", "shapley", "pff-value"}));
  c_compute->add_option("--game", compute.game_path, "game file")->required();
  c_compute->add_option("--network", compute.network_path, "network file");
  c_compute->add_option("--format", compute.format)->check(CLI::IsMember({"table", "json"}));

  AuditOptions audit;
  CLI::App* c_audit = app.add_subcommand("audit", "check axioms for rules on a game and network");
  c_audit->add_option("--rules,--rule", audit.rules,
                      "comma list of rules (bce,fce,fce-direct,hash,zero)");
  c_audit->add_option("--axioms", audit.axioms, "comma list of ce,bc,f,bcplus,sym")->required();
  c_audit->add_option("--game", audit.game_path, "game file")->required();
  c_audit->add_option("--network", audit.network_path, "network file")->required();
  c_audit->add_option("--sample", audit.sample, "sampled permutations for sym (0 = exhaustive)");
  c_audit->add_option("--seed", audit.seed, "seed for sampling and the hash rule");
  c_audit->add_option("--format", audit.format)->check(CLI::IsMember({"table", "json"}));

  std::string dividends_game, dividends_format = "table";
  bool dividends_verify = false;
  CLI::App* c_dividends = app.add_subcommand("dividends", "unanimity coefficients of a pff game");
  c_dividends->add_option("--game", dividends_game, "pff game file")->required();
  c_dividends->add_flag("--verify", dividends_verify, "re-sum the reconstruction identity");
  c_dividends->add_option("--format", dividends_format)->check(CLI::IsMember({"table", "json"}));

  std::string restrict_game, restrict_network;
  CLI::App* c_restrict = app.add_subcommand("restrict", "graph-restricted pff game");
  c_restrict->add_option("--game", restrict_game, "pff game file")->required();
  c_restrict->add_option("--network", restrict_network, "network file")->required();

  std::string project_game, project_network;
  std::vector<std::string> project_targets;
  CLI::App* c_project = app.add_subcommand("project", "graph-projected worth function");
  c_project->add_option("--game", project_game, "game file")->required();
  c_project->add_option("--network", project_network, "network to project onto")->required();
  c_project->add_option("--target", project_targets,
                        "network(s) to evaluate at (default: every player-deletion network)");

  std::string oracle_game, oracle_network, oracle_axiom, oracle_format = "table";
  CLI::App* c_oracle = app.add_subcommand("oracle", "solve the full equal-gains linear system");
  c_oracle->add_option("--game", oracle_game, "game file")->required();
  c_oracle->add_option("--network", oracle_network, "network file")->required();
  c_oracle->add_option("--axiom", oracle_axiom, "bc or f")
      ->required()
      ->check(CLI::IsMember({"bc", "f"}));
  c_oracle->add_option("--format", oracle_format)->check(CLI::IsMember({"table", "json"}));

  std::string id_game, id_network, id_rule = "bce", id_cycle, id_format = "table";
  std::uint64_t id_seed = 42;
  CLI::App* c_identity = app.add_subcommand("identity", "cycle-sum identity check");
  c_identity->add_option("--game", id_game, "game file")->required();
  c_identity->add_option("--network", id_network, "network file")->required();
  c_identity->add_option("--rule", id_rule, "rule to evaluate")
      ->check(CLI::IsMember({"bce", "fce", "fce-direct", "hash", "zero"}));
  c_identity->add_option("--seed", id_seed, "seed for the hash rule");
  c_identity->add_option("--cycle", id_cycle, "specific cycle as a player list (default: all)");
  c_identity->add_option("--format", id_format)->check(CLI::IsMember({"table", "json"}));

  std::string examples_dir = "coopnet-examples";
  CLI::App* c_examples = app.add_subcommand("examples", "write the built-in example files");
  c_examples->add_option("--out", examples_dir, "output directory");

  std::vector<const char*> argv;
  argv.push_back("coopnet");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*c_compute) {
      compute.caps = caps;
      return cmd_compute(compute, out, err);
    }
    if (*c_audit) {
      audit.caps = caps;
      return cmd_audit(audit, out, err);
    }
    if (*c_dividends) {
      return cmd_dividends(dividends_game, dividends_verify, dividends_format, caps, out, err);
    }
    if (*c_restrict) return cmd_restrict(restrict_game, restrict_network, caps, out, err);
    if (*c_project) {
      return cmd_project(project_game, project_network, project_targets, caps, out, err);
    }
    if (*c_oracle) {
      return cmd_oracle(oracle_game, oracle_network, oracle_axiom, oracle_format, caps, out, err);
    }
    if (*c_identity) {
      return cmd_identity(id_game, id_network, id_rule, id_seed, id_cycle, id_format, caps, out,
                          err);
    }
    if (*c_examples) return cmd_examples(examples_dir, out, err);
  } catch (const resource_limit_error& e) {
    err << "resource guard: " << e.what() << "\n";
    return kExitResource;
  } catch (const data_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const inconsistency_error& e) {
    err << "inconsistency: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace coopnet
