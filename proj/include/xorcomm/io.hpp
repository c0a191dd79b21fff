#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xorcomm/bounds.hpp"
#include "xorcomm/exact_solver.hpp"
#include "xorcomm/game.hpp"
#include "xorcomm/protocol.hpp"
#include "xorcomm/quantum.hpp"

namespace xorcomm {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

enum class OutputFormat { Json, Csv };

/// Everything needed to rerun a command.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  double budget = kDefaultBudget;
  std::string out;
  OutputFormat format = OutputFormat::Json;
  double tolerance = kSlackTolerance;
};

json to_json(const RunConfig& config);

/// A loaded game file: an explicit matrix or a correlation game reference.
struct GameFile {
  enum class Kind { Explicit, Correlation };
  Kind kind = Kind::Explicit;
  std::optional<XorGame> game;
  int n = 0;
};

/// {"kind":"explicit","R":..,"S":..,"coeffs":[[..]]} or
/// {"kind":"correlation","n":..}. Errors name the offending field.
GameFile parse_game(const json& j);
GameFile load_game(const std::string& path);

/// Explicit form with the normalized coefficients plus "scale" and
/// "rescaled" from the loader.
json game_to_json(const XorGame& game);
/// Correlation form with L, whether it is exact, and L_bounds.
json correlation_game_to_json(int n);

json strategy_to_json(const RandomizedStrategyPair& s);
/// Inverse of strategy_to_json; validates, so non-stochastic rows are
/// rejected with their table and row index.
RandomizedStrategyPair strategy_from_json(const json& j);

json protocol_to_json(const DeterministicProtocolPair& p);

/// Dimension plus complex entries as [re, im] pairs.
json quantum_strategy_to_json(const QuantumOneWayStrategy& s);

/// {value, method, certificate, cost, wallclock, config, version}.
json result_to_json(const SolveResult& r, const RunConfig& config);

json report_to_json(const BoundReport& r);

/// Header: name,parameters,lhs,rhs,slack,pass. Parameters are
/// semicolon-separated key=value pairs; pass uses each report's tolerance.
void write_reports_csv(std::ostream& os, const std::vector<BoundReport>& reports);

/// Shortest round-tripping decimal form.
std::string format_double(double v);

}  // namespace xorcomm
