#pragma once

#include <string>

#include <json.hpp>

#include "nsg/circuits.hpp"
#include "nsg/game.hpp"
#include "nsg/qip.hpp"
#include "nsg/strategy.hpp"

namespace nsg {

// Raised on malformed input documents; the message names the offending
// field (for circuits, the gate index).
struct JsonFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance document: {"n_bits": int, "k": int,
//                     "gates": [{"kind": "ZERO|ONE|AND|OR|NOT", "inputs": [int]}]}
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& doc);

// Game export for cross-checking: {"N": int, "R": [s][t][y][z] of 0/1}.
// Throws JsonFormatError if a predicate entry is not 0 or 1.
nlohmann::json game_to_json(const Game& g);

// Strategy document: {"N": int, "p": [s][t][y][z] of "num/den" strings}.
nlohmann::json strategy_to_json(const Strategy& p);
Strategy strategy_from_json(const nlohmann::json& doc);

// Protocol run report with a config echo for replay.
nlohmann::json run_report_to_json(const RunReport& report, const ProtocolConfig& cfg);

// File helpers; load throws JsonFormatError on unreadable or unparsable
// input, save throws std::runtime_error when the path cannot be written.
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& doc);

}  // namespace nsg
