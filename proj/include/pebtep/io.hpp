#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "pebtep/analyze.hpp"
#include "pebtep/bp.hpp"
#include "pebtep/pebbling.hpp"
#include "pebtep/tree.hpp"

namespace pebtep {

using Json = nlohmann::json;

Json to_json(const TepInstance& instance);
TepInstance instance_from_json(const Json& j);

Json to_json(const PebbleSequence& seq);
PebbleSequence sequence_from_json(const Json& j);

Json to_json(const BranchingProgram& bp);
BranchingProgram bp_from_json(const Json& j);

// Graphviz rendering; states are labelled by their query and tag.
std::string export_dot(const BranchingProgram& bp);

// Per-step pebble timeline: one row per configuration and node.
std::string pebble_timeline_tsv(const PebbleSequence& seq);

Json to_json(const ThriftyReport& r);
Json to_json(const ReadOnceReport& r);
Json to_json(const BitwiseReport& r);
Json to_json(const FractionalExtraction& r);
Json to_json(const CensusReport& r);
Json to_json(const AdderReport& r);
Json to_json(const AdderSearchResult& r);

// Parse errors carry the file name and byte offset.
Json parse_json(const std::string& text, const std::string& where = "<input>");
Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& j);

}  // namespace pebtep
