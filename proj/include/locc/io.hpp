#pragma once

#include <string>

#include <json.hpp>

#include "locc/analysis.hpp"
#include "locc/measurement.hpp"
#include "locc/protocol.hpp"
#include "locc/search.hpp"
#include "locc/states.hpp"

namespace locc::io {

using Json = nlohmann::json;

// Matrices are row-major with complex entries as [re, im] pairs.
Json to_json(const Mat& m);
Mat mat_from_json(const Json& j);

Json to_json(const StateSet& s);
StateSet state_set_from_json(const Json& j);

Json to_json(const LocalMeasurement& m);
LocalMeasurement measurement_from_json(const Json& j);

Json to_json(const SeparablePovm& p);
SeparablePovm povm_from_json(const Json& j);

Json to_json(const ProtocolTree& t);
ProtocolTree protocol_from_json(const Json& j);

// Serialize-only report types.
Json to_json(const VerificationReport& r);
Json to_json(const BoundReport& r);
Json to_json(const PartitionTree& t);
Json to_json(const SearchResult& r);
Json to_json(const ScanResult& r);
Json to_json(const PurificationResult& r);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace locc::io
