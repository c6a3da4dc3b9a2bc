#pragma once

#include <iosfwd>

#include "json.hpp"
#include "k3flow/flow.hpp"

namespace k3flow {

using json = nlohmann::json;

json vector_json(const MukaiVector& v);
MukaiVector vector_from_json(const json& j);

json holes_json(const LatticeContext& ctx, const std::vector<Hole>& hs);
std::vector<Hole> holes_from_json(const json& j);

json event_json(const WallEvent& e);
WallEvent event_from_json(const json& j);

json sample_json(const FlowSample& s);
FlowSample sample_from_json(const json& j);

// Compact record with status, step count, arrival time and the event list.
json trace_summary_json(const FlowTrace& tr);

json letters_json(const GroupElement& g);
json word_json(const GroupElement& g);
GroupElement word_from_json(const json& j);

json polyline_json(const Polyline& p);
Polyline polyline_from_json(const json& j);

// One sample per line followed by the summary record.
void write_trace_jsonl(std::ostream& os, const FlowTrace& tr);

}  // namespace k3flow
