#pragma once

#include <json.hpp>

#include "zpg/classifier.hpp"
#include "zpg/group_ring.hpp"
#include "zpg/identities.hpp"
#include "zpg/invariants.hpp"
#include "zpg/presentation.hpp"

namespace zpg {

using json = nlohmann::ordered_json;

// Malformed or ill-typed input documents.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

json to_json(const RingContext& ctx);
json to_json(const GroupRingElem& u);
json to_json(const Presentation& pres);
json to_json(const InvariantReport& r);
json to_json(const ExtensionDescriptor& d);
json to_json(const ConcreteModel& m);
json to_json(const Classification& c);
json to_json(const IdentityCheck& c);

RingContext context_from_json(const json& j);
GroupRingElem element_from_json(const json& j);
Presentation presentation_from_json(const json& j);
InvariantReport report_from_json(const json& j);
ExtensionDescriptor descriptor_from_json(const json& j);

json parse_json_text(const std::string& text);
json read_json_file(const std::string& path);

}  // namespace zpg
