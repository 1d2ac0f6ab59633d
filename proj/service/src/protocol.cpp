#include "hrc/service/protocol.hpp"

#include <algorithm>

namespace hrc::service {

bool is_message_type(std::string_view type) {
  return std::find(kMessageTypes.begin(), kMessageTypes.end(), type) != kMessageTypes.end();
}

Envelope parse_envelope(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw ProtocolError("message is not JSON");
  }
  if (!j.is_object()) throw ProtocolError("message is not an object");
  Envelope e;
  try {
    e.type = j.at("type").get<std::string>();
    if (j.contains("session_id") && !j.at("session_id").is_null()) e.session_id = j.at("session_id").get<std::string>();
    if (j.contains("seq")) e.seq = j.at("seq").get<std::int64_t>();
    if (j.contains("payload")) e.payload = j.at("payload");
  } catch (const json::exception&) {
    throw ProtocolError("malformed envelope");
  }
  if (!is_message_type(e.type)) throw ProtocolError("unknown message type '" + e.type + "'");
  if (!e.payload.is_object()) throw ProtocolError("payload must be an object");
  return e;
}

std::string serialize(const Envelope& e) {
  return json{{"type", e.type}, {"session_id", e.session_id}, {"seq", e.seq}, {"payload", e.payload}}.dump();
}

}  // namespace hrc::service
