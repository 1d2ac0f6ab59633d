#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace hrc::service {

using nlohmann::json;

inline constexpr std::array<std::string_view, 10> kMessageTypes = {
    "hello",    "trial_start",       "goal_choice",       "state_tick", "capture",
    "replan_notice", "trial_end", "preference_prompt", "preference_choice", "error"};

bool is_message_type(std::string_view type);

// {type, session_id, seq, payload}; one envelope per text frame.
struct Envelope {
  std::string type;
  std::string session_id;
  std::int64_t seq = 0;
  json payload = json::object();

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ProtocolError on malformed text or an unknown type.
Envelope parse_envelope(std::string_view text);
std::string serialize(const Envelope& envelope);

}  // namespace hrc::service
