#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "icsim/geometry.hpp"

namespace icsim {

enum class MsgType : std::uint8_t { Hb = 1, Enter = 2, Exit = 3 };

// HB carries the pose snapshot Theta: absolute 2D position plus v and a.
struct HbPayload {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double a = 0.0;
};

struct EnterPayload {
  LaneIn clane = LaneIn::H1R;
  LaneOut nlane = LaneOut::H2L;
  double tau_mti = 0.0;  // frozen at first send; may be +inf
};

struct ExitPayload {
  LaneOut nlane = LaneOut::H2L;
};

struct Message {
  std::uint32_t uid = 0;
  std::variant<HbPayload, EnterPayload, ExitPayload> payload;

  MsgType type() const {
    return static_cast<MsgType>(payload.index() + 1);
  }
};

Message make_hb(std::uint32_t uid, const HbPayload& p);
Message make_enter(std::uint32_t uid, const EnterPayload& p);
Message make_exit(std::uint32_t uid, const ExitPayload& p);

struct DecodeError : std::runtime_error {
  enum class Kind { Truncated, UnknownType, BadLane };
  Kind kind;
  DecodeError(Kind k, const char* what) : std::runtime_error(what), kind(k) {}
};

// Wire format (little-endian): 1 byte msg_type, 4 byte uid, then payload
// fields; lanes are 1 byte, reals are 64-bit IEEE doubles.
// HB = 37 bytes, ENTER = 15, EXIT = 6. One message per packet.
std::vector<std::uint8_t> encode(const Message& msg);
Message decode(std::span<const std::uint8_t> bytes);

const char* to_string(MsgType t);

}  // namespace icsim
