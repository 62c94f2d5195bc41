#include "icsim/message.hpp"

#include <cstring>

namespace icsim {

Message make_hb(std::uint32_t uid, const HbPayload& p) { return {uid, p}; }
Message make_enter(std::uint32_t uid, const EnterPayload& p) { return {uid, p}; }
Message make_exit(std::uint32_t uid, const ExitPayload& p) { return {uid, p}; }

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

struct Reader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  std::uint8_t u8() {
    if (pos + 1 > bytes.size())
      throw DecodeError(DecodeError::Kind::Truncated, "decode: truncated message");
    return bytes[pos++];
  }
  std::uint32_t u32() {
    if (pos + 4 > bytes.size())
      throw DecodeError(DecodeError::Kind::Truncated, "decode: truncated message");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
    return v;
  }
  double f64() {
    if (pos + 8 > bytes.size())
      throw DecodeError(DecodeError::Kind::Truncated, "decode: truncated message");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[pos++]) << (8 * i);
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
  }
  std::uint8_t lane() {
    std::uint8_t l = u8();
    if (l > 3) throw DecodeError(DecodeError::Kind::BadLane, "decode: lane index out of range");
    return l;
  }
};

}  // namespace

std::vector<std::uint8_t> encode(const Message& msg) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(msg.type()));
  put_u32(out, msg.uid);
  if (const auto* hb = std::get_if<HbPayload>(&msg.payload)) {
    put_f64(out, hb->x);
    put_f64(out, hb->y);
    put_f64(out, hb->v);
    put_f64(out, hb->a);
  } else if (const auto* en = std::get_if<EnterPayload>(&msg.payload)) {
    out.push_back(static_cast<std::uint8_t>(en->clane));
    out.push_back(static_cast<std::uint8_t>(en->nlane));
    put_f64(out, en->tau_mti);
  } else {
    const auto& ex = std::get<ExitPayload>(msg.payload);
    out.push_back(static_cast<std::uint8_t>(ex.nlane));
  }
  return out;
}

Message decode(std::span<const std::uint8_t> bytes) {
  Reader r{bytes};
  std::uint8_t type = r.u8();
  std::uint32_t uid = r.u32();
  Message m;
  m.uid = uid;
  switch (type) {
    case static_cast<std::uint8_t>(MsgType::Hb): {
      HbPayload p;
      p.x = r.f64();
      p.y = r.f64();
      p.v = r.f64();
      p.a = r.f64();
      m.payload = p;
      break;
    }
    case static_cast<std::uint8_t>(MsgType::Enter): {
      EnterPayload p;
      p.clane = static_cast<LaneIn>(r.lane());
      p.nlane = static_cast<LaneOut>(r.lane());
      p.tau_mti = r.f64();
      m.payload = p;
      break;
    }
    case static_cast<std::uint8_t>(MsgType::Exit): {
      ExitPayload p;
      p.nlane = static_cast<LaneOut>(r.lane());
      m.payload = p;
      break;
    }
    default:
      throw DecodeError(DecodeError::Kind::UnknownType, "decode: unknown message type");
  }
  if (r.pos != bytes.size())
    throw DecodeError(DecodeError::Kind::Truncated, "decode: trailing bytes");
  return m;
}

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::Hb: return "HB";
    case MsgType::Enter: return "ENTER";
    case MsgType::Exit: return "EXIT";
  }
  return "?";
}

}  // namespace icsim
