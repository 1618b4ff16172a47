#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hcowf2/cache.hpp"
#include "hcowf2/encoding.hpp"
#include "hcowf2/function_description.hpp"
#include "hcowf2/wire.hpp"

namespace hcowf2 {

// Phase order is the message exchange order; steps 6-7 (FD request and
// response) occur iff the receiver misses its cache.
enum class SessionPhase : std::uint8_t {
  idle,
  awaiting_fd_decision,
  awaiting_fd,
  awaiting_result,
  done,
};

struct SenderOutcome {
  bool accepted = false;
  bool fd_requested = false;
  Signature signature;
  MacTag tag;
};

struct ReceiverOutcome {
  bool accepted = false;
  bool fd_requested = false;
  Signature signature;
};

// How long the sender waits for an optional FD_REQUEST after announcing
// its signature. The loopback transport answers exactly (the receiver is
// either about to request or already committed to waiting for the
// message); on TCP this is a timeout and only the cache lookup happens on
// the other side in that window, so the default is generous.
inline constexpr int kDefaultFdDecisionTimeoutMs = 1000;

namespace detail {

inline std::vector<std::uint8_t> signature_announcement(const Signature &sig, std::size_t n) {
  std::vector<std::uint8_t> payload(sig.digest.begin(), sig.digest.end());
  put_u32_be(payload, static_cast<std::uint32_t>(n));
  return payload;
}

} // namespace detail

// Sender side of one message delivery: announce the function-description
// signature, serve an FD request if the receiver misses its cache, then
// send the message with its tag and wait for the verdict.
inline SenderOutcome sender_session(ByteStream &stream, const FunctionDescription &fd,
                                    const std::vector<std::uint8_t> &message,
                                    int fd_decision_timeout_ms = kDefaultFdDecisionTimeoutMs) {
  validate_description(fd);
  const std::size_t n = fd.n();

  SenderOutcome outcome;
  outcome.signature = fd_signature(fd);
  write_frame(stream, FrameType::FdSignature,
              detail::signature_announcement(outcome.signature, n));

  // awaiting_fd_decision: the only frame the receiver may send here is
  // FD_REQUEST; silence means its cache already has the description.
  if (auto frame = poll_frame(stream, fd_decision_timeout_ms)) {
    if (frame->type != FrameType::FdRequest)
      throw ProtocolViolation("expected FD_REQUEST after signature, got type 0x" +
                              std::to_string(static_cast<unsigned>(frame->type)));
    if (!frame->payload.empty())
      throw ProtocolViolation("FD_REQUEST carries no payload");
    outcome.fd_requested = true;
    write_frame(stream, FrameType::FdResponse, encode_fd(fd));
  }

  outcome.tag = evaluate(fd, derive_input(message, n)).tag;
  std::vector<std::uint8_t> payload;
  payload.reserve(4 + message.size() + Bitvec::byte_count(n));
  detail::put_u32_be(payload, static_cast<std::uint32_t>(message.size()));
  payload.insert(payload.end(), message.begin(), message.end());
  const auto tag_bytes = outcome.tag.value.to_bytes_lsb();
  payload.insert(payload.end(), tag_bytes.begin(), tag_bytes.end());
  write_frame(stream, FrameType::Message, payload);

  // awaiting_result
  const Frame verdict = read_frame(stream);
  if (verdict.type != FrameType::VerifyResult || verdict.payload.size() != 1)
    throw ProtocolViolation("expected 1-byte VERIFY_RESULT");
  outcome.accepted = verdict.payload[0] == 1;
  return outcome;
}

// Receiver side of one message delivery: resolve the announced signature
// against the cache (requesting, validating and caching the description
// on a miss), then recompute the tag over the received message and reply
// with the verdict. A description whose hash does not match the
// announcement is rejected and never cached.
inline ReceiverOutcome receiver_session(
    ByteStream &stream, FdCache &cache,
    const std::optional<std::filesystem::path> &persist_dir = std::nullopt) {
  ReceiverOutcome outcome;

  const Frame announce = read_frame(stream);
  if (announce.type != FrameType::FdSignature || announce.payload.size() != 36)
    throw ProtocolViolation("expected FD_SIGNATURE with 32-byte digest and 4-byte n");
  std::copy(announce.payload.begin(), announce.payload.begin() + 32,
            outcome.signature.digest.begin());
  const std::uint32_t announced_n = (static_cast<std::uint32_t>(announce.payload[32]) << 24) |
                                    (static_cast<std::uint32_t>(announce.payload[33]) << 16) |
                                    (static_cast<std::uint32_t>(announce.payload[34]) << 8) |
                                    static_cast<std::uint32_t>(announce.payload[35]);

  FdCache::Entry fd;
  if (auto hit = cache.get(outcome.signature)) {
    fd = *hit;
  } else {
    outcome.fd_requested = true;
    write_frame(stream, FrameType::FdRequest, {});
    const Frame response = read_frame(stream); // awaiting_fd
    if (response.type != FrameType::FdResponse)
      throw ProtocolViolation("expected FD_RESPONSE after FD_REQUEST");
    FunctionDescription decoded = decode_fd(response.payload);
    if (fd_signature(decoded) != outcome.signature)
      throw SignatureMismatch("received description does not hash to the announced signature");
    if (decoded.n() != announced_n)
      throw ProtocolViolation("announced n differs from the received description");
    if (persist_dir)
      persist_cache_entry(*persist_dir, decoded);
    cache.insert(std::move(decoded));
    fd = *cache.get(outcome.signature);
  }
  if (fd->n() != announced_n)
    throw ProtocolViolation("announced n differs from the cached description");

  const Frame msg = read_frame(stream);
  if (msg.type != FrameType::Message)
    throw ProtocolViolation("expected MESSAGE");
  if (msg.payload.size() < 4)
    throw ProtocolViolation("MESSAGE payload too short");
  const std::uint32_t msg_len = (static_cast<std::uint32_t>(msg.payload[0]) << 24) |
                                (static_cast<std::uint32_t>(msg.payload[1]) << 16) |
                                (static_cast<std::uint32_t>(msg.payload[2]) << 8) |
                                static_cast<std::uint32_t>(msg.payload[3]);
  const std::size_t tag_bytes = Bitvec::byte_count(fd->n());
  if (msg.payload.size() != 4 + static_cast<std::size_t>(msg_len) + tag_bytes)
    throw ProtocolViolation("MESSAGE length fields are inconsistent");

  const std::vector<std::uint8_t> message(msg.payload.begin() + 4,
                                          msg.payload.begin() + 4 + msg_len);
  const Bitvec claimed_tag =
      Bitvec::from_bytes_lsb(fd->n(), msg.payload.data() + 4 + msg_len, tag_bytes);

  const MacTag recomputed = evaluate(*fd, derive_input(message, fd->n())).tag;
  outcome.accepted = recomputed.value == claimed_tag;
  write_frame(stream, FrameType::VerifyResult,
              {static_cast<std::uint8_t>(outcome.accepted ? 1 : 0)});
  return outcome;
}

} // namespace hcowf2
