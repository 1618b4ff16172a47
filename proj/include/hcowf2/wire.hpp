#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "hcowf2/errors.hpp"

namespace hcowf2 {

// Reliable ordered byte stream under a protocol session. Implementations:
// TCP sockets (net.hpp) and the in-process loopback below.
class ByteStream {
public:
  virtual ~ByteStream() = default;

  virtual void write_all(const std::uint8_t *data, std::size_t len) = 0;
  virtual void read_exact(std::uint8_t *data, std::size_t len) = 0;

  // True when at least one byte can be read. False means the peer will
  // not speak next: on the loopback this is exact (the peer is blocked
  // reading with nothing in flight); on TCP it is a timeout.
  virtual bool poll_readable(int timeout_ms) = 0;

  virtual void close() = 0;
};

enum class FrameType : std::uint8_t {
  FdSignature = 0x01,
  FdRequest = 0x02,
  FdResponse = 0x03,
  Message = 0x04,
  VerifyResult = 0x05,
};

struct Frame {
  FrameType type;
  std::vector<std::uint8_t> payload;
};

inline constexpr std::size_t kMaxFramePayload = 64u << 20;

// One write_all call per frame. Taps and wire logs rely on frame-granular
// writes.
inline void write_frame(ByteStream &stream, FrameType type,
                        const std::vector<std::uint8_t> &payload) {
  if (payload.size() > kMaxFramePayload)
    throw ProtocolViolation("frame payload too large");
  std::vector<std::uint8_t> buf;
  buf.reserve(5 + payload.size());
  buf.push_back(static_cast<std::uint8_t>(type));
  const auto len = static_cast<std::uint32_t>(payload.size());
  buf.push_back(static_cast<std::uint8_t>(len >> 24));
  buf.push_back(static_cast<std::uint8_t>(len >> 16));
  buf.push_back(static_cast<std::uint8_t>(len >> 8));
  buf.push_back(static_cast<std::uint8_t>(len));
  buf.insert(buf.end(), payload.begin(), payload.end());
  stream.write_all(buf.data(), buf.size());
}

inline Frame read_frame(ByteStream &stream) {
  std::uint8_t header[5];
  stream.read_exact(header, sizeof header);
  if (header[0] < 0x01 || header[0] > 0x05)
    throw ProtocolViolation("unknown frame type 0x" + std::to_string(header[0]));
  const std::uint32_t len = (static_cast<std::uint32_t>(header[1]) << 24) |
                            (static_cast<std::uint32_t>(header[2]) << 16) |
                            (static_cast<std::uint32_t>(header[3]) << 8) |
                            static_cast<std::uint32_t>(header[4]);
  if (len > kMaxFramePayload)
    throw ProtocolViolation("frame payload too large");
  Frame f{static_cast<FrameType>(header[0]), std::vector<std::uint8_t>(len)};
  if (len > 0)
    stream.read_exact(f.payload.data(), len);
  return f;
}

inline std::optional<Frame> poll_frame(ByteStream &stream, int timeout_ms) {
  if (!stream.poll_readable(timeout_ms))
    return std::nullopt;
  return read_frame(stream);
}

// In-process duplex pipe with rendezvous-exact poll semantics: when one
// endpoint polls and the other is blocked reading with an empty incoming
// buffer, the poll reports "peer will not speak" instead of waiting on a
// clock. Protocol tests are therefore timing-independent.
class LoopbackConnection {
  struct Shared {
    struct Direction {
      std::deque<std::uint8_t> buffer;
      bool closed = false;
      bool reader_waiting = false;
    };
    std::mutex mutex;
    std::condition_variable cv;
    Direction dir[2]; // dir[0]: endpoint 0 -> 1, dir[1]: endpoint 1 -> 0
  };

  class Endpoint : public ByteStream {
  public:
    Endpoint(std::shared_ptr<Shared> shared, int id) : shared_(std::move(shared)), id_(id) {}
    ~Endpoint() override { close(); }

    void write_all(const std::uint8_t *data, std::size_t len) override {
      std::lock_guard<std::mutex> lock(shared_->mutex);
      Shared::Direction &out = shared_->dir[id_];
      if (out.closed)
        throw TransportError("loopback write after close");
      out.buffer.insert(out.buffer.end(), data, data + len);
      shared_->cv.notify_all();
    }

    void read_exact(std::uint8_t *data, std::size_t len) override {
      std::unique_lock<std::mutex> lock(shared_->mutex);
      Shared::Direction &in = shared_->dir[1 - id_];
      while (in.buffer.size() < len) {
        if (in.closed)
          throw TransportError("loopback closed with " + std::to_string(in.buffer.size()) +
                               " of " + std::to_string(len) + " bytes available");
        in.reader_waiting = true;
        shared_->cv.notify_all();
        shared_->cv.wait(lock);
      }
      in.reader_waiting = false;
      for (std::size_t i = 0; i < len; ++i) {
        data[i] = in.buffer.front();
        in.buffer.pop_front();
      }
      shared_->cv.notify_all();
    }

    bool poll_readable(int /*timeout_ms*/) override {
      std::unique_lock<std::mutex> lock(shared_->mutex);
      for (;;) {
        const Shared::Direction &in = shared_->dir[1 - id_];
        const Shared::Direction &out = shared_->dir[id_];
        if (!in.buffer.empty())
          return true;
        if (in.closed)
          return false;
        if (out.reader_waiting && out.buffer.empty())
          return false; // peer consumed everything and is itself waiting
        shared_->cv.wait(lock);
      }
    }

    void close() override {
      std::lock_guard<std::mutex> lock(shared_->mutex);
      shared_->dir[0].closed = true;
      shared_->dir[1].closed = true;
      shared_->cv.notify_all();
    }

  private:
    std::shared_ptr<Shared> shared_;
    int id_;
  };

public:
  static std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make() {
    auto shared = std::make_shared<Shared>();
    return {std::make_unique<Endpoint>(shared, 0), std::make_unique<Endpoint>(shared, 1)};
  }
};

// Shared frame-type log for wire-conformance tests.
class FrameLog {
public:
  void record(std::uint8_t type) {
    std::lock_guard<std::mutex> lock(mutex_);
    types_.push_back(type);
  }

  std::vector<std::uint8_t> snapshot() {
    std::lock_guard<std::mutex> lock(mutex_);
    return types_;
  }

private:
  std::mutex mutex_;
  std::vector<std::uint8_t> types_;
};

// Forwards to an inner stream, logging the type byte of every frame
// written through it.
class TapStream : public ByteStream {
public:
  TapStream(ByteStream &inner, FrameLog &log) : inner_(inner), log_(log) {}

  void write_all(const std::uint8_t *data, std::size_t len) override {
    if (len > 0)
      log_.record(data[0]);
    inner_.write_all(data, len);
  }
  void read_exact(std::uint8_t *data, std::size_t len) override {
    inner_.read_exact(data, len);
  }
  bool poll_readable(int timeout_ms) override { return inner_.poll_readable(timeout_ms); }
  void close() override { inner_.close(); }

private:
  ByteStream &inner_;
  FrameLog &log_;
};

} // namespace hcowf2
