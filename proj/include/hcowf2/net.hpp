#pragma once

#include <cerrno>
#include <cstring>
#include <memory>
#include <string>

#include <arpa/inet.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include "hcowf2/errors.hpp"
#include "hcowf2/wire.hpp"

namespace hcowf2 {

// "host:port" -> (host, port); bare ":port" binds the wildcard address.
inline std::pair<std::string, std::string> split_hostport(const std::string &addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon + 1 == addr.size())
    throw ParameterError("address must be host:port, got \"" + addr + "\"");
  return {addr.substr(0, colon), addr.substr(colon + 1)};
}

class TcpStream : public ByteStream {
public:
  explicit TcpStream(int fd) : fd_(fd) {}
  TcpStream(TcpStream &&other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  TcpStream(const TcpStream &) = delete;
  TcpStream &operator=(const TcpStream &) = delete;
  ~TcpStream() override { close(); }

  void write_all(const std::uint8_t *data, std::size_t len) override {
    std::size_t sent = 0;
    while (sent < len) {
      const ssize_t r = ::send(fd_, data + sent, len - sent, MSG_NOSIGNAL);
      if (r < 0) {
        if (errno == EINTR)
          continue;
        throw TransportError(std::string("send failed: ") + std::strerror(errno));
      }
      sent += static_cast<std::size_t>(r);
    }
  }

  void read_exact(std::uint8_t *data, std::size_t len) override {
    std::size_t got = 0;
    while (got < len) {
      const ssize_t r = ::recv(fd_, data + got, len - got, 0);
      if (r < 0) {
        if (errno == EINTR)
          continue;
        throw TransportError(std::string("recv failed: ") + std::strerror(errno));
      }
      if (r == 0)
        throw TransportError("connection closed mid-read");
      got += static_cast<std::size_t>(r);
    }
  }

  bool poll_readable(int timeout_ms) override {
    pollfd pfd{fd_, POLLIN, 0};
    for (;;) {
      const int r = ::poll(&pfd, 1, timeout_ms);
      if (r < 0) {
        if (errno == EINTR)
          continue;
        throw TransportError(std::string("poll failed: ") + std::strerror(errno));
      }
      return r > 0;
    }
  }

  void close() override {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

private:
  int fd_;
};

inline std::unique_ptr<TcpStream> tcp_connect(const std::string &addr) {
  const auto [host, port] = split_hostport(addr);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo *res = nullptr;
  const int rc = ::getaddrinfo(host.empty() ? "127.0.0.1" : host.c_str(), port.c_str(),
                               &hints, &res);
  if (rc != 0)
    throw TransportError("cannot resolve " + addr + ": " + gai_strerror(rc));
  int fd = -1;
  std::string last_error = "no addresses";
  for (addrinfo *ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0)
      continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0)
      break;
    last_error = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0)
    throw TransportError("cannot connect to " + addr + ": " + last_error);
  return std::make_unique<TcpStream>(fd);
}

class TcpListener {
public:
  explicit TcpListener(const std::string &addr) {
    const auto [host, port] = split_hostport(addr);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo *res = nullptr;
    const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), port.c_str(),
                                 &hints, &res);
    if (rc != 0)
      throw TransportError("cannot resolve " + addr + ": " + gai_strerror(rc));
    std::string last_error = "no addresses";
    for (addrinfo *ai = res; ai != nullptr; ai = ai->ai_next) {
      fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd_ < 0)
        continue;
      const int one = 1;
      ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
      if (::bind(fd_, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd_, 16) == 0) {
        if (ai->ai_family == AF_INET)
          port_ = ntohs(reinterpret_cast<sockaddr_in *>(ai->ai_addr)->sin_port);
        break;
      }
      last_error = std::strerror(errno);
      ::close(fd_);
      fd_ = -1;
    }
    ::freeaddrinfo(res);
    if (fd_ < 0)
      throw TransportError("cannot listen on " + addr + ": " + last_error);
    if (port_ == 0) {
      sockaddr_storage ss{};
      socklen_t slen = sizeof ss;
      if (::getsockname(fd_, reinterpret_cast<sockaddr *>(&ss), &slen) == 0) {
        if (ss.ss_family == AF_INET)
          port_ = ntohs(reinterpret_cast<sockaddr_in *>(&ss)->sin_port);
        else if (ss.ss_family == AF_INET6)
          port_ = ntohs(reinterpret_cast<sockaddr_in6 *>(&ss)->sin6_port);
      }
    }
  }

  TcpListener(const TcpListener &) = delete;
  TcpListener &operator=(const TcpListener &) = delete;
  ~TcpListener() {
    if (fd_ >= 0)
      ::close(fd_);
  }

  std::unique_ptr<TcpStream> accept() {
    for (;;) {
      const int client = ::accept(fd_, nullptr, nullptr);
      if (client >= 0)
        return std::make_unique<TcpStream>(client);
      if (errno == EINTR)
        continue;
      throw TransportError(std::string("accept failed: ") + std::strerror(errno));
    }
  }

  // Bound port; resolves port 0 requests to the kernel-assigned port.
  std::uint16_t port() const { return port_; }

private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

} // namespace hcowf2
