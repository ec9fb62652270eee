/* Copyright 2026 The DLA Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Reference model server for the label-only wire protocol. Serves the
// built-in segmenters over stdin/stdout (the cmd: transport) or a TCP port.

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dla/oracle.hpp"
#include "dla/remote.hpp"

namespace {

// Blocking exact-size I/O on raw fds; returns false on EOF at a message
// boundary, throws on mid-message EOF.
bool ReadExact(int fd, void* data, std::size_t n, bool eof_ok) {
  auto* p = static_cast<std::uint8_t*>(data);
  std::size_t done = 0;
  while (done < n) {
    const ssize_t got = ::read(fd, p + done, n - done);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("read failed: ") +
                               std::strerror(errno));
    }
    if (got == 0) {
      if (done == 0 && eof_ok) return false;
      throw std::runtime_error("unexpected EOF mid-message");
    }
    done += static_cast<std::size_t>(got);
  }
  return true;
}

void WriteExact(int fd, const void* data, std::size_t n) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  std::size_t done = 0;
  while (done < n) {
    const ssize_t put = ::write(fd, p + done, n - done);
    if (put < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("write failed: ") +
                               std::strerror(errno));
    }
    done += static_cast<std::size_t>(put);
  }
}

// Reads one header line; empty optional-like false on clean EOF.
bool ReadLine(int fd, std::string& line) {
  line.clear();
  char c = 0;
  while (true) {
    if (!ReadExact(fd, &c, 1, line.empty())) return false;
    if (c == '\n') return true;
    line.push_back(c);
    if (line.size() > 256) {
      throw std::runtime_error("header line too long");
    }
  }
}

struct ServerConfig {
  std::string oracle = "threshold";
  int classes = 19;
  int radius = 1;
  std::string name;
  int channels = 3;
  int height = 64;
  int width = 64;
};

// Serves one connection until the peer closes it.
void ServeConnection(int in_fd, int out_fd, const dla::Oracle& oracle,
                     const ServerConfig& config) {
  std::string line;
  while (ReadLine(in_fd, line)) {
    if (line == "HELLO") {
      dla::ModelInfo info;
      info.name = config.name.empty() ? oracle.name() : config.name;
      info.num_classes = oracle.num_classes();
      info.channels = config.channels;
      info.height = config.height;
      info.width = config.width;
      const std::string reply = dla::FormatModelLine(info);
      WriteExact(out_fd, reply.data(), reply.size());
      continue;
    }
    const dla::SegmentRequest request = dla::ParseSegmentLine(line);
    std::vector<std::uint8_t> payload(static_cast<std::size_t>(
                                          request.channels) *
                                      request.height * request.width * 4);
    ReadExact(in_fd, payload.data(), payload.size(), false);
    const dla::Image image = dla::DecodeImagePayload(
        payload, request.channels, request.height, request.width);
    const dla::LabelMap labels = oracle.Query(image);

    const std::string header = dla::FormatLabelsLine(
        labels.height(), labels.width(), labels.num_classes());
    WriteExact(out_fd, header.data(), header.size());
    const std::vector<std::uint8_t> body = dla::EncodeLabelsPayload(labels);
    WriteExact(out_fd, body.data(), body.size());
  }
}

int ServeTcp(int port, const dla::Oracle& oracle,
             const ServerConfig& config) {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) {
    std::perror("socket");
    return 1;
  }
  const int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  struct sockaddr_in addr = {};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(listener, reinterpret_cast<struct sockaddr*>(&addr),
             sizeof(addr)) != 0 ||
      ::listen(listener, 4) != 0) {
    std::perror("bind/listen");
    ::close(listener);
    return 1;
  }
  socklen_t addr_len = sizeof(addr);
  ::getsockname(listener, reinterpret_cast<struct sockaddr*>(&addr),
                &addr_len);
  std::printf("LISTENING %d\n", ntohs(addr.sin_port));
  std::fflush(stdout);

  while (true) {
    const int client = ::accept(listener, nullptr, nullptr);
    if (client < 0) {
      if (errno == EINTR) continue;
      std::perror("accept");
      break;
    }
    try {
      ServeConnection(client, client, oracle, config);
    } catch (const std::exception& err) {
      std::fprintf(stderr, "client error: %s\n", err.what());
    }
    ::close(client);
  }
  ::close(listener);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  ::signal(SIGPIPE, SIG_IGN);

  CLI::App app{"reference label-only model server (wire protocol over "
               "stdio or TCP)"};
  ServerConfig config;
  int tcp_port = -1;
  app.add_option("--oracle", config.oracle)
      ->check(CLI::IsMember({"threshold", "palette", "context"}));
  app.add_option("--classes", config.classes)->check(CLI::Range(2, 65535));
  app.add_option("--radius", config.radius)->check(CLI::PositiveNumber);
  app.add_option("--name", config.name, "model name for the handshake");
  app.add_option("--channels", config.channels)->check(CLI::Range(1, 16));
  app.add_option("--height", config.height)->check(CLI::PositiveNumber);
  app.add_option("--width", config.width)->check(CLI::PositiveNumber);
  app.add_option("--tcp", tcp_port,
                 "listen on this TCP port (0 picks one) instead of stdio")
      ->check(CLI::Range(0, 65535));
  CLI11_PARSE(app, argc, argv);

  try {
    const auto oracle =
        dla::MakeOracle(config.oracle, config.classes, config.radius);
    if (tcp_port >= 0) {
      return ServeTcp(tcp_port, *oracle, config);
    }
    ServeConnection(STDIN_FILENO, STDOUT_FILENO, *oracle, config);
    return 0;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "server error: %s\n", err.what());
    return 1;
  }
}
