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
#include "dla/remote.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <sstream>
#include <thread>

namespace dla {

namespace {

void IgnoreSigpipeOnce() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void PutU32(std::uint32_t v, std::uint8_t* p) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

std::uint32_t GetU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}

// Reads whitespace-separated fields and validates the verb.
std::vector<std::string> SplitFields(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> fields;
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

int ParsePositiveInt(const std::string& field, const char* what) {
  try {
    std::size_t pos = 0;
    const int value = std::stoi(field, &pos);
    if (pos != field.size() || value < 1) throw std::invalid_argument(what);
    return value;
  } catch (const std::exception&) {
    throw ProtocolError(std::string("malformed ") + what + ": " + field);
  }
}

// Blocks until the fd is readable or the timeout expires.
void WaitReadable(int fd, int timeout_ms) {
  struct pollfd pfd = {fd, POLLIN, 0};
  const int rc = ::poll(&pfd, 1, timeout_ms);
  if (rc == 0) {
    throw TransportError("read timed out after " +
                         std::to_string(timeout_ms) + " ms");
  }
  if (rc < 0) {
    throw TransportError(std::string("poll failed: ") + std::strerror(errno));
  }
}

void SendFd(int fd, const void* data, std::size_t n) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  while (n > 0) {
    const ssize_t written = ::write(fd, p, n);
    if (written < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("write failed: ") +
                           std::strerror(errno));
    }
    p += written;
    n -= static_cast<std::size_t>(written);
  }
}

void RecvFd(int fd, void* data, std::size_t n, int timeout_ms) {
  auto* p = static_cast<std::uint8_t*>(data);
  while (n > 0) {
    WaitReadable(fd, timeout_ms);
    const ssize_t got = ::read(fd, p, n);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("read failed: ") +
                           std::strerror(errno));
    }
    if (got == 0) {
      throw TransportError("connection closed mid-message");
    }
    p += got;
    n -= static_cast<std::size_t>(got);
  }
}

}  // namespace

std::string FormatModelLine(const ModelInfo& info) {
  std::ostringstream out;
  out << "MODEL " << info.name << ' ' << info.num_classes << ' '
      << info.channels << ' ' << info.height << ' ' << info.width << '\n';
  return out.str();
}

ModelInfo ParseModelLine(const std::string& line) {
  const auto fields = SplitFields(line);
  if (fields.size() != 6 || fields[0] != "MODEL") {
    throw ProtocolError("expected MODEL line, got: " + line);
  }
  ModelInfo info;
  info.name = fields[1];
  info.num_classes = ParsePositiveInt(fields[2], "class count");
  info.channels = ParsePositiveInt(fields[3], "channel count");
  info.height = ParsePositiveInt(fields[4], "height");
  info.width = ParsePositiveInt(fields[5], "width");
  return info;
}

std::string FormatSegmentLine(int channels, int height, int width) {
  std::ostringstream out;
  out << "SEGMENT " << channels << ' ' << height << ' ' << width << '\n';
  return out.str();
}

SegmentRequest ParseSegmentLine(const std::string& line) {
  const auto fields = SplitFields(line);
  if (fields.size() != 4 || fields[0] != "SEGMENT") {
    throw ProtocolError("expected SEGMENT line, got: " + line);
  }
  SegmentRequest request;
  request.channels = ParsePositiveInt(fields[1], "channel count");
  request.height = ParsePositiveInt(fields[2], "height");
  request.width = ParsePositiveInt(fields[3], "width");
  return request;
}

std::string FormatLabelsLine(int height, int width, int num_classes) {
  std::ostringstream out;
  out << "LABELS " << height << ' ' << width << ' ' << num_classes << '\n';
  return out.str();
}

LabelsHeader ParseLabelsLine(const std::string& line) {
  const auto fields = SplitFields(line);
  if (fields.size() != 4 || fields[0] != "LABELS") {
    throw ProtocolError("expected LABELS line, got: " + line);
  }
  LabelsHeader header;
  header.height = ParsePositiveInt(fields[1], "height");
  header.width = ParsePositiveInt(fields[2], "width");
  header.num_classes = ParsePositiveInt(fields[3], "class count");
  return header;
}

std::vector<std::uint8_t> EncodeImagePayload(const Image& image) {
  std::vector<std::uint8_t> bytes(image.size() * 4);
  for (std::size_t i = 0; i < image.size(); ++i) {
    const float value = static_cast<float>(image.data()[i]);
    PutU32(std::bit_cast<std::uint32_t>(value), &bytes[i * 4]);
  }
  return bytes;
}

Image DecodeImagePayload(const std::vector<std::uint8_t>& bytes, int channels,
                         int height, int width) {
  const std::size_t count =
      static_cast<std::size_t>(channels) * height * width;
  if (bytes.size() != count * 4) {
    throw ProtocolError("image payload size mismatch");
  }
  Image image(channels, height, width);
  for (std::size_t i = 0; i < count; ++i) {
    const float value = std::bit_cast<float>(GetU32(&bytes[i * 4]));
    // Clamp guards against nonconforming peers; in-range floats pass through.
    image.data()[i] = std::min(1.0, std::max(0.0, static_cast<double>(value)));
  }
  return image;
}

std::vector<std::uint8_t> EncodeLabelsPayload(const LabelMap& labels) {
  std::vector<std::uint8_t> bytes(labels.size() * 2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint16_t v = labels.labels()[i];
    bytes[i * 2] = static_cast<std::uint8_t>(v);
    bytes[i * 2 + 1] = static_cast<std::uint8_t>(v >> 8);
  }
  return bytes;
}

LabelMap DecodeLabelsPayload(const std::vector<std::uint8_t>& bytes,
                             int height, int width, int num_classes) {
  const std::size_t count = static_cast<std::size_t>(height) * width;
  if (bytes.size() != count * 2) {
    throw ProtocolError("label payload size mismatch");
  }
  std::vector<std::uint16_t> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    labels[i] = static_cast<std::uint16_t>(
        bytes[i * 2] | static_cast<std::uint16_t>(bytes[i * 2 + 1]) << 8);
    if (labels[i] >= num_classes) {
      throw ProtocolError("label " + std::to_string(labels[i]) +
                          " >= declared class count " +
                          std::to_string(num_classes));
    }
  }
  return LabelMap::FromLabels(height, width, num_classes, std::move(labels));
}

std::string Transport::RecvLine(std::size_t max_len) {
  std::string line;
  char c = 0;
  while (line.size() < max_len) {
    Recv(&c, 1);
    if (c == '\n') return line;
    line.push_back(c);
  }
  throw ProtocolError("header line exceeds " + std::to_string(max_len) +
                      " bytes");
}

SubprocessTransport::SubprocessTransport(const std::string& command,
                                         int timeout_ms)
    : timeout_ms_(timeout_ms) {
  IgnoreSigpipeOnce();
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
    throw TransportError(std::string("pipe failed: ") + std::strerror(errno));
  }
  const int pid = ::fork();
  if (pid < 0) {
    throw TransportError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    _exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  child_pid_ = pid;
  to_child_ = to_child[1];
  from_child_ = from_child[0];
}

SubprocessTransport::~SubprocessTransport() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (child_pid_ > 0) {
    int status = 0;
    ::waitpid(child_pid_, &status, 0);
  }
}

void SubprocessTransport::Send(const void* data, std::size_t n) {
  SendFd(to_child_, data, n);
}

void SubprocessTransport::Recv(void* data, std::size_t n) {
  RecvFd(from_child_, data, n, timeout_ms_);
}

TcpTransport::TcpTransport(const std::string& host, int port, int timeout_ms)
    : timeout_ms_(timeout_ms) {
  IgnoreSigpipeOnce();
  struct addrinfo hints = {};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  struct addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result);
  if (rc != 0) {
    throw TransportError("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  int fd = -1;
  for (struct addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(result);
  if (fd < 0) {
    throw TransportError("cannot connect to " + host + ":" + service);
  }
  fd_ = fd;
}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpTransport::Send(const void* data, std::size_t n) {
  SendFd(fd_, data, n);
}

void TcpTransport::Recv(void* data, std::size_t n) {
  RecvFd(fd_, data, n, timeout_ms_);
}

std::unique_ptr<Transport> OpenTransport(const std::string& endpoint,
                                         int timeout_ms) {
  if (endpoint.rfind("cmd:", 0) == 0) {
    return std::make_unique<SubprocessTransport>(endpoint.substr(4),
                                                 timeout_ms);
  }
  if (endpoint.rfind("tcp:", 0) == 0) {
    const std::string rest = endpoint.substr(4);
    const std::size_t colon = rest.rfind(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("tcp endpoint must be tcp:<host>:<port>");
    }
    const std::string host = rest.substr(0, colon);
    int port = 0;
    try {
      std::size_t pos = 0;
      port = std::stoi(rest.substr(colon + 1), &pos);
      if (pos != rest.size() - colon - 1 || port < 1 || port > 65535) {
        throw std::invalid_argument("port");
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("tcp endpoint has a malformed port: " +
                                  endpoint);
    }
    return std::make_unique<TcpTransport>(host, port, timeout_ms);
  }
  throw std::invalid_argument("unrecognized endpoint descriptor: " + endpoint);
}

RemoteOracle::RemoteOracle(const std::string& endpoint, int max_attempts,
                           int backoff_ms, int timeout_ms)
    : endpoint_(endpoint),
      max_attempts_(max_attempts),
      backoff_ms_(backoff_ms),
      timeout_ms_(timeout_ms) {
  Connect();
}

RemoteOracle::~RemoteOracle() = default;

void RemoteOracle::Connect() const {
  int attempt = 0;
  while (true) {
    ++attempt;
    try {
      transport_ = OpenTransport(endpoint_, timeout_ms_);
      transport_->Send("HELLO\n", 6);
      model_ = ParseModelLine(transport_->RecvLine());
      return;
    } catch (const TransportError& err) {
      transport_.reset();
      if (attempt >= max_attempts_) {
        throw TransportError("handshake with " + endpoint_ + " failed after " +
                                 std::to_string(attempt) +
                                 " attempts: " + err.what(),
                             attempt);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms_));
    }
  }
}

LabelMap RemoteOracle::QueryOnce(const Image& image) const {
  if (!transport_) Connect();
  const std::string header =
      FormatSegmentLine(image.channels(), image.height(), image.width());
  transport_->Send(header.data(), header.size());
  const std::vector<std::uint8_t> payload = EncodeImagePayload(image);
  transport_->Send(payload.data(), payload.size());

  const LabelsHeader labels_header = ParseLabelsLine(transport_->RecvLine());
  if (labels_header.height != image.height() ||
      labels_header.width != image.width()) {
    throw ProtocolError("response shape does not match the request");
  }
  std::vector<std::uint8_t> bytes(
      static_cast<std::size_t>(labels_header.height) * labels_header.width *
      2);
  transport_->Recv(bytes.data(), bytes.size());
  return DecodeLabelsPayload(bytes, labels_header.height, labels_header.width,
                             labels_header.num_classes);
}

LabelMap RemoteOracle::Query(const Image& image) const {
  int attempt = 0;
  while (true) {
    ++attempt;
    try {
      return QueryOnce(image);
    } catch (const TransportError& err) {
      transport_.reset();
      if (attempt >= max_attempts_) {
        throw TransportError("query to " + endpoint_ + " failed after " +
                                 std::to_string(attempt) +
                                 " attempts: " + err.what(),
                             attempt);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms_));
    }
  }
}

}  // namespace dla
