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
#ifndef DLA_REMOTE_H_
#define DLA_REMOTE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dla/oracle.hpp"
#include "dla/types.hpp"

namespace dla {

// Wire protocol, shared by the client and the reference server:
//   handshake   "HELLO\n"              -> "MODEL <name> <K> <C> <H> <W>\n"
//   request     "SEGMENT <C> <H> <W>\n" + C*H*W little-endian float32
//   response    "LABELS <H> <W> <K>\n"  + H*W little-endian uint16 labels
// Transport is either a spawned subprocess's standard streams ("cmd:<program>")
// or a TCP connection ("tcp:<host>:<port>").

struct ModelInfo {
  std::string name;
  int num_classes = 0;
  int channels = 0;
  int height = 0;
  int width = 0;
};

struct SegmentRequest {
  int channels = 0;
  int height = 0;
  int width = 0;
};

struct LabelsHeader {
  int height = 0;
  int width = 0;
  int num_classes = 0;
};

// Header-line codecs. Parse functions throw ProtocolError on malformed input.
std::string FormatModelLine(const ModelInfo& info);
ModelInfo ParseModelLine(const std::string& line);
std::string FormatSegmentLine(int channels, int height, int width);
SegmentRequest ParseSegmentLine(const std::string& line);
std::string FormatLabelsLine(int height, int width, int num_classes);
LabelsHeader ParseLabelsLine(const std::string& line);

// Payload codecs. Image values are truncated to float32 on encode; labels are
// validated against num_classes on decode (ProtocolError when out of range).
std::vector<std::uint8_t> EncodeImagePayload(const Image& image);
Image DecodeImagePayload(const std::vector<std::uint8_t>& bytes, int channels,
                         int height, int width);
std::vector<std::uint8_t> EncodeLabelsPayload(const LabelMap& labels);
LabelMap DecodeLabelsPayload(const std::vector<std::uint8_t>& bytes,
                             int height, int width, int num_classes);

// A bidirectional byte stream. Recv reads exactly n bytes or throws
// TransportError (EOF, broken pipe, or timeout).
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void Send(const void* data, std::size_t n) = 0;
  virtual void Recv(void* data, std::size_t n) = 0;
  std::string RecvLine(std::size_t max_len = 256);
};

// Spawns `/bin/sh -c <command>` and talks over its stdin/stdout.
class SubprocessTransport : public Transport {
 public:
  explicit SubprocessTransport(const std::string& command, int timeout_ms);
  ~SubprocessTransport() override;
  void Send(const void* data, std::size_t n) override;
  void Recv(void* data, std::size_t n) override;

 private:
  int child_pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  int timeout_ms_;
};

class TcpTransport : public Transport {
 public:
  TcpTransport(const std::string& host, int port, int timeout_ms);
  ~TcpTransport() override;
  void Send(const void* data, std::size_t n) override;
  void Recv(void* data, std::size_t n) override;

 private:
  int fd_ = -1;
  int timeout_ms_;
};

// Opens "cmd:<program>" or "tcp:<host>:<port>". Throws TransportError on
// failure, std::invalid_argument on an unrecognized descriptor.
std::unique_ptr<Transport> OpenTransport(const std::string& endpoint,
                                         int timeout_ms);

// A label-only oracle behind the wire protocol. Queries retry transient
// transport failures with a fresh connection and fixed backoff; retries never
// count as oracle queries. Protocol violations are not retried.
class RemoteOracle : public Oracle {
 public:
  explicit RemoteOracle(const std::string& endpoint, int max_attempts = 3,
                        int backoff_ms = 100, int timeout_ms = 10000);
  ~RemoteOracle() override;

  LabelMap Query(const Image& image) const override;
  int num_classes() const override { return model_.num_classes; }
  const std::string& name() const override { return model_.name; }
  const ModelInfo& model() const { return model_; }

 private:
  void Connect() const;
  LabelMap QueryOnce(const Image& image) const;

  std::string endpoint_;
  int max_attempts_;
  int backoff_ms_;
  int timeout_ms_;
  mutable ModelInfo model_;
  mutable std::unique_ptr<Transport> transport_;
};

}  // namespace dla

#endif  // DLA_REMOTE_H_
