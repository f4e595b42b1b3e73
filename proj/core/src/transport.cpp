// Copyright 2026 The seconnds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seconnds/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include "seconnds/errors.hpp"

namespace seconnds {

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::kControl: return "control";
    case Tag::kBaseOt: return "base_ot";
    case Tag::kOtExtension: return "ot_extension";
    case Tag::kAnd: return "and";
    case Tag::kB2A: return "b2a";
    case Tag::kCot: return "cot";
    case Tag::kMill: return "mill";
    case Tag::kDrelu: return "drelu";
    case Tag::kRelu: return "relu";
    case Tag::kTrunc: return "trunc";
    case Tag::kMaxPool: return "maxpool";
    case Tag::kAvgPool: return "avgpool";
    case Tag::kArgMax: return "argmax";
    case Tag::kHeSetup: return "he_setup";
    case Tag::kConv: return "conv";
    case Tag::kFc: return "fc";
    case Tag::kLabel: return "label";
    case Tag::kTest: return "test";
    case Tag::kCount_: break;
  }
  return "unknown";
}

const char* payload_class_name(PayloadClass c) {
  switch (c) {
    case PayloadClass::kControl: return "control";
    case PayloadClass::kOtMessage: return "ot_message";
    case PayloadClass::kCorrectionBits: return "correction_bits";
    case PayloadClass::kMaskedValues: return "masked_values";
    case PayloadClass::kCiphertext: return "ciphertext";
    case PayloadClass::kLabelOpening: return "label_opening";
  }
  return "unknown";
}

TagCounters& TagCounters::operator+=(const TagCounters& o) {
  bytes_sent += o.bytes_sent;
  bytes_received += o.bytes_received;
  rounds += o.rounds;
  and_gates += o.and_gates;
  triples_consumed += o.triples_consumed;
  cots += o.cots;
  return *this;
}

TagCounters TagCounters::operator-(const TagCounters& o) const {
  return {bytes_sent - o.bytes_sent,     bytes_received - o.bytes_received,
          rounds - o.rounds,             and_gates - o.and_gates,
          triples_consumed - o.triples_consumed, cots - o.cots};
}

TagCounters SessionMeter::total() const {
  TagCounters t;
  for (const auto& c : tags_) t += c;
  return t;
}

void SessionMeter::on_send(Tag tag, std::size_t bytes) {
  const auto i = static_cast<std::size_t>(tag);
  tags_[i].bytes_sent += bytes;
  if (last_[i] != Dir::kSend) {
    ++tags_[i].rounds;
    last_[i] = Dir::kSend;
  }
}

void SessionMeter::on_recv(Tag tag, std::size_t bytes) {
  const auto i = static_cast<std::size_t>(tag);
  tags_[i].bytes_received += bytes;
  if (last_[i] != Dir::kRecv) {
    ++tags_[i].rounds;
    last_[i] = Dir::kRecv;
  }
}

void SessionMeter::on_exchange(Tag tag, std::size_t sent, std::size_t received) {
  const auto i = static_cast<std::size_t>(tag);
  tags_[i].bytes_sent += sent;
  tags_[i].bytes_received += received;
  ++tags_[i].rounds;
  last_[i] = Dir::kBoth;
}

// ---------------------------------------------------------------------------
// Loopback

namespace {

struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Bytes> chunks;
  std::size_t head_offset = 0;
  bool closed = false;
};

class LoopbackStream final : public ByteStream {
 public:
  LoopbackStream(std::shared_ptr<Pipe> out, std::shared_ptr<Pipe> in)
      : out_(std::move(out)), in_(std::move(in)) {}
  ~LoopbackStream() override { close(); }

  void write(std::span<const std::uint8_t> data) override {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw TransportError("loopback: write on closed channel");
    if (data.empty()) return;
    out_->chunks.emplace_back(data.begin(), data.end());
    out_->cv.notify_all();
  }

  void read(std::span<std::uint8_t> dst) override {
    std::unique_lock lock(in_->mu);
    std::size_t done = 0;
    while (done < dst.size()) {
      in_->cv.wait(lock, [&] { return !in_->chunks.empty() || in_->closed; });
      if (in_->chunks.empty()) throw TransportError("loopback: connection closed");
      auto& head = in_->chunks.front();
      const std::size_t n = std::min(dst.size() - done, head.size() - in_->head_offset);
      std::memcpy(dst.data() + done, head.data() + in_->head_offset, n);
      done += n;
      in_->head_offset += n;
      if (in_->head_offset == head.size()) {
        in_->chunks.pop_front();
        in_->head_offset = 0;
      }
    }
  }

  void close() override {
    for (auto* p : {out_.get(), in_.get()}) {
      std::lock_guard lock(p->mu);
      p->closed = true;
      p->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<Pipe> out_;
  std::shared_ptr<Pipe> in_;
};

// ---------------------------------------------------------------------------
// TCP. Writes go through a dedicated thread so that both parties may send a
// large frame at the same time without deadlocking on full socket buffers.

class TcpStream final : public ByteStream {
 public:
  explicit TcpStream(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    writer_ = std::thread([this] { writer_loop(); });
  }
  ~TcpStream() override {
    close();
    if (writer_.joinable()) writer_.join();
    if (fd_ >= 0) ::close(fd_);
  }

  void write(std::span<const std::uint8_t> data) override {
    std::lock_guard lock(mu_);
    if (failed_) throw TransportError("tcp: " + error_);
    if (closing_) throw TransportError("tcp: write on closed channel");
    queue_.emplace_back(data.begin(), data.end());
    cv_.notify_all();
  }

  void read(std::span<std::uint8_t> dst) override {
    std::size_t done = 0;
    while (done < dst.size()) {
      const ssize_t n = ::recv(fd_, dst.data() + done, dst.size() - done, 0);
      if (n == 0) throw TransportError("tcp: connection closed by peer");
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("tcp: recv failed: ") + std::strerror(errno));
      }
      done += static_cast<std::size_t>(n);
    }
  }

  void close() override {
    std::unique_lock lock(mu_);
    if (closing_) return;
    closing_ = true;
    cv_.notify_all();
    // Let queued frames drain before the socket is torn down.
    cv_.wait(lock, [&] { return queue_.empty() || failed_; });
    ::shutdown(fd_, SHUT_WR);
  }

 private:
  void writer_loop() {
    for (;;) {
      Bytes chunk;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return !queue_.empty() || closing_; });
        if (queue_.empty()) return;
        chunk = std::move(queue_.front());
      }
      std::size_t done = 0;
      while (done < chunk.size()) {
        const ssize_t n = ::send(fd_, chunk.data() + done, chunk.size() - done, MSG_NOSIGNAL);
        if (n < 0) {
          if (errno == EINTR) continue;
          std::lock_guard lock(mu_);
          failed_ = true;
          error_ = std::strerror(errno);
          cv_.notify_all();
          return;
        }
        done += static_cast<std::size_t>(n);
      }
      std::lock_guard lock(mu_);
      queue_.pop_front();
      cv_.notify_all();
    }
  }

  int fd_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Bytes> queue_;
  bool closing_ = false;
  bool failed_ = false;
  std::string error_;
  std::thread writer_;
};

}  // namespace

std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_loopback_pair() {
  auto a_to_b = std::make_shared<Pipe>();
  auto b_to_a = std::make_shared<Pipe>();
  return {std::make_unique<LoopbackStream>(a_to_b, b_to_a),
          std::make_unique<LoopbackStream>(b_to_a, a_to_b)};
}

std::unique_ptr<ByteStream> tcp_listen_accept(std::uint16_t port) {
  const int lfd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (lfd < 0) throw TransportError("tcp: socket() failed");
  int one = 1;
  ::setsockopt(lfd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(lfd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(lfd, 1) != 0) {
    const std::string err = std::strerror(errno);
    ::close(lfd);
    throw TransportError("tcp: cannot listen on port " + std::to_string(port) + ": " + err);
  }
  const int fd = ::accept(lfd, nullptr, nullptr);
  ::close(lfd);
  if (fd < 0) throw TransportError("tcp: accept failed");
  return std::make_unique<TcpStream>(fd);
}

std::unique_ptr<ByteStream> tcp_connect(const std::string& host, std::uint16_t port, int retries) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res) {
    throw TransportError("tcp: cannot resolve " + host);
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, ::freeaddrinfo);
  for (int attempt = 0; attempt <= retries; ++attempt) {
    const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) throw TransportError("tcp: socket() failed");
    if (::connect(fd, res->ai_addr, res->ai_addrlen) == 0) return std::make_unique<TcpStream>(fd);
    ::close(fd);
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  throw TransportError("tcp: cannot connect to " + host + ":" + std::to_string(port));
}

// ---------------------------------------------------------------------------
// Channel

Channel::Channel(std::unique_ptr<ByteStream> stream) : stream_(std::move(stream)) {}
Channel::~Channel() = default;
Channel::Channel(Channel&&) noexcept = default;
Channel& Channel::operator=(Channel&&) noexcept = default;

void Channel::write_frame(Tag tag, std::span<const std::uint8_t> payload, PayloadClass cls) {
  if (!stream_) throw TransportError("channel is closed");
  if (payload.size() > kMaxPayloadBytes) throw DomainError("frame payload exceeds 2^30 bytes");
  if (observer_) observer_(tag, cls, payload.size());
  Bytes frame;
  frame.reserve(kFrameHeaderBytes + payload.size());
  const auto len = static_cast<std::uint32_t>(payload.size() + 1);
  for (int i = 0; i < 4; ++i) frame.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  frame.push_back(static_cast<std::uint8_t>(tag));
  frame.insert(frame.end(), payload.begin(), payload.end());
  stream_->write(frame);
}

Bytes Channel::read_frame(Tag expected) {
  if (!stream_) throw TransportError("channel is closed");
  std::uint8_t header[kFrameHeaderBytes];
  stream_->read(header);
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(header[i]) << (8 * i);
  if (len == 0 || len - 1 > kMaxPayloadBytes) throw TransportError("malformed frame length");
  const auto tag = static_cast<Tag>(header[4]);
  Bytes payload(len - 1);
  stream_->read(payload);
  if (tag != expected) {
    throw ProtocolDesync(std::string("expected frame '") + tag_name(expected) + "', got '" +
                         tag_name(tag) + "'");
  }
  return payload;
}

void Channel::send_frame(Tag tag, std::span<const std::uint8_t> payload, PayloadClass cls) {
  write_frame(tag, payload, cls);
  meter_.on_send(tag, payload.size() + kFrameHeaderBytes);
}

Bytes Channel::recv_frame(Tag expected) {
  auto payload = read_frame(expected);
  meter_.on_recv(expected, payload.size() + kFrameHeaderBytes);
  return payload;
}

Bytes Channel::exchange(Tag tag, std::span<const std::uint8_t> payload, PayloadClass cls) {
  write_frame(tag, payload, cls);
  auto in = read_frame(tag);
  meter_.on_exchange(tag, payload.size() + kFrameHeaderBytes, in.size() + kFrameHeaderBytes);
  return in;
}

void Channel::close() {
  if (stream_) stream_->close();
}

std::pair<Channel, Channel> make_loopback_channels() {
  auto [a, b] = make_loopback_pair();
  return {Channel(std::move(a)), Channel(std::move(b))};
}

}  // namespace seconnds
