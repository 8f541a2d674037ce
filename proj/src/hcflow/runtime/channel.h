// Copyright 2026 The hcflow Authors
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

#ifndef HCFLOW_RUNTIME_CHANNEL_H_
#define HCFLOW_RUNTIME_CHANNEL_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>

#include "hcflow/error.h"
#include "hcflow/value.h"

namespace hcflow {

inline constexpr std::size_t kDefaultChannelCapacity = 64;

struct Token {
  Value payload;
  std::uint64_t seq = 0;
};

// Bounded blocking FIFO in the CSP style. Put blocks while the buffer is
// full, Get blocks while it is empty and open. After Close the residue is
// drained and Get then reports end-of-stream (nullopt).
template <typename T>
class Channel {
 public:
  explicit Channel(std::size_t capacity = kDefaultChannelCapacity)
      : capacity_(capacity) {
    if (capacity_ == 0) {
      throw Error(ErrorCode::kInvalidArgument, "channel capacity must be > 0");
    }
  }

  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  // Throws Error{kPutAfterClose}, including when the channel is closed
  // while this call is blocked.
  void Put(T value) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] {
      return closed_ || discarding_ || buffer_.size() < capacity_;
    });
    if (closed_) throw Error(ErrorCode::kPutAfterClose, "put on closed channel");
    if (discarding_) {
      ++put_count_;
      ++get_count_;
      return;
    }
    buffer_.push_back(std::move(value));
    ++put_count_;
    not_empty_.notify_one();
  }

  std::optional<T> Get() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return closed_ || !buffer_.empty(); });
    if (buffer_.empty()) return std::nullopt;
    T value = std::move(buffer_.front());
    buffer_.pop_front();
    ++get_count_;
    not_full_.notify_one();
    return value;
  }

  void Close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  // The consumer is done reading: buffered and future values are dropped
  // and count as taken, and Put never blocks again.
  void Discard() {
    std::lock_guard lock(mu_);
    discarding_ = true;
    get_count_ += buffer_.size();
    buffer_.clear();
    not_full_.notify_all();
  }

  // Close and discard anything buffered. Used to tear a failed run down.
  void Cancel() {
    std::lock_guard lock(mu_);
    closed_ = true;
    buffer_.clear();
    not_empty_.notify_all();
    not_full_.notify_all();
  }

  std::size_t capacity() const { return capacity_; }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return buffer_.size();
  }

  bool closed() const {
    std::lock_guard lock(mu_);
    return closed_;
  }

  std::uint64_t put_count() const {
    std::lock_guard lock(mu_);
    return put_count_;
  }

  std::uint64_t get_count() const {
    std::lock_guard lock(mu_);
    return get_count_;
  }

 private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::deque<T> buffer_;
  bool closed_ = false;
  bool discarding_ = false;
  std::uint64_t put_count_ = 0;
  std::uint64_t get_count_ = 0;
};

}  // namespace hcflow

#endif  // HCFLOW_RUNTIME_CHANNEL_H_
