// Copyright 2026 The sptree Authors
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

#ifndef SPTREE_PROFILE_CODEC_H_
#define SPTREE_PROFILE_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sptree/tree.h"

namespace sptree {

// Mixed-radix index of a profile: agent 1 is the most significant digit,
// code(a) = sum_i a_i * |V|^(n-i). This order is frozen into the table file
// format and into every scan order that reports witnesses.
class ProfileCodec {
 public:
  // Largest table we are willing to materialise.
  static constexpr std::uint64_t kMaxProfiles = std::uint64_t{1} << 28;

  ProfileCodec(int vertex_count, int agents);

  int vertex_count() const { return base_; }
  int agents() const { return agents_; }
  std::uint64_t size() const { return size_; }
  // |V|^(n-1-agent) for a 0-based agent index.
  std::uint64_t weight(int agent) const { return weights_[agent]; }

  std::uint64_t encode(std::span<const Vertex> profile) const;
  void decode(std::uint64_t code, std::span<Vertex> out) const;
  Profile decode(std::uint64_t code) const;
  Vertex digit(std::uint64_t code, int agent) const {
    return static_cast<Vertex>((code / weights_[agent]) % base_);
  }
  // Code of the profile with agent's slot replaced by v.
  std::uint64_t replace(std::uint64_t code, int agent, Vertex v) const {
    return code - static_cast<std::uint64_t>(digit(code, agent)) * weights_[agent] +
           static_cast<std::uint64_t>(v) * weights_[agent];
  }
  // Code of (v, ..., v).
  std::uint64_t diagonal(Vertex v) const { return diagonal_unit_ * v; }

  friend bool operator==(const ProfileCodec&, const ProfileCodec&) = default;

 private:
  int base_;
  int agents_;
  std::uint64_t size_ = 1;
  std::uint64_t diagonal_unit_ = 0;
  std::vector<std::uint64_t> weights_;
};

}  // namespace sptree

#endif  // SPTREE_PROFILE_CODEC_H_
