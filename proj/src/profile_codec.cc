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

#include "sptree/profile_codec.h"

#include <string>

#include "sptree/error.h"

namespace sptree {

ProfileCodec::ProfileCodec(int vertex_count, int agents)
    : base_(vertex_count), agents_(agents), weights_(agents) {
  if (vertex_count < 1) throw DomainError("empty vertex set");
  if (agents < 1) throw DomainError("need at least one agent");
  for (int i = agents - 1; i >= 0; --i) {
    weights_[i] = size_;
    diagonal_unit_ += size_;
    if (size_ > kMaxProfiles / static_cast<std::uint64_t>(vertex_count)) {
      throw DomainError("profile space " + std::to_string(vertex_count) + "^" +
                        std::to_string(agents) + " is too large to tabulate");
    }
    size_ *= static_cast<std::uint64_t>(vertex_count);
  }
}

std::uint64_t ProfileCodec::encode(std::span<const Vertex> profile) const {
  if (static_cast<int>(profile.size()) != agents_) {
    throw DomainError("profile has " + std::to_string(profile.size()) +
                      " entries, expected " + std::to_string(agents_));
  }
  std::uint64_t code = 0;
  for (Vertex v : profile) {
    if (v < 0 || v >= base_) {
      throw DomainError("invalid vertex id " + std::to_string(v));
    }
    code = code * static_cast<std::uint64_t>(base_) + static_cast<std::uint64_t>(v);
  }
  return code;
}

void ProfileCodec::decode(std::uint64_t code, std::span<Vertex> out) const {
  for (int i = agents_ - 1; i >= 0; --i) {
    out[i] = static_cast<Vertex>(code % base_);
    code /= base_;
  }
}

Profile ProfileCodec::decode(std::uint64_t code) const {
  Profile out(agents_);
  decode(code, out);
  return out;
}

}  // namespace sptree
