//
// Copyright 2026 The Unlearn Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef UNLEARN_AUDIT_RANDOM_H_
#define UNLEARN_AUDIT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace unlearn_audit {

// All randomness flows through explicitly seeded engines of this type.
using Rng = std::mt19937_64;

// Mixes a seed with a stream id (SplitMix64 finalizer) so that independent
// consumers of one seed do not share a stream.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// A uniformly shuffled permutation of [0, n).
std::vector<std::size_t> ShuffledIndices(std::size_t n, Rng& rng);

// `count` distinct elements of `items`, drawn uniformly.
std::vector<std::size_t> SampleWithoutReplacement(
    const std::vector<std::size_t>& items, std::size_t count, Rng& rng);

}  // namespace unlearn_audit

#endif  // UNLEARN_AUDIT_RANDOM_H_
