/*
 * Copyright 2026 The CoPhIK Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace cophik {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for the `index`-th independent substream derived from `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Platform-stable random stream: mt19937_64 bits, 53-bit uniforms, and
/// Box-Muller standard normals (both outputs of each pair are used, cosine
/// branch first). The standard library distributions are avoided because
/// their algorithms differ between implementations.
class Rng {
public:
    static constexpr const char* kName = "mt19937_64/box-muller";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform();
    double normal();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cophik
