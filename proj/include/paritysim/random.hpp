// Copyright 2026 The paritysim Authors
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

// Reproducible random streams.
//
// Every unit of Monte Carlo work (an ensemble, a synthesized window) owns an
// independent stream keyed by (seed, index path). Keys are a SplitMix64 hash
// chain over the path; each key seeds a std::mt19937_64 engine. Normal deviates
// use the Box-Muller transform on 53-bit uniforms, so output does not depend
// on the standard library's distribution implementations, on thread count, or
// on the order in which streams are consumed.

#ifndef PARITYSIM_RANDOM_HPP
#define PARITYSIM_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace paritysim {

/// One SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

std::uint64_t derive_stream_key(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> path) noexcept;

class NormalStream {
  public:
    explicit NormalStream(std::uint64_t key) : engine_(key) {}

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal deviate.
    double normal() noexcept;

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace paritysim

#endif  // PARITYSIM_RANDOM_HPP
