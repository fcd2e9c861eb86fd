// Copyright 2026 The rba Authors.
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

#ifndef RBA_RNG_H_
#define RBA_RNG_H_

#include <cstdint>
#include <random>

namespace rba {

// Independent random streams derived from one run seed. Each consumer draws
// from its own stream so that adding draws in one place never shifts another.
enum class Stream : std::uint32_t {
  kAgent = 1,       // sampling a_n from p_n
  kOpponent = 2,    // stochastic opponent strategies
  kValidation = 3,  // oracle spot checks before step 1
};

// mt19937_64 seeded with seed_seq{seed_lo, seed_hi, stream}. Uniform variates
// take the top 53 bits of one engine output, so every Uniform() call consumes
// exactly one engine draw and is identical across standard libraries.
class Rng {
 public:
  Rng(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    engine_.seed(seq);
  }

  // Uniform on [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rba

#endif  // RBA_RNG_H_
