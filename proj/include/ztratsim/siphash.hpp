// Copyright 2026 The ztratsim Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <span>

namespace ztratsim {

/// SipHash-2-4 with 128-bit output, matching the reference implementation
/// byte for byte. Used as the keyed tag over artefact payloads; the
/// simulator treats it as an opaque MAC.
std::array<std::uint8_t, 16> siphash_2_4_128(std::span<const std::uint8_t> data,
                                             const std::array<std::uint8_t, 16>& key);

}  // namespace ztratsim
