// Copyright 2026 The rfppg Authors
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

#ifndef RFPPG_FFT_HPP
#define RFPPG_FFT_HPP

#include <span>

#include "rfppg/signal.hpp"

namespace rfppg {

// Forward transform is unnormalized; the inverse carries 1/N. Power-of-two
// lengths use an in-place radix-2 FFT, anything else falls back to the direct
// O(N^2) sum.
void dft_inplace(std::span<Complex> data);
void idft_inplace(std::span<Complex> data);

}  // namespace rfppg

#endif  // RFPPG_FFT_HPP
