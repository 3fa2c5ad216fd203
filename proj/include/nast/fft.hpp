/*
   Copyright 2026 the nastlib authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nast::fft {

using cplx = std::complex<double>;

/// Forward real-to-complex transform: out[k] = sum_m in[m] exp(-2*pi*i*k*m/n),
/// k = 0..n/2. `n` must be a power of two.
void forward_r2c(const std::vector<double>& in, std::vector<cplx>& out);

/// Inverse of forward_r2c including the 1/n factor. `spec` holds n/2+1 bins.
void inverse_c2r(const std::vector<cplx>& spec, std::size_t n,
                 std::vector<double>& out);

/// In-place complex transform (sign = -1 forward, +1 backward, unscaled).
void transform_c2c(std::vector<cplx>& data, int sign);

bool is_pow2(std::size_t n);

}  // namespace nast::fft
