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

#include "nast/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace nast::fft {

namespace {

// FFTW plan creation is not thread-safe; execution on distinct buffers is.
// Plans are created once per (size, kind) with FFTW_UNALIGNED so they can be
// re-executed on any buffer via the new-array interface.
std::mutex g_plan_mutex;

fftw_plan plan_r2c(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> in(n);
  std::vector<cplx> out(n / 2 + 1);
  fftw_plan p = fftw_plan_dft_r2c_1d(
      static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, p);
  return p;
}

fftw_plan plan_c2r(std::size_t n) {
  static std::map<std::size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> in(n / 2 + 1);
  std::vector<double> out(n);
  fftw_plan p = fftw_plan_dft_c2r_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()), out.data(),
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(n, p);
  return p;
}

fftw_plan plan_c2c(std::size_t n, int sign) {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> buf(n);
  fftw_plan p = fftw_plan_dft_1d(
      static_cast<int>(n), reinterpret_cast<fftw_complex*>(buf.data()),
      reinterpret_cast<fftw_complex*>(buf.data()),
      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

}  // namespace

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void forward_r2c(const std::vector<double>& in, std::vector<cplx>& out) {
  const std::size_t n = in.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
  out.resize(n / 2 + 1);
  fftw_plan p = plan_r2c(n);
  // FFTW's r2c destroys the input for some sizes unless told otherwise; copy.
  std::vector<double> tmp(in);
  fftw_execute_dft_r2c(p, tmp.data(), reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse_c2r(const std::vector<cplx>& spec, std::size_t n,
                 std::vector<double>& out) {
  if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
  if (spec.size() != n / 2 + 1)
    throw std::invalid_argument("fft: spectrum size must be n/2+1");
  out.resize(n);
  fftw_plan p = plan_c2r(n);
  std::vector<cplx> tmp(spec);  // c2r destroys its input
  fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(tmp.data()), out.data());
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= inv;
}

void transform_c2c(std::vector<cplx>& data, int sign) {
  const std::size_t n = data.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
  fftw_plan p = plan_c2c(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(data.data()));
}

}  // namespace nast::fft
