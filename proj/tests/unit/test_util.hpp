// Copyright 2026 The corerank Authors
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

#ifndef CORERANK_TESTS_UNIT_TEST_UTIL_HPP_
#define CORERANK_TESTS_UNIT_TEST_UTIL_HPP_

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "corerank/preference.hpp"
#include "corerank/types.hpp"

namespace corerank::testing {

inline Matrix Column(std::initializer_list<double> values) {
  Matrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

// Random complementary preference matrix with entries in [0, 1].
inline PreferenceMatrix RandomComplementary(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix p = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      p(i, j) = u(rng);
      p(j, i) = 1.0 - p(i, j);
    }
  }
  return PreferenceMatrix::External(p);
}

// Scratch directory under the build tree (or the system temp dir).
inline std::filesystem::path TempDir(const std::string& name) {
  const char* root = std::getenv("CORERANK_TEST_TMP");
  std::filesystem::path dir =
      root ? std::filesystem::path(root)
           : std::filesystem::temp_directory_path() / "corerank_tests";
  dir /= name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace corerank::testing

#endif  // CORERANK_TESTS_UNIT_TEST_UTIL_HPP_
