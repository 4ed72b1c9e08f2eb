// Copyright 2026 The rzone Authors
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

#ifndef RZONE_TESTS_TEST_DATA_H_
#define RZONE_TESTS_TEST_DATA_H_

#include <string>

inline std::string CasePath(const std::string& name) {
  return std::string(RZONE_DATA_DIR) + "/cases/" + name + ".json";
}

#endif  // RZONE_TESTS_TEST_DATA_H_
