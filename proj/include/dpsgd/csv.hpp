//
// Copyright 2026 The dpsgd-bounds Authors
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

#ifndef DPSGD_CSV_HPP_
#define DPSGD_CSV_HPP_

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace dpsgd {

// All floating-point values in CSV output and CLI reports carry 12
// significant digits.
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

inline void write_csv_row(std::ostream& os,
                          const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace dpsgd

#endif  // DPSGD_CSV_HPP_
