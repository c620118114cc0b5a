//
// Copyright 2026 the matmech authors
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

#include "matmech/text_io.h"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

namespace matmech {

ParseError::ParseError(const std::string& path, int line,
                       const std::string& message)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + message),
      line_(line) {}

std::string FormatDouble(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void WriteMatrixRows(std::ostream& out, const Matrix& matrix) {
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ' ';
      out << FormatDouble(matrix(i, j));
    }
    out << '\n';
  }
}

bool ReadDataLine(std::istream& in, std::string* out, int* line) {
  while (std::getline(in, *out)) {
    ++*line;
    if (!out->empty() && out->back() == '\r') out->pop_back();
    if (!out->empty()) return true;
  }
  return false;
}

Matrix ReadMatrixRows(std::istream& in, std::size_t rows, std::size_t cols,
                      const std::string& path, int* line) {
  std::vector<double> entries;
  entries.reserve(rows * cols);
  std::string text;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!ReadDataLine(in, &text, line)) {
      throw ParseError(path, *line, "file ends inside matrix rows");
    }
    std::istringstream fields(text);
    double value = 0.0;
    std::size_t seen = 0;
    while (fields >> value) {
      entries.push_back(value);
      ++seen;
    }
    if (!fields.eof()) {
      throw ParseError(path, *line, "malformed numeric entry");
    }
    if (seen != cols) {
      throw ParseError(path, *line,
                       "expected " + std::to_string(cols) +
                           " entries per row, found " + std::to_string(seen));
    }
  }
  return Matrix(rows, cols, std::move(entries));
}

}  // namespace matmech
