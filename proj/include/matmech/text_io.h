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

#ifndef MATMECH_TEXT_IO_H_
#define MATMECH_TEXT_IO_H_

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "matmech/matrix.h"

namespace matmech {

// Signals a malformed workload or factorization file. The message includes
// the path and the 1-based line number where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, int line, const std::string& message);

  int line() const { return line_; }

 private:
  int line_;
};

// Decimal text with enough digits to reconstruct the exact double.
std::string FormatDouble(double value);

void WriteMatrixRows(std::ostream& out, const Matrix& matrix);

// Reads one line, dropping a trailing carriage return and skipping blank
// lines. Advances *line for each physical line consumed. Returns false at
// end of input.
bool ReadDataLine(std::istream& in, std::string* out, int* line);

// Reads `rows` lines of exactly `cols` whitespace-separated entries each.
Matrix ReadMatrixRows(std::istream& in, std::size_t rows, std::size_t cols,
                      const std::string& path, int* line);

}  // namespace matmech

#endif  // MATMECH_TEXT_IO_H_
