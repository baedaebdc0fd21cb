// include/avst/base/text-utils.h

// Copyright 2026  The AVST Authors

// See the top-level LICENSE file for the full license text.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef AVST_BASE_TEXT_UTILS_H_
#define AVST_BASE_TEXT_UTILS_H_

#include <string>
#include <string_view>
#include <vector>

namespace avst {

std::vector<std::string> SplitWhitespace(std::string_view line);
std::string Trim(std::string_view s);
std::string JoinWords(const std::vector<std::string> &words);

/// Formats a fraction as a percentage with one decimal, e.g. 0.1667 -> "16.7%".
std::string FormatPercent(double fraction);

/// Reads a text file into lines; trailing '\r' is stripped.
std::vector<std::string> ReadLines(const std::string &path);

/// Directory that contains `path` ("." when there is none).
std::string DirName(const std::string &path);

/// `rel` unchanged when absolute, otherwise joined onto `base_dir`.
std::string ResolvePath(const std::string &base_dir, const std::string &rel);

}  // namespace avst

#endif  // AVST_BASE_TEXT_UTILS_H_
