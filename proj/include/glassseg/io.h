// Copyright 2026 The GlassSeg Authors.
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

#ifndef GLASSSEG_IO_H_
#define GLASSSEG_IO_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace glassseg {

// Whole-file helpers. Failures to open, read or write are reported as
// kNotFound / kPermissionDenied / kUnavailable so callers can distinguish
// I/O trouble from malformed content (kInvalidArgument).
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view bytes);

// True for the status codes produced by the helpers above.
bool IsIoError(const absl::Status& status);

}  // namespace glassseg

#endif  // GLASSSEG_IO_H_
