// Copyright 2026 The trusts Authors
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

#pragma once

#include <stdexcept>

namespace trusts {

/// Thrown when a computation would exceed a configured memory or capacity
/// bound (dense-vector qubit limit, workspace overflow, exact-mode memory).
class ResourceLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thrown when every amplitude of a state has been truncated or cancelled
/// away, leaving nothing to renormalize.
class ZeroStateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace trusts
