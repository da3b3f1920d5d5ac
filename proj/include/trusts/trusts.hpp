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

/// \file
/// Umbrella header for the whole library.

#pragma once

#include "trusts/analysis.hpp"
#include "trusts/circuit.hpp"
#include "trusts/circuit_io.hpp"
#include "trusts/contraction.hpp"
#include "trusts/errors.hpp"
#include "trusts/gates.hpp"
#include "trusts/rng.hpp"
#include "trusts/sparse_state.hpp"
#include "trusts/sweep.hpp"
#include "trusts/truncation.hpp"
