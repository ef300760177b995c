// Copyright 2026 The hexcode Authors
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

#pragma once

#include "hexcode/pauli.hpp"
#include "hexcode/stabilizer.hpp"
#include "hexcode/lattice.hpp"
#include "hexcode/models.hpp"
#include "hexcode/state.hpp"
#include "hexcode/symmetry.hpp"
#include "hexcode/eigensolver.hpp"
#include "hexcode/chains.hpp"
#include "hexcode/wilson.hpp"
#include "hexcode/io.hpp"
