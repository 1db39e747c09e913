// Copyright 2026 The cmispread Authors
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

// Everything except the dense-matrix oracle, which needs Eigen; include
// "cmispread/dense.hpp" or "cmispread/oracle.hpp" for that.

#pragma once

#include "cmispread/analytics.hpp"
#include "cmispread/bell.hpp"
#include "cmispread/bits.hpp"
#include "cmispread/circuits.hpp"
#include "cmispread/clipped.hpp"
#include "cmispread/format.hpp"
#include "cmispread/gf2.hpp"
#include "cmispread/parallel.hpp"
#include "cmispread/pauli.hpp"
#include "cmispread/region.hpp"
#include "cmispread/rng.hpp"
#include "cmispread/symplectic.hpp"
#include "cmispread/tableau.hpp"
#include "cmispread/version.hpp"
