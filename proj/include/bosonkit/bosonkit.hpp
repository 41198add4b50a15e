// Copyright 2026 The bosonkit authors
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

#include "bosonkit/deadtime_quadrature.hpp"
#include "bosonkit/detector.hpp"
#include "bosonkit/errors.hpp"
#include "bosonkit/ideal.hpp"
#include "bosonkit/io.hpp"
#include "bosonkit/math.hpp"
#include "bosonkit/matrix.hpp"
#include "bosonkit/pattern.hpp"
#include "bosonkit/permanent.hpp"
#include "bosonkit/realistic.hpp"
#include "bosonkit/rng.hpp"
#include "bosonkit/sampling.hpp"
#include "bosonkit/unitary.hpp"
