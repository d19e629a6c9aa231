// Copyright 2026 The agm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AGM_AGM_HPP
#define AGM_AGM_HPP

#include "agm/algorithms.hpp"
#include "agm/bench.hpp"
#include "agm/conditions.hpp"
#include "agm/config.hpp"
#include "agm/errors.hpp"
#include "agm/lyapunov.hpp"
#include "agm/ode.hpp"
#include "agm/problems.hpp"
#include "agm/rng.hpp"
#include "agm/sequences.hpp"
#include "agm/series.hpp"
#include "agm/trajectory.hpp"
#include "agm/transforms.hpp"

#endif  // AGM_AGM_HPP
