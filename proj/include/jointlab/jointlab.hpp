// Copyright 2026 The jointlab Authors
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

#include "jointlab/bounds.hpp"
#include "jointlab/joint_measurement.hpp"
#include "jointlab/matrix.hpp"
#include "jointlab/optimize.hpp"
#include "jointlab/pair_statistics.hpp"
#include "jointlab/random.hpp"
#include "jointlab/report.hpp"
#include "jointlab/sampling.hpp"
#include "jointlab/suites.hpp"
