// Copyright 2026 The qsep-mc Authors
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

#include "qsep/density_matrix.hpp"
#include "qsep/ensembles.hpp"
#include "qsep/error.hpp"
#include "qsep/estimator.hpp"
#include "qsep/linalg.hpp"
#include "qsep/record.hpp"
#include "qsep/reference_tables.hpp"
#include "qsep/rng.hpp"
#include "qsep/separability.hpp"
