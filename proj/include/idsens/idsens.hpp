// Copyright 2026 The idsens Authors
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

#include "idsens/artifact.hpp"
#include "idsens/booster.hpp"
#include "idsens/classes.hpp"
#include "idsens/confusion.hpp"
#include "idsens/csv.hpp"
#include "idsens/data_pipeline.hpp"
#include "idsens/dataset_analysis.hpp"
#include "idsens/error.hpp"
#include "idsens/feature_selection.hpp"
#include "idsens/forest.hpp"
#include "idsens/matrix.hpp"
#include "idsens/metrics.hpp"
#include "idsens/overlap.hpp"
#include "idsens/parallel.hpp"
#include "idsens/pipeline.hpp"
#include "idsens/rng.hpp"
#include "idsens/run_config.hpp"
#include "idsens/schema.hpp"
#include "idsens/tree.hpp"
#include "idsens/version.hpp"
