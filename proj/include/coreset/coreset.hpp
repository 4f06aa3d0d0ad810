// Copyright 2026 The Authors.
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

#ifndef CORESET_CORESET_HPP_
#define CORESET_CORESET_HPP_

#include "coreset/algorithms.hpp"
#include "coreset/clustering.hpp"
#include "coreset/errors.hpp"
#include "coreset/factor_lp.hpp"
#include "coreset/instance.hpp"
#include "coreset/instances.hpp"
#include "coreset/io.hpp"
#include "coreset/item_set.hpp"
#include "coreset/lp_solver.hpp"
#include "coreset/oracle.hpp"
#include "coreset/parallel.hpp"
#include "coreset/pipeline.hpp"
#include "coreset/random.hpp"

#endif  // CORESET_CORESET_HPP_
