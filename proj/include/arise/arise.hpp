/*
 * Copyright 2026 The ARISE Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARISE_ARISE_HPP_
#define ARISE_ARISE_HPP_

#include "arise/contrast.hpp"
#include "arise/datasets.hpp"
#include "arise/errors.hpp"
#include "arise/experiment.hpp"
#include "arise/graph.hpp"
#include "arise/injector.hpp"
#include "arise/metrics.hpp"
#include "arise/random.hpp"
#include "arise/region_proposal.hpp"
#include "arise/scoring.hpp"
#include "arise/synthetic.hpp"

#endif  // ARISE_ARISE_HPP_
