// Copyright (c) 2026 The HyGEN-cpp Authors. All Rights Reserved.
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

#include "hygen/autodiff.hpp"
#include "hygen/checkpoint.hpp"
#include "hygen/config.hpp"
#include "hygen/discriminator.hpp"
#include "hygen/encoder.hpp"
#include "hygen/errors.hpp"
#include "hygen/eval.hpp"
#include "hygen/generator.hpp"
#include "hygen/gradcheck.hpp"
#include "hygen/gradient_check.hpp"
#include "hygen/hypergraph.hpp"
#include "hygen/model.hpp"
#include "hygen/parameters.hpp"
#include "hygen/random.hpp"
#include "hygen/sampler.hpp"
#include "hygen/synthetic.hpp"
#include "hygen/training.hpp"
