//------------------------------------------------------------------------------
//
//   Copyright 2026 The GaborNet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include "gabornet/checkpoint.hpp"
#include "gabornet/csv.hpp"
#include "gabornet/error.hpp"
#include "gabornet/features.hpp"
#include "gabornet/gabor.hpp"
#include "gabornet/idx.hpp"
#include "gabornet/image.hpp"
#include "gabornet/linalg.hpp"
#include "gabornet/mlp.hpp"
#include "gabornet/model_digits.hpp"
#include "gabornet/parallel.hpp"
#include "gabornet/rng.hpp"
#include "gabornet/stats.hpp"
#include "gabornet/trainer.hpp"
