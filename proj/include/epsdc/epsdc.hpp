// Copyright 2026 The epsdc Authors.
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

#include "epsdc/errors.hpp"
#include "epsdc/vec.hpp"
#include "epsdc/max_affine.hpp"
#include "epsdc/json_io.hpp"
#include "epsdc/lp.hpp"
#include "epsdc/subdiff.hpp"
#include "epsdc/geometry.hpp"
#include "epsdc/oracle.hpp"
#include "epsdc/certify.hpp"
#include "epsdc/report.hpp"
