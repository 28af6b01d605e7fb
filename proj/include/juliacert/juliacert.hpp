// Copyright 2026 The juliacert Authors.
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

#include "juliacert/arith.hpp"
#include "juliacert/certificate.hpp"
#include "juliacert/dyadic.hpp"
#include "juliacert/error.hpp"
#include "juliacert/family.hpp"
#include "juliacert/filled.hpp"
#include "juliacert/geometry.hpp"
#include "juliacert/grid.hpp"
#include "juliacert/input.hpp"
#include "juliacert/omega.hpp"
#include "juliacert/oracle.hpp"
#include "juliacert/periodic.hpp"
#include "juliacert/poly.hpp"
#include "juliacert/raster.hpp"
#include "juliacert/roots.hpp"
