// Copyright 2026 The qmt Authors
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

#include "qmt/error.hpp"
#include "qmt/event.hpp"
#include "qmt/scalar.hpp"
#include "qmt/theory.hpp"
#include "qmt/partition.hpp"
#include "qmt/grainings.hpp"
#include "qmt/coevent.hpp"
#include "qmt/valuations.hpp"
#include "qmt/schemes.hpp"
#include "qmt/poset.hpp"
#include "qmt/topos.hpp"
#include "qmt/constructions.hpp"
