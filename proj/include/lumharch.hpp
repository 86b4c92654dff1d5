// Copyright 2026 The lumharch Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include "lumharch/cli.hpp"
#include "lumharch/experiment.hpp"
#include "lumharch/hierarchy.hpp"
#include "lumharch/lp_format.hpp"
#include "lumharch/model.hpp"
#include "lumharch/network.hpp"
#include "lumharch/oracle.hpp"
#include "lumharch/simplex.hpp"
#include "lumharch/solver.hpp"
#include "lumharch/topologies.hpp"
