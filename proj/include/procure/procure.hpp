// Copyright 2026 The procure Authors
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

#include "procure/attacks.hpp"
#include "procure/clearing.hpp"
#include "procure/coalition.hpp"
#include "procure/errors.hpp"
#include "procure/market.hpp"
#include "procure/mechanism.hpp"
#include "procure/money.hpp"
#include "procure/participant_set.hpp"
#include "procure/random.hpp"
#include "procure/twostage.hpp"
