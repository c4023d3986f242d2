// Copyright 2026 The ioncat Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ioncat/error.hpp"
#include "ioncat/fock.hpp"
#include "ioncat/io.hpp"
#include "ioncat/linalg.hpp"
#include "ioncat/oracle.hpp"
#include "ioncat/protocol.hpp"
#include "ioncat/spin_algebra.hpp"
#include "ioncat/validation.hpp"
#include "ioncat/vibronic.hpp"
#include "ioncat/wigner.hpp"
