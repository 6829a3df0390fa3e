// Copyright 2026 The udcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "udcert/certify/certifier.hpp"
#include "udcert/certify/residual.hpp"
#include "udcert/core/errors.hpp"
#include "udcert/core/hermitian.hpp"
#include "udcert/core/pauli.hpp"
#include "udcert/core/random.hpp"
#include "udcert/core/scheme.hpp"
#include "udcert/io/reports.hpp"
#include "udcert/io/scheme_io.hpp"
#include "udcert/polybases/chebyshev.hpp"
#include "udcert/polybases/pb_scheme.hpp"
#include "udcert/recovery/projection.hpp"
#include "udcert/recovery/recover.hpp"
#include "udcert/recovery/stability.hpp"
#include "udcert/search/search.hpp"
