// Copyright 2026 The theta-forge Authors
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

// JSON encodings shared by the command line tools.
//
//   SiegelPoint:       {"g": 2, "re": [[..], [..]], "im": [[..], [..]]}
//   SymplecticElement: {"g": 2, "a": [[..]], "b": [[..]], "c": [[..]], "d": [[..]]}
//
// Matrices are row-major; a flat array of g*g numbers is accepted as well.
// Malformed documents raise ParseError, well-formed but invalid values (a
// non positive definite imaginary part, a non-symplectic matrix) DomainError.

#include <string>
#include <string_view>

#include "theta_forge/symplectic.hpp"

namespace theta_forge {

SiegelPoint siegel_point_from_json(std::string_view text);
std::string to_json(const SiegelPoint& tau);

SymplecticElement symplectic_from_json(std::string_view text);
std::string to_json(const SymplecticElement& gamma);

}  // namespace theta_forge
