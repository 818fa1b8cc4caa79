// Copyright 2026 The hilsim Authors
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

#include <string>

namespace hilsim {

enum class ReferenceKind { kStep, kSquare, kConst };

std::string to_string(ReferenceKind k);
ReferenceKind reference_kind_from_string(const std::string& s);

// Setpoint generator.
//   step:   0 before start_s, amplitude_V from start_s on
//   square: 0 before start_s, then alternates amplitude_V / 0 every period_s/2
//   const:  amplitude_V always
struct ReferenceSignal {
  ReferenceKind kind = ReferenceKind::kStep;
  double amplitude_V = 1.0;
  double start_s = 0.0;
  double period_s = 20.0;

  double at(double t_s) const;
  bool operator==(const ReferenceSignal&) const = default;
};

}  // namespace hilsim
