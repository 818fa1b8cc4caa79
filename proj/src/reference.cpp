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

#include "hilsim/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace hilsim {

namespace {
// Sample instants are k * base_step; this absorbs the rounding of that product.
constexpr double kTimeEps = 1e-9;
}  // namespace

std::string to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::kStep: return "step";
    case ReferenceKind::kSquare: return "square";
    case ReferenceKind::kConst: return "const";
  }
  return "step";
}

ReferenceKind reference_kind_from_string(const std::string& s) {
  if (s == "step") return ReferenceKind::kStep;
  if (s == "square") return ReferenceKind::kSquare;
  if (s == "const") return ReferenceKind::kConst;
  throw std::invalid_argument("unknown reference kind '" + s + "' (expected step, square or const)");
}

double ReferenceSignal::at(double t_s) const {
  switch (kind) {
    case ReferenceKind::kConst:
      return amplitude_V;
    case ReferenceKind::kStep:
      return t_s + kTimeEps >= start_s ? amplitude_V : 0.0;
    case ReferenceKind::kSquare: {
      if (t_s + kTimeEps < start_s) return 0.0;
      const double half = period_s / 2.0;
      const auto phase = static_cast<long long>(std::floor((t_s - start_s + kTimeEps) / half));
      return phase % 2 == 0 ? amplitude_V : 0.0;
    }
  }
  return 0.0;
}

}  // namespace hilsim
