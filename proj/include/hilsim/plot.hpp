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

#include <iosfwd>
#include <span>
#include <string>

#include "hilsim/trace.hpp"

namespace hilsim {

// Self-contained SVG with two stacked panels sharing the time axis:
// reference and measured output on top, commanded and actuated control
// below, saturated steps marked on the lower panel.
// Throws std::invalid_argument for an empty trace.
void plot_trace_svg(std::span<const TraceRecord> trace, std::ostream& os);

// Reads a trace CSV and writes the SVG. Nothing is written if the CSV is
// malformed or empty.
void plot(const std::string& trace_path, const std::string& out_svg);

}  // namespace hilsim
