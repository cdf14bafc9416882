/*
 * Copyright 2026 The fmpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>

namespace fmp {

// Renders static report files for a finished run directory: a Markdown table
// plus, for single runs, an SVG per-round WER curve. Detects whether run_dir
// holds run-sim output (summary.json) or sweep output (sweep.json).
void write_report(const std::string& run_dir, const std::string& out_dir);

}  // namespace fmp
