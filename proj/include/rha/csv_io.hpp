/*
 * Copyright 2026 The RHA Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rha/dataset.hpp"
#include "rha/selectors.hpp"

namespace rha::io {

// Fixed 12 significant digits ("%.12g") for every real written to CSV.
std::string format_real(double v);

// Dataset CSV: header `id,f0,...,f{d-1},y,c`, one row per sample.
// Parse errors (kParse) carry the 1-based line number.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const Dataset& ds, std::ostream& out);
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);

// Annotator CSV: header `id,f0,...,f{d-1},s0,s1,...`; rows may leave
// trailing score cells empty. y is the mean score and c the expected
// squared error of a uniformly picked annotator.
struct AnnotatedDataset {
  Dataset data;
  std::vector<std::vector<double>> scores;
};
AnnotatedDataset read_annotator_csv(std::istream& in);
AnnotatedDataset read_annotator_csv(const std::filesystem::path& path);

// Trace CSV: `step,chosen_id,marginal_gain,loss_after`.
void write_trace_csv(const Selection& sel, const Dataset& train, std::ostream& out);

}  // namespace rha::io
