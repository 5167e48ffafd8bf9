// Copyright 2026 The idsens Authors
//
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

// The overlap correction on a handful of hand-written score rows.
//
// Validation: three Analysis records scored by some model. Two are predicted
// Backdoor with Analysis as runner-up (gaps 0.03 and 0.05), so those gaps are
// learned. The middle one has Fuzzers between the two and is ignored. A test
// row whose Backdoor-over-Analysis gap falls inside the learned range gets
// its Analysis score raised by the mean gap, flipping the prediction.

#include <cstdio>

#include "idsens/idsens.hpp"

using idsens::TrafficClass;

int main() {
    idsens::ScoreMatrix validation(0, idsens::kNumClasses);
    validation.append_row(std::array<double, 10>{0.78, 0.81, 0.02, 0.01, 0.24, 0.08, 0.11, 0.19, 0.08, 0.22});
    validation.append_row(std::array<double, 10>{0.09, 0.54, 0.01, 0.03, 0.41, 0.04, 0.01, 0.06, 0.12, 0.14});
    validation.append_row(std::array<double, 10>{0.40, 0.45, 0.05, 0, 0.10, 0, 0, 0, 0, 0});
    const std::vector<int> truth(3, idsens::index_of(TrafficClass::Analysis));

    const auto model = idsens::fit_overlap_model(validation, truth);
    const auto a = static_cast<std::size_t>(idsens::index_of(TrafficClass::Analysis));
    const auto b = static_cast<std::size_t>(idsens::index_of(TrafficClass::Backdoor));
    std::printf("learned gap Analysis->Backdoor: mean %.2f, sd %.2f\n", model.mean[a][b], model.stddev[a][b]);

    idsens::ScoreMatrix test(0, idsens::kNumClasses);
    test.append_row(std::array<double, 10>{0.500, 0.535, 0, 0, 0.1, 0, 0, 0, 0, 0});
    const auto corrected = idsens::modify_membership_scores(test, model);
    std::printf("before: %s  after: %s\n", std::string(idsens::class_name(idsens::argmax(test.row(0)))).c_str(),
                std::string(idsens::class_name(idsens::argmax(corrected.row(0)))).c_str());
    return 0;
}
