// Copyright 2026 The LabelDP Authors
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

#ifndef LABELDP_PRIVACY_HPP
#define LABELDP_PRIVACY_HPP

#include <limits>
#include <map>
#include <string>

namespace labeldp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// (epsilon, delta) guarantee attached to every mechanism output, together
// with the parameters that produced it. epsilon may be +inf (non-private
// baselines are first-class sweep points).
struct PrivacyReceipt {
  double epsilon = kInfinity;
  double delta = 0.0;
  std::string mechanism;                 // "central" | "p2p" | "lap-rr"
  std::map<std::string, double> params;  // parameter set, serialized by name
};

}  // namespace labeldp

#endif  // LABELDP_PRIVACY_HPP
