// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: hybrid beamforming and adaptive RF chain activation for uplink
// cell-free mmWave massive MIMO
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <stdexcept>

#include "cfmimo/power.hpp"
#include "doctest.h"

using namespace cfmimo;

namespace {

// Arithmetic written out with the default component values (mW).
constexpr double kLo = 22.5, kPerChain64 = 64 * 30.0 + 40.0 + 200.0, kPerAntenna = 20.0 + 0.6 + 3.0;

}  // namespace

TEST_CASE("fixed activation power") {
  CHECK(power_fixed(40, 8, 64) == 752516.0);
  CHECK(power_fixed(40, 2, 64) == 234116.0);
  CHECK(power_fixed(40, 8, 64) == doctest::Approx(40 * kLo + 320 * kPerChain64 + 2560 * kPerAntenna));
  CHECK(power_fixed(40, 0, 64) == doctest::Approx(40 * kLo + 40 * 64 * kPerAntenna));
}

TEST_CASE("AP selection power") {
  CHECK(power_aps(40, 2, 8, 64) == 188804.0);
  CHECK(power_aps(40, 8, 8, 64) == power_fixed(40, 8, 64));
}

TEST_CASE("antenna selection power") {
  CHECK(power_as(40, 64, 32) == 351108.0);
  CHECK(power_as(40, 64, 0) == 13700.0);
}

TEST_CASE("adaptive activation power") {
  CHECK(power_arfa(ActivationVector::uniform(40, 0), 64) == 900.0);
  CHECK(power_arfa(ActivationVector::uniform(40, 2), 64) == power_fixed(40, 2, 64));
  CHECK(power_arfa(ActivationVector::uniform(40, 2), 64) == 234116.0);
  // Moving both chains of one AP elsewhere switches that AP's front end off.
  std::vector<int> n(40, 2);
  n[0] = 0;
  n[1] = 4;
  CHECK(power_arfa(ActivationVector(n), 64) == doctest::Approx(234116.0 - 64 * kPerAntenna));
  CHECK(64 * kPerAntenna == doctest::Approx(1510.4));
}

TEST_CASE("energy efficiency") {
  CHECK(energy_efficiency(0.0, 1000.0) == 0.0);
  CHECK(energy_efficiency(100.0, 250000.0) == doctest::Approx(0.4));
  CHECK_THROWS_AS(energy_efficiency(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(energy_efficiency(1.0, -5.0), std::invalid_argument);
}

TEST_CASE("power model validation") {
  PowerModel pm;
  CHECK_NOTHROW(pm.validate());
  pm.p_adc = -1.0;
  CHECK_THROWS(pm.validate());
}
