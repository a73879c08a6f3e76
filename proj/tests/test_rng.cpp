/*
 Copyright 2026 slotlab developers
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slotlab/rng.hpp"

using namespace slotlab;

TEST_CASE("splitmix64 matches the published sequence") {
  // Known-answer vectors of the reference splitmix64.
  std::uint64_t state = 0;
  CHECK(rng::splitmix64_next(state) == 0xE220A8397B1DCDAFULL);
  CHECK(rng::splitmix64_next(state) == 0x6E789E6AA1B965F4ULL);
  CHECK(rng::splitmix64_next(state) == 0x06C45D188009454FULL);

  state = 42;
  CHECK(rng::splitmix64_next(state) == 0xBDD732262FEB6E95ULL);
  CHECK(rng::splitmix64_next(state) == 0x28EFE333B266F103ULL);
}

TEST_CASE("fnv1a64 matches known digests") {
  CHECK(rng::fnv1a64("") == 0xCBF29CE484222325ULL);
  CHECK(rng::fnv1a64("a") == 0xAF63DC4C8601EC8CULL);
  CHECK(rng::fnv1a64("foobar") == 0x85944171F73967E8ULL);
}

TEST_CASE("unit-interval conversion stays in [0,1)") {
  CHECK(rng::to_unit_interval(0) == 0.0);
  const double top = rng::to_unit_interval(~0ULL);
  CHECK(top < 1.0);
  CHECK(top > 0.9999999999);
}

TEST_CASE("streams are deterministic per seed") {
  rng::Stream a(123456);
  rng::Stream b(123456);
  rng::Stream c(123457);
  bool all_equal = true;
  bool any_differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double va = a.next_unit();
    const double vb = b.next_unit();
    const double vc = c.next_unit();
    all_equal = all_equal && va == vb;
    any_differs = any_differs || va != vc;
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_differs);
}

TEST_CASE("next_int covers its range") {
  rng::Stream s(7);
  bool saw_lo = false, saw_hi = false;
  for (int i = 0; i < 2000; ++i) {
    const auto v = s.next_int(5, 8);
    CHECK(v >= 5);
    CHECK(v <= 8);
    saw_lo = saw_lo || v == 5;
    saw_hi = saw_hi || v == 8;
  }
  CHECK(saw_lo);
  CHECK(saw_hi);
}
