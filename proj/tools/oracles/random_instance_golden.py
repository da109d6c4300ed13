#!/usr/bin/env python3
# Copyright 2026 The epsdc Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent reimplementation of the seeded instance generator.

Writes the golden pair for random_instance(dim, nf, ng, range, seed) as JSON.
"""

import argparse
import json

MASK = (1 << 64) - 1


class MT19937_64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & MASK
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK
        self.idx = 312

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(312):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.idx = 0

    def next(self):
        if self.idx >= 312:
            self._twist()
        y = self.mt[self.idx]
        self.idx += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & MASK

    def uniform01(self):
        return (self.next() >> 11) * 2.0**-53


def generate(dim, nf, ng, coeff_range, seed):
    rng = MT19937_64(seed)

    def draw(count):
        pieces = []
        for _ in range(count):
            a = [(2.0 * rng.uniform01() - 1.0) * coeff_range for _ in range(dim)]
            b = (2.0 * rng.uniform01() - 1.0) * coeff_range
            pieces.append({"a": a, "b": b})
        return {"dim": dim, "pieces": pieces}

    f = draw(nf)
    g = draw(ng)
    return {"f": f, "g": g}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--nf", type=int, default=2)
    p.add_argument("--ng", type=int, default=1)
    p.add_argument("--range", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=7)
    args = p.parse_args()
    # Sanity check against the C++ standard: the 10000th output of a
    # default-seeded mt19937_64 is 9981545732273789042.
    ref = MT19937_64(5489)
    for _ in range(9999):
        ref.next()
    assert ref.next() == 9981545732273789042
    print(json.dumps(generate(args.dim, args.nf, args.ng, args.range, args.seed), indent=2))


if __name__ == "__main__":
    main()
