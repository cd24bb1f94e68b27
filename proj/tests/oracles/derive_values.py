#!/usr/bin/env python3
# Copyright 2026 The idtest Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Recomputes the frozen constants used by the unit tests at 50 digits."""

from math import comb

import mpmath as mp

mp.mp.dps = 50


def scheme(n, eps, C):
    base = mp.mpf(eps) / (2 * n)
    ratio = 1 + mp.mpf(eps) / C
    k = int(mp.ceil(mp.log(2 * n / mp.mpf(eps)) / mp.log(ratio)))
    j_star = int(mp.ceil(mp.log((1 / mp.sqrt(n)) / base) / mp.log(ratio)))
    return base, ratio, k, j_star


def main():
    base, ratio, k, j_star = scheme(1024, 0.5, 100)
    print(f"n=1024 eps=0.5 C=100: k={k} j_star={j_star}")
    print(f"  upper(972)={mp.nstr(base * ratio**972, 15)}")
    print(f"  upper(973)={mp.nstr(base * ratio**973, 15)}  (1/32 = 0.03125)")

    base, ratio, k, j_star = scheme(400, 0.8, 1)
    print(f"n=400 eps=0.8 C=1: k={k} j_star={j_star}")

    base, ratio, k, j_star = scheme(100, 2.0, 1)
    print(f"n=100 eps=2 C=1: k={k} j_star={j_star}")

    tail = sum(comb(9, t) * mp.mpf(2) ** t / mp.mpf(3) ** 9 for t in range(5, 10))
    print(f"P[Binomial(9, 2/3) >= 5] = {mp.nstr(tail, 12)}")

    # Budget ratio B(4e4)/B(1e4) for the calibrated practical configuration:
    # every phase is capped at 4 sqrt(n) except S1 = 3 sqrt(n) ln(n+1).
    def budget(n, eps=0.5, C=100, c2=3, c4=1, factor=4):
        k = scheme(n, eps, C)[2]
        cap = mp.ceil(factor * mp.sqrt(n))
        s1 = mp.ceil(c2 * mp.sqrt(n) * mp.log(n + 1))
        moment = mp.ceil(c4 * mp.sqrt(n) * mp.log(n + 1) / eps**2)
        return 2 * cap + s1 + moment

    print(f"budget ratio 4e4/1e4 = {mp.nstr(budget(40000) / budget(10000), 10)}")


if __name__ == "__main__":
    main()
