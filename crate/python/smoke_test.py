#!/usr/bin/env python3
"""Builds the vdbpy extension, imports it, and exercises the main surface.

Run from anywhere inside the repository:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_and_import():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "vdb-py"], cwd=REPO, check=True
    )
    built = REPO / "target" / "release" / "libvdbpy.so"
    stage = Path(tempfile.mkdtemp(prefix="vdbpy-"))
    shutil.copy(built, stage / "vdbpy.so")
    sys.path.insert(0, str(stage))
    import vdbpy

    return vdbpy


def main():
    v = build_and_import()

    # Exact distribution basics: a noiseless channel never moves a word.
    uni = v.InputDistribution.uniform(4)
    clean = v.distortion_pmf(v.ChannelModel.noiseless(4), uni)
    assert clean.pmf[0] == 1.0 and all(t == 0.0 for t in clean.tail)

    # Doubling computation agrees with the word-by-word oracle.
    ch = v.ChannelModel.symmetric(4, 0.05, 0.02)
    fast = v.distortion_pmf(ch, uni)
    oracle = v.brute_force_oracle(ch, uni)
    assert max(abs(a - b) for a, b in zip(fast.pmf, oracle.pmf)) < 1e-12
    assert abs(sum(fast.pmf) - 1.0) < 1e-12

    # Monte Carlo is seeded and lands near the exact tail.
    mc1 = v.monte_carlo_distortion(ch, uni, 20000, 7)
    mc2 = v.monte_carlo_distortion(ch, uni, 20000, 7)
    assert mc1.pmf == mc2.pmf
    assert abs(mc1.tail_at(0) - fast.tail_at(0)) < 0.02

    # Search: the winner satisfies the bound it was searched under.
    t, p_rand = v.generate_random_constraint(6, 123)
    res = v.adaptive_search_bit_level(v.InputDistribution.uniform(6), t)
    assert res.feasible and v.satisfies_constraint(res.induced, t)
    assert res.benefit == v.benefit(res.best)
    assert len(res.step_benefits) == 6
    grid = v.exhaustive_search_bit_independent(v.InputDistribution.uniform(6), t)
    assert grid.evaluations == 65 * 65

    # The drawn generator vector is itself feasible on both polarities.
    otail = v.oracle_tail(p_rand, v.InputDistribution.uniform(6))
    assert v.satisfies_constraint(otail, t)

    # Bus model: higher tap, weaker pull-up, fatter tail, less power.
    params = v.CircuitParams.preset("warp-100k")
    ch_lo = v.channel_from_profile(v.DcpProfile.uniform(4, 0), params)
    ch_hi = v.channel_from_profile(v.DcpProfile.uniform(40, 0), params)
    uni8 = v.InputDistribution.uniform(8)
    assert v.distortion_pmf(ch_hi, uni8).tail_at(0) >= v.distortion_pmf(
        ch_lo, uni8
    ).tail_at(0)
    p_strong = v.power_estimate(params, 0, 0.5, 100e3)
    p_weak = v.power_estimate(params, params.taps - 1, 0.5, 100e3)
    assert p_strong > p_weak > 0.0

    # Selection machine: one word is R_1..R_L framed by R_0.
    cfg = v.AdaptationConfig(4, [40, 17, 99, 3, 250])
    trace = v.selection_trace(cfg, 1, 7)
    assert trace == [40, 17, 99, 3, 250, 40, 40]
    held = v.run_stimulus(cfg, [(True, True), (False, False), (True, False)])
    assert held == [17, 17, 99]

    assert not math.isnan(v.MAX_WIDTH)
    print("smoke test passed")


if __name__ == "__main__":
    main()
