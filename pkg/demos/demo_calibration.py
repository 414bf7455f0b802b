"""Rerun the calibration grid that froze the default experiment parameters.

The reference accuracy quadruple is Associative 93.8/70.0 and CausalAnchored
94.4/94.4 (percent, train/test).  Candidates are scanned starting from
(alpha=1.0, sigma_s=0.75), then row-major over the coarse grid; the first
pair whose seed-42 report lands within 3 points of all four cells is the one
frozen in ShiftExperimentConfig.  Pass --full to scan the whole grid instead
of stopping at the first hit.
"""

import sys
from dataclasses import replace

from cvp import ShiftExperimentConfig, run_experiment, shift_world_graph

TARGET = {"Associative": (93.8, 70.0), "CausalAnchored": (94.4, 94.4)}
ALPHAS = [0.5 + 0.25 * i for i in range(7)]     # 0.5 .. 2.0
SIGMAS = [round(0.4 + 0.1 * i, 2) for i in range(9)]  # 0.4 .. 1.2

graph = shift_world_graph()
full = "--full" in sys.argv
candidates = [(1.0, 0.75)] + [(a, s) for a in ALPHAS for s in SIGMAS]

print("alpha sigma_s | assoc train/test | anchored train/test")
for alpha, sigma in candidates:
    config = replace(ShiftExperimentConfig(), spurious_strength=alpha, spurious_noise_sd=sigma)
    report = run_experiment(config, graph)
    cells = {m.name: (m.train_accuracy * 100, m.test_accuracy * 100) for m in report.models}
    hit = all(
        abs(cells[name][i] - TARGET[name][i]) <= 3.0 for name in TARGET for i in (0, 1)
    )
    marker = "  <-- first hit" if hit else ""
    print(
        f"{alpha:5.2f} {sigma:7.2f} | "
        f"{cells['Associative'][0]:5.1f} / {cells['Associative'][1]:5.1f}   | "
        f"{cells['CausalAnchored'][0]:5.1f} / {cells['CausalAnchored'][1]:5.1f}{marker}"
    )
    if hit and not full:
        frozen = ShiftExperimentConfig()
        print(
            f"\nfrozen defaults: alpha={frozen.spurious_strength}, "
            f"sigma_s={frozen.spurious_noise_sd}"
        )
        assert (alpha, sigma) == (frozen.spurious_strength, frozen.spurious_noise_sd)
        break
