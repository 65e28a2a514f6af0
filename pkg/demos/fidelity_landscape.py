#!/usr/bin/env python3
"""Tabulate fidelity and transfer sum against symmetric added noise.

Every criterion crosses its threshold at the same place, N = 1: fidelity
passes 2/3 exactly where the noise product drops below 1 and the transfer
sum rises above 1.  The table makes the shared crossing visible.
"""

import numpy as np

from cvteleport import NoiseBudget, budget_to_channel, full_report

NOISE_LEVELS = np.linspace(0.0, 2.0, 21)


def main():
    print(f"{'N':>5s} {'fidelity':>10s} {'T_sum':>8s} {'N_product':>10s}   verdicts")
    for n in NOISE_LEVELS:
        # symmetric unity-gain budget with total added noise n per quadrature
        c = (n - 2.0) / 2.0
        report = full_report(
            budget_to_channel(NoiseBudget(1.0, 1.0, 1.0, 1.0, c, c))
        )
        marks = "".join(
            flag and key[0].upper() or "-"
            for key, flag in (
                ("f>1/2", report.verdicts["fidelity_above_half"]),
                ("g>2/3", report.verdicts["fidelity_above_two_thirds"]),
                ("n<1", report.verdicts["n_product_below_one"]),
                ("t>1", report.verdicts["t_sum_above_one"]),
            )
        )
        print(
            f"{n:5.2f} {report.fidelity:10.6f} "
            f"{report.T_X_out + report.T_Y_out:8.4f} "
            f"{report.N_X_out * report.N_Y_out:10.6f}   {marks}"
        )
    print()
    print("marks: F fidelity beats 1/2, G fidelity beats 2/3, "
          "N noise product below 1, T transfer sum above 1")


if __name__ == "__main__":
    main()
