"""Regenerates pettis_defect.json.

Truncated Pettis function with N levels: atom n (1..N) has mass 4^-n and value
2^n e_n in l_2^N, the last atom takes the remaining mass and value 0. The
defect at the coarsest partition is the largest singular value of the rows
sqrt(mu_i) (f_i - E f), since the dual ball of l_2 is the Euclidean ball and
p = 2.
"""
import json

import numpy as np


def coarsest_defect(levels):
    masses = [4.0 ** -n for n in range(1, levels + 1)]
    masses.append(1.0 - sum(masses))
    values = np.zeros((levels + 1, levels))
    for n in range(1, levels + 1):
        values[n - 1, n - 1] = 2.0 ** n
    mean = np.asarray(masses) @ values
    rows = np.sqrt(masses)[:, None] * (values - mean)
    return np.linalg.svd(rows, compute_uv=False)


if __name__ == "__main__":
    sv = coarsest_defect(3)
    out = {"levels": 3, "p": 2, "singular_values": [float(s) for s in sv],
           "coarsest_defect": float(sv[0]), "floor": 0.9}
    with open("pettis_defect.json", "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    print(out)
