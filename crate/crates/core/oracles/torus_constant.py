"""Brute-force oracle for the cubic lattice constant S = sum' (l^2+m^2+n^2)^-2.

Sums every integer point inside a ball of radius R and adds the continuum
tail 4*pi/R. The remaining error is the lattice-point discrepancy on the
sphere, O(R^-3) on average. Run at several radii to show convergence.

    python3 torus_constant.py
"""
import numpy as np


def partial_sum(radius: int) -> float:
    r2max = radius * radius
    ax = np.arange(-radius, radius + 1, dtype=np.float64)
    total = 0.0
    for l in ax:
        m, n = np.meshgrid(ax, ax, indexing="ij")
        d2 = l * l + m * m + n * n
        mask = (d2 <= r2max) & (d2 > 0)
        total += np.sum(1.0 / d2[mask] ** 2)
    return total


def main() -> None:
    for radius in (50, 100, 200, 400):
        s = partial_sum(radius) + 4.0 * np.pi / radius
        print(f"R={radius:4d}  S={s:.10f}")


if __name__ == "__main__":
    main()
