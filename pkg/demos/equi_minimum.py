"""Equi-partitions give the slowest possible decay.

Enumerate the equi family, look at sqrt(j) a_j on the perfect squares (where
it is exactly N/(2N-1)), fit the power law, and compare the p-th power sums
of a few random odd families against the zeta lower bound.
"""
import math

from oddpart import (c_sequence, decay_fit, equi_family, enumerate_family,
                     random_odd_family, tau_bracket)


def main():
    fam = equi_family()
    print("first terms:", [str(v) for v in enumerate_family(fam, 10, origins=False)])

    for j, c in c_sequence(fam, [1, 4, 100, 10**4, 10**6]):
        print(f"  sqrt({j}) a_{j} = {c}  ({float(c):.6f})")

    fit = decay_fit(fam, (10**3, 10**6))
    print(f"fit on [1e3, 1e6]: a_j ~ {fit.C_hat:.6f} j^{fit.alpha_hat:.5f} ({fit.method})")

    print("tau(3) for equi vs pi^2/8:")
    b = tau_bracket(fam, 3, 10**4)
    print(f"  [{b.lower!r}, {b.upper!r}] vs {math.pi**2 / 8!r}")

    print("random odd families sit above the bound:")
    for seed in range(4):
        rb = tau_bracket(random_odd_family(seed, 0.5), 3, 200)
        print(f"  seed {seed}: tau(3) in [{rb.lower:.6f}, {rb.upper:.6f}], bound {rb.bound_ref:.6f}")


if __name__ == "__main__":
    main()
