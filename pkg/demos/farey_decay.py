"""Farey gaps decay like j^(-2/3).

The gap 1/(q q') between neighbours in F_o appears min(q, q') times across
all orders, so the number of gaps at least 1/t grows like (8/pi^2) t^(3/2).
The fit below confirms the exponent and prefactor.
"""
import math

from oddpart import decay_fit, enumerate_family, farey_family, farey_row


def main():
    for o in range(1, 6):
        print(f"order {o}:", " ".join(str(v) for v in farey_row(o).lengths))
    fam = farey_family()
    print("prefix:", [str(v) for v in enumerate_family(fam, 15, origins=False)])
    fit = decay_fit(fam, (10**3, 10**5))
    print(f"fit on [1e3, 1e5]: a_j ~ {fit.C_hat:.4f} j^{fit.alpha_hat:.4f}")
    print(f"counting prediction: {(8 / math.pi**2) ** (2 / 3):.4f} j^-0.6667")


if __name__ == "__main__":
    main()
