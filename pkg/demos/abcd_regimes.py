"""Print the high-frequency regime of each canonical abcd tuple.

For every regime the script shows the exact classification, the polynomial
R whose positive roots control the zeros of g'', and the exponent of g''
fitted from the phase itself on [1e3, 1e4].
"""

from dispersive.abcd import CANONICAL, classify
from dispersive.phases import fit_asymptotic, make_model


def main():
    print(f"{'row':>3s}  {'(a, b, c, d)':24s} {'alpha':>5s} {'ell':>8s} {'fit':>7s}  R")
    for row, tup in sorted(CANONICAL.items()):
        c = classify(*tup)
        fit = fit_asymptotic(make_model("abcd", **dict(zip("abcd", tup))), "infinity", 2,
                             window=(1e3, 1e4))
        args = ", ".join(str(v) for v in tup)
        print(f"{row:3d}  ({args:22s}) {c.alpha:5d} {c.ell:8.5f} {fit.alpha:7.3f}  {c.R}")


if __name__ == "__main__":
    main()
