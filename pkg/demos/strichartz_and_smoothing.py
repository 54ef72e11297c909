"""Space-time norms of a water-wave flow on a grid.

Shows the admissible pairs for sigma = 1/2, the quotient of the space-time
norm by the weighted data norm for a few data, and the Kato smoothing
integral as the localisation width changes.
"""

import math

from dispersive.decay import predict
from dispersive.grid import band_limited_random, gaussian
from dispersive.littlewood_paley import parse_band
from dispersive.phases import make_model
from dispersive.smoothing import SmoothingSpec, kato_morawetz_integral
from dispersive.strichartz import QuotientCase, pairs_for_sigma, strichartz_quotient


def main():
    model = make_model("water_wave")
    band = parse_band("window:1:4")
    pred = predict(model, band)
    print(f"decay estimate {pred.lemma}: sigma = {pred.sigma:.4g}, beta = {pred.beta:.4g}")
    print("sharp pairs:", ", ".join(f"({p.q}, {p.r})" for p in pairs_for_sigma(pred.sigma)))

    cases = [QuotientCase(f"random:{sd}", model, band, band_limited_random(1, 2048, 120.0, 5.0, sd))
             for sd in range(3)]
    cases.append(QuotientCase("gaussian", model, band, gaussian(1, 2048, 120.0, width=0.1)))
    res = strichartz_quotient(cases, (4, "inf"), pred, 20.0)
    for label, q in res.quotients:
        print(f"  L^4_t L^inf_x quotient {label:10s} {q:.4f}")
    print(f"  spread {res.spread:.3f}")

    f = gaussian(1, 2048, 200.0, width=2.0)
    for a in (0.1, 1.0, 10.0):
        v = kato_morawetz_integral(model, f, SmoothingSpec(a=a), t_window=40.0)
        print(f"Kato integral a={a:5.1f}: {v:9.4f}   times sqrt(a): {v * math.sqrt(a):8.4f}")


if __name__ == "__main__":
    main()
